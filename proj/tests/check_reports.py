#!/usr/bin/env python3
"""Runs the CLI over a fixed set of invocations.

Each JSON report must validate against schemas/report.schema.json and be
byte-identical on a second run. Exit codes must match.
"""

import json
import os
import subprocess
import sys

import jsonschema

cli, root = sys.argv[1], sys.argv[2]
data = os.path.join(root, "data")

OK = [
    ["validate", f"{data}/4_1.cfk.json"],
    ["sarkar", "bundled:4_1"],
    ["sarkar", "bundled:4_1x4_1"],
    ["delta", "bundled:4_1x4_1_tau", "--m", "1"],
    ["delta", "bundled:4_1x4_1", "--m", "1"],
    ["delta", "bundled:4_1x4_1_tau", "--m", "2"],
    ["delta", "bundled:T2_3xT2_3"],
    ["s-nontrivial", "bundled:dot+box3"],
    ["s-nontrivial", "bundled:dot+box2"],
    ["conn", "bundled:4_1"],
    ["conn", "bundled:T2_3xT2_3"],
    ["verdict", "gompf", "--knot", "4_1", "-m", "1", "-i", "1", "-j", "5"],
    ["verdict", "gompf", "--knot", "6_1", "-m", "1", "-i", "1", "-j", "0"],
    ["verdict", "gompf", "--knot", "5_2", "-m", "2", "-i", "1", "-j", "0"],
    ["verdict", "gompf", "--file", f"{data}/4_1.cfk.json", "-m", "-1", "-i", "3", "-j", "0"],
    ["verdict", "split", "--k1", "bundled:4_1_s", "--k2", "bundled:4_1", "-m", "1"],
    ["verdict", "split", "--k1", "bundled:4_1", "--k2", "bundled:4_1", "-m", "1"],
    ["verdict", "periodic", "--file", "bundled:4_1_tau", "-m", "1", "-i", "1"],
    ["verdict", "periodic", "--file", "bundled:4_1_tau", "-m", "1", "-i", "4"],
    ["census", "--table", "bundled", "--max-crossings", "8"],
    ["--seed", "7", "--window-bump", "2", "delta", "bundled:4_1"],
]

FAIL = [
    ["verdict", "gompf", "--knot", "8_19", "-m", "1", "-i", "1", "-j", "0"],
    ["delta", "bundled:nope"],
    ["validate", "/nonexistent.cfk.json"],
    ["census", "--table", "/nonexistent.csv"],
    ["verdict", "gompf", "--knot", "4_1", "-m", "0", "-i", "1", "-j", "0"],
    ["verdict", "periodic", "--file", "bundled:4_1", "-m", "1", "-i", "1"],
]

with open(os.path.join(root, "schemas", "report.schema.json")) as f:
    schema = json.load(f)
validator = jsonschema.Draft202012Validator(schema)

env = dict(os.environ)
env.pop("CORKSCREW_WINDOW_BUMP", None)
problems = []


def run(args):
    return subprocess.run([cli, *args], capture_output=True, text=True, env=env)


def check(args, want_ok):
    first = run(args)
    label = " ".join(args)
    if (first.returncode == 0) != want_ok:
        problems.append(f"{label}: exit {first.returncode}\n{first.stderr}")
        return
    try:
        report = json.loads(first.stdout)
    except json.JSONDecodeError as e:
        problems.append(f"{label}: not JSON ({e})")
        return
    for err in validator.iter_errors(report):
        problems.append(f"{label}: schema: {err.message} at {list(err.absolute_path)}")
    if report["status"] != ("ok" if want_ok else "error"):
        problems.append(f"{label}: status {report['status']}")
    if not want_ok and not first.stderr.strip():
        problems.append(f"{label}: no message on stderr")
    second = run(args)
    if second.stdout != first.stdout:
        problems.append(f"{label}: output differs between runs")
    for v in report.get("verdicts", []):
        if v["conclusion"] == "StrongCork" and not v.get("certificate_replayed"):
            problems.append(f"{label}: StrongCork without replayed certificate")


for args in OK:
    check(args, True)
for args in FAIL:
    check(args, False)

env["CORKSCREW_WINDOW_BUMP"] = "3"
bumped = json.loads(run(["delta", "bundled:4_1"]).stdout)
if bumped["window_bump"] != 3:
    problems.append("CORKSCREW_WINDOW_BUMP not honoured")

for p in problems:
    print(p)
print(f"{len(OK) + len(FAIL)} invocations, {len(problems)} problems")
sys.exit(1 if problems else 0)
