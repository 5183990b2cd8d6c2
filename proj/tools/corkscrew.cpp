// corkscrew: strong-cork verdicts from knot Floer data.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "corkscrew/corkscrew.hpp"

using namespace corkscrew;
using io::json;

namespace {

struct Globals {
    std::string format = "json";
    int bump = 0;
    std::uint64_t seed = kDefaultSeed;
};

Globals g;

io::RunInfo info(const std::string& command) { return {command, g.seed, g.bump}; }

VerdictOptions options() { return {g.seed, g.bump}; }

void emit(const json& report, const std::string& text) {
    if (g.format == "json")
        std::cout << io::dump(report);
    else
        std::cout << text;
}

json ok(const std::string& command) {
    json j = io::envelope(info(command));
    j["status"] = "ok";
    return j;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string verdict_line(const Verdict& v) {
    std::string s = v.knot + " " + v.diffeo + " m=" + std::to_string(v.m) + ": " + to_string(v.conclusion) + " (" +
                    v.rule + ")";
    if (!v.certificate_ref.empty()) s += "\n  certificate: " + v.certificate_ref;
    if (!v.reason.empty()) s += "\n  reason: " + v.reason;
    return s + "\n";
}

json input_echo(const io::LoadedComplex& l) {
    return {{"source", l.origin}, {"name", l.x.complex.name}, {"rank", l.x.rank()},
            {"iota", l.iota_given ? "given" : "solved"}, {"phi", l.phi_given ? "given" : "identity"}};
}

void cmd_validate(const std::string& file) {
    const auto l = io::load_input(file, g.bump);
    json r = ok("validate");
    r["inputs"] = json::array({input_echo(l)});
    r["results"] = {{"valid", true}, {"s3_type", l.validation.s3_type}};
    emit(r, l.x.complex.name + ": valid, rank " + std::to_string(l.x.rank()) + ", S3-type " +
                yes_no(l.validation.s3_type) + ", iota " + (l.iota_given ? "given" : "solved") + "\n");
}

void cmd_sarkar(const std::string& file) {
    const auto l = io::load_input(file, g.bump);
    const KnotComplex& c = l.x.complex;
    const LinearMap s = sarkar_map(c);
    const LinearMap id = LinearMap::identity(c.rank());
    const bool trivial = static_cast<bool>(homotopic(c, s, id));
    const bool square = static_cast<bool>(homotopic(c, compose(s, s), id));
    json r = ok("sarkar");
    r["inputs"] = json::array({input_echo(l)});
    r["results"] = {{"sarkar", io::matrix_to_json(s, c)},
                    {"homotopic_to_identity", trivial},
                    {"square_homotopic_to_identity", square}};
    std::string text;
    for (std::size_t i = 0; i < c.rank(); ++i)
        if (!(s.images[i] == id.images[i]))
            text += "s(" + c.generators[i].id + ") = " + to_string(s.images[i], c) + "\n";
    if (text.empty()) text = "s = id\n";
    text += "s ~ id: " + yes_no(trivial) + "; s^2 ~ id: " + yes_no(square) + "\n";
    emit(r, text);
}

void cmd_delta(const std::string& file, std::optional<int> m) {
    const auto l = io::load_input(file, g.bump);
    const DeltaResult d = delta(l.x, g.bump);
    json r = ok("delta");
    r["inputs"] = json::array({input_echo(l)});
    r["results"] = {{"delta", io::to_json(d, l.x.complex)}};
    std::string text = "delta(" + l.x.complex.name + ") = " + std::to_string(d.delta) + "\n  witness at grading " +
                       std::to_string(d.grading) + ": " + format_witness(d, l.x.complex) + "\n";
    if (m) {
        const Verdict v = verdict_delta(l.x, *m, options());
        r["verdicts"] = json::array({io::to_json(v)});
        text += verdict_line(v);
    }
    emit(r, text);
}

void cmd_s_nontrivial(const std::string& file) {
    const auto l = io::load_input(file, g.bump);
    const SNontrivialResult s = s_nontrivial(l.x, g.seed, g.bump);
    json r = ok("s-nontrivial");
    r["inputs"] = json::array({input_echo(l)});
    r["results"] = {{"s_nontrivial", s.nontrivial},
                    {"connected", io::to_json(s.connected)},
                    {"homotopy_unknowns", s.unknowns}};
    std::string text = l.x.complex.name + ": " + (s.nontrivial ? "S-nontrivial" : "S-trivial") + " (conn " +
                       r["results"]["connected"]["shape"].get<std::string>() + ", " + s.connected.method + ")\n";
    if (!s.caveat.empty()) text += "  caveat: " + s.caveat + "\n";
    emit(r, text);
}

void cmd_conn(const std::string& file) {
    const auto l = io::load_input(file, g.bump);
    const ConnectedResult c = connected_complex(l.x, g.seed, g.bump);
    json r = ok("conn");
    r["inputs"] = json::array({input_echo(l)});
    r["results"] = {{"connected", io::to_json(c)},
                    {"complex", io::complex_to_json(c.conn, {false, true, false})}};
    std::string text = "conn(" + l.x.complex.name + ") = " + r["results"]["connected"]["shape"].get<std::string>() +
                       " [" + c.method + (c.verified ? ", verified" : "") + "]\n";
    if (!c.caveat.empty()) text += "  caveat: " + c.caveat + "\n";
    emit(r, text);
}

KnotDescriptor knot_by_name(const std::string& name) {
    if (auto x = io::bundled(name)) {
        KnotDescriptor k;
        k.name = name;
        k.complex_source = "bundled:" + name;
        k.complex = *x;
        return k;
    }
    const io::KnotTable t = io::parse_knot_csv("bundled");
    for (const auto& row : t.rows)
        if (row.name == name) return io::descriptor(row);
    for (const auto& bad : t.rejected)
        if (bad.name == name) throw std::runtime_error(name + ": " + bad.reason);
    throw std::runtime_error("unknown knot '" + name + "'");
}

void emit_verdict(const std::string& command, const json& inputs, const Verdict& v) {
    json r = ok(command);
    r["inputs"] = inputs;
    r["verdicts"] = json::array({io::to_json(v)});
    emit(r, verdict_line(v));
}

void cmd_gompf(const std::string& knot, const std::string& file, int m, int i, int j) {
    KnotDescriptor k;
    json echo;
    if (!file.empty()) {
        const auto l = io::load_input(file, g.bump);
        k.name = l.x.complex.name;
        k.complex_source = file;
        k.complex = l.x;
        echo = input_echo(l);
    } else {
        k = knot_by_name(knot);
        echo = {{"source", k.complex_source}, {"name", k.name}};
    }
    echo["m"] = m;
    echo["i"] = i;
    echo["j"] = j;
    emit_verdict("verdict gompf", json::array({echo}), verdict_gompf(k, m, i, j, options()));
}

void cmd_split(const std::string& f1, const std::string& f2, int m) {
    const auto a = io::load_input(f1, g.bump);
    const auto b = io::load_input(f2, g.bump);
    const json inputs = json::array({input_echo(a), input_echo(b), {{"m", m}}});
    emit_verdict("verdict split", inputs, verdict_split(a.x, b.x, m, options()));
}

void cmd_periodic(const std::string& file, int m, int i) {
    const auto l = io::load_input(file, g.bump);
    json echo = input_echo(l);
    echo["m"] = m;
    echo["i"] = i;
    emit_verdict("verdict periodic", json::array({echo}), verdict_periodic(l.x, m, i, options()));
}

void cmd_census(const std::string& table, int max_crossings) {
    const io::KnotTable t = io::parse_knot_csv(table);
    const io::Census c = io::census(t, max_crossings, options());
    json r = ok("census");
    r["inputs"] = json::array({{{"table", table}, {"max_crossings", max_crossings}}});
    json entries = json::array();
    for (const auto& e : c.entries)
        entries.push_back({{"name", e.row.name},
                           {"tau", *e.row.tau},
                           {"tau_derived", e.row.tau_derived},
                           {"arf", e.row.arf},
                           {"determinant", e.row.determinant},
                           {"arithmetic", e.arithmetic},
                           {"conclusion", to_string(e.verdict.conclusion)}});
    json rejected = json::array();
    for (const auto& b : c.rejected) rejected.push_back({{"line", b.line}, {"name", b.name}, {"reason", b.reason}});
    r["results"] = {{"strong_corks", c.strong}, {"count", c.strong.size()}, {"entries", entries}, {"rejected", rejected}};
    json verdicts = json::array();
    for (const auto& e : c.entries)
        if (e.verdict.strong()) verdicts.push_back(io::to_json(e.verdict));
    r["verdicts"] = verdicts;
    std::string text = std::to_string(c.strong.size()) + " knots K with K#-K a strong cork (m=1, i=1):\n";
    for (const auto& n : c.strong) text += "  " + n + "\n";
    for (const auto& b : c.rejected) text += "skipped " + b.name + " (line " + std::to_string(b.line) + "): " + b.reason + "\n";
    emit(r, text);
}

int fail(const std::string& command, const std::string& message, std::optional<std::pair<int, int>> at = {}) {
    std::cerr << "error: " << message << "\n";
    if (g.format == "json") std::cout << io::dump(io::error_report(info(command), message, at));
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strong-cork verdicts from knot Floer complexes"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--window-bump", g.bump, "Extra torsion-window depth")->envname("CORKSCREW_WINDOW_BUMP");
    app.add_option("--seed", g.seed, "Seed for randomized searches");

    std::string file, file2, knot, table;
    std::optional<int> delta_m;
    int m = 0, i = 0, j = 0, max_crossings = 8;

    auto* validate_cmd = app.add_subcommand("validate", "Check a complex file");
    validate_cmd->add_option("file", file, "Complex file or bundled:NAME")->required();
    auto* sarkar_cmd = app.add_subcommand("sarkar", "Sarkar map of a complex");
    sarkar_cmd->add_option("file", file)->required();
    auto* delta_cmd = app.add_subcommand("delta", "delta invariant");
    delta_cmd->add_option("file", file)->required();
    delta_cmd->add_option("--m,-m", delta_m, "Also give the verdict for 1/m surgery");
    auto* snt_cmd = app.add_subcommand("s-nontrivial", "Is s nontrivial on the connected complex");
    snt_cmd->add_option("file", file)->required();
    auto* conn_cmd = app.add_subcommand("conn", "Connected complex");
    conn_cmd->add_option("file", file)->required();

    auto* verdict_cmd = app.add_subcommand("verdict", "Strong-cork verdicts");
    verdict_cmd->require_subcommand(1);
    auto* gompf = verdict_cmd->add_subcommand("gompf", "K#-K with the swallow-follow twists");
    auto* knot_opt = gompf->add_option("--knot", knot, "Bundled complex or table knot");
    gompf->add_option("--file", file)->excludes(knot_opt);
    gompf->add_option("-m", m)->required();
    gompf->add_option("-i", i)->required();
    gompf->add_option("-j", j)->required();
    auto* split = verdict_cmd->add_subcommand("split", "K1#K2 with a split diffeomorphism");
    split->add_option("--k1", file)->required();
    split->add_option("--k2", file2)->required();
    split->add_option("-m", m)->required();
    auto* periodic = verdict_cmd->add_subcommand("periodic", "Periodic involution tau^i");
    periodic->add_option("--file", file)->required();
    periodic->add_option("-m", m)->required();
    periodic->add_option("-i", i)->required();

    auto* census_cmd = app.add_subcommand("census", "Thin-knot census");
    census_cmd->add_option("--table", table, "CSV path or 'bundled'")->default_val("bundled");
    census_cmd->add_option("--max-crossings", max_crossings)->default_val(8);

    CLI11_PARSE(app, argc, argv);

    std::string command;
    try {
        if (*validate_cmd) {
            command = "validate";
            cmd_validate(file);
        } else if (*sarkar_cmd) {
            command = "sarkar";
            cmd_sarkar(file);
        } else if (*delta_cmd) {
            command = "delta";
            cmd_delta(file, delta_m);
        } else if (*snt_cmd) {
            command = "s-nontrivial";
            cmd_s_nontrivial(file);
        } else if (*conn_cmd) {
            command = "conn";
            cmd_conn(file);
        } else if (*gompf) {
            command = "verdict gompf";
            if (knot.empty() && file.empty()) return fail(command, "verdict gompf needs --knot or --file");
            cmd_gompf(knot, file, m, i, j);
        } else if (*split) {
            command = "verdict split";
            cmd_split(file, file2, m);
        } else if (*periodic) {
            command = "verdict periodic";
            cmd_periodic(file, m, i);
        } else if (*census_cmd) {
            command = "census";
            cmd_census(table, max_crossings);
        }
    } catch (const io::ParseError& e) {
        return fail(command, e.what(), std::make_pair(e.line, e.column));
    } catch (const std::exception& e) {
        return fail(command, e.what());
    }
    return 0;
}
