#pragma once
// Complex files, the knot table, the bundled registry, and report envelopes.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <future>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "corkscrew/cfk.hpp"
#include "corkscrew/connected.hpp"
#include "corkscrew/delta.hpp"
#include "corkscrew/homotopy.hpp"
#include "corkscrew/verdict.hpp"

#ifndef CORKSCREW_DATA_DIR
#define CORKSCREW_DATA_DIR "data"
#endif

namespace corkscrew::io {

using nlohmann::json;

inline constexpr const char* kToolName = "corkscrew";
inline constexpr const char* kToolVersion = "0.1.0";

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& origin, int line, int column, const std::string& what)
        : std::runtime_error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line(line), column(column), message(what) {}
    int line;
    int column;
    std::string message;
};

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

/// Position of the last needle, each searched after the previous one.
/// Falls back to the deepest needle found.
inline std::pair<int, int> locate(const std::string& text, const std::vector<std::string>& needles) {
    std::size_t pos = 0, found = 0;
    for (const auto& n : needles) {
        const std::size_t p = text.find(n, pos);
        if (p == std::string::npos) break;
        found = pos = p;
        pos += n.size();
    }
    return line_column(text, found);
}

inline std::string quoted(const std::string& s) { return json(s).dump(); }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Sort entry lists and drop empty ones so that equal matrices print equally.
inline json canonical_matrix(const json& m) {
    json out = json::object();
    for (auto it = m.begin(); it != m.end(); ++it) {
        json entries = it.value();
        if (!entries.is_array() || entries.empty()) continue;
        std::sort(entries.begin(), entries.end());
        out[it.key()] = entries;
    }
    return out;
}

}  // namespace detail

using detail::read_file;

// ---------------------------------------------------------------------------
// Complex files

inline json matrix_to_json(const LinearMap& f, const KnotComplex& c) {
    json m = json::object();
    for (std::size_t i = 0; i < f.images.size(); ++i) {
        json entries = json::array();
        for (const auto& t : f.images[i].terms())
            entries.push_back({c.generators.at(t.gen).id, t.mono.u, t.mono.v});
        m[c.generators[i].id] = entries;
    }
    return detail::canonical_matrix(m);
}

struct SerializeOptions {
    bool phi = true;
    bool iota = true;
    bool phi_inverse = true;
};

inline json complex_to_json(const PhiIotaComplex& x, SerializeOptions o = {}) {
    const KnotComplex& c = x.complex;
    json j;
    j["name"] = c.name;
    j["generators"] = json::array();
    for (const auto& g : c.generators) j["generators"].push_back({{"id", g.id}, {"gr", {g.gr.gu, g.gr.gv}}});
    j["differential"] = matrix_to_json(c.differential, c);
    if (o.iota) j["iota"] = {{"mode", "skew"}, {"matrix", matrix_to_json(x.iota, c)}};
    if (o.phi) j["phi"] = {{"mode", "straight"}, {"matrix", matrix_to_json(x.phi, c)}};
    if (o.phi && o.phi_inverse)
        j["phi_inverse"] = {{"mode", "straight"}, {"matrix", matrix_to_json(x.phi_inverse, c)}};
    return j;
}

namespace detail {

inline bool flat(const json& j) {
    return std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
}

inline void write(std::string& out, const json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    if (j.is_array() && (j.empty() || flat(j))) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
        out += "]";
        return;
    }
    if (j.is_array()) {
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += pad;
            write(out, j[i], indent + 2);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += std::string(static_cast<std::size_t>(indent), ' ') + "]";
        return;
    }
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += pad + json(it.key()).dump() + ": ";
            write(out, it.value(), indent + 2);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += std::string(static_cast<std::size_t>(indent), ' ') + "}";
        return;
    }
    out += j.dump();
}

}  // namespace detail

/// Canonical text: sorted keys, two-space indent, scalar lists on one line.
inline std::string dump(const json& j) {
    std::string out;
    detail::write(out, j, 0);
    return out + "\n";
}

inline std::string serialize(const PhiIotaComplex& x, SerializeOptions o = {}) { return dump(complex_to_json(x, o)); }

/// Canonical text of a complex file without interpreting it.
inline std::string canonical_text(const std::string& text) {
    json j = json::parse(text);
    for (const char* key : {"iota", "phi", "phi_inverse"})
        if (j.contains(key) && j[key].contains("matrix")) j[key]["matrix"] = detail::canonical_matrix(j[key]["matrix"]);
    if (j.contains("differential")) j["differential"] = detail::canonical_matrix(j["differential"]);
    return dump(j);
}

struct LoadedComplex {
    PhiIotaComplex x;
    ValidationReport validation;
    bool iota_given = false;
    bool phi_given = false;
    bool phi_inverse_given = false;
    std::string origin;

    SerializeOptions given() const { return {phi_given, iota_given, phi_inverse_given}; }
};

inline LoadedComplex parse_complex_text(const std::string& text, const std::string& origin = "<input>", int bump = 0) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [l, c] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string what = e.what();
        if (auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
        throw ParseError(origin, l, c, what);
    }
    auto fail = [&](const std::vector<std::string>& where, const std::string& what) -> ParseError {
        auto [l, c] = detail::locate(text, where);
        return ParseError(origin, l, c, what);
    };
    if (!j.is_object()) throw fail({}, "top level must be an object");
    for (const char* key : {"generators", "differential"})
        if (!j.contains(key)) throw fail({}, std::string("missing field '") + key + "'");

    LoadedComplex out;
    out.origin = origin;
    KnotComplex& c = out.x.complex;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw fail({"\"name\""}, "name must be a string");
        c.name = j["name"].get<std::string>();
    }
    const json& gens = j["generators"];
    if (!gens.is_array()) throw fail({"\"generators\""}, "generators must be a list");
    if (gens.empty()) throw fail({"\"generators\""}, "no generators");
    std::map<std::string, int> index;
    for (const auto& g : gens) {
        if (!g.is_object() || !g.contains("id") || !g["id"].is_string() || !g.contains("gr") || !g["gr"].is_array() ||
            g["gr"].size() != 2 || !g["gr"][0].is_number_integer() || !g["gr"][1].is_number_integer())
            throw fail({"\"generators\"", g.dump()}, "generator must be {id: string, gr: [int, int]}");
        const std::string id = g["id"].get<std::string>();
        if (index.count(id))
            throw fail({"\"generators\"", detail::quoted(id), detail::quoted(id)}, "duplicate generator id '" + id + "'");
        index[id] = static_cast<int>(c.generators.size());
        c.generators.push_back({id, {g["gr"][0].get<int>(), g["gr"][1].get<int>()}});
    }
    const std::size_t n = c.rank();

    auto read_matrix = [&](const json& m, const std::string& field, bool skew, Bigrading bideg) {
        if (!m.is_object()) throw fail({detail::quoted(field)}, field + " must map generator ids to entry lists");
        LinearMap f = LinearMap::zero(n, skew, bideg);
        for (auto it = m.begin(); it != m.end(); ++it) {
            const std::vector<std::string> where{detail::quoted(field), detail::quoted(it.key())};
            auto src = index.find(it.key());
            if (src == index.end()) throw fail(where, field + ": unknown generator '" + it.key() + "'");
            if (!it.value().is_array()) throw fail(where, field + ": entries of '" + it.key() + "' must be a list");
            for (const auto& e : it.value()) {
                if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_number_integer() ||
                    !e[2].is_number_integer() || e[1].get<int>() < 0 || e[2].get<int>() < 0)
                    throw fail(where, field + ": entry must be [target_id, u_exp, v_exp] with exponents >= 0");
                auto dst = index.find(e[0].get<std::string>());
                if (dst == index.end())
                    throw fail(where, field + ": unknown target '" + e[0].get<std::string>() + "'");
                f.images[static_cast<std::size_t>(src->second)].add({dst->second, {e[1].get<int>(), e[2].get<int>()}});
            }
        }
        return f;
    };
    c.differential = read_matrix(j["differential"], "differential", false, {-1, -1});

    out.validation = validate(c, true, bump);
    if (!out.validation.ok) {
        std::vector<std::string> where{"\"generators\""};
        const std::string& e = out.validation.error;
        if (auto p = e.find(" at "); p != std::string::npos && e.find("differential") == 0)
            where = {"\"differential\"", detail::quoted(e.substr(p + 4, e.find("->", p) - p - 4))};
        else if (auto q = e.find("on generator "); q != std::string::npos)
            where = {"\"differential\"", detail::quoted(e.substr(q + 13, e.find(':', q) - q - 13))};
        throw fail(where, e);
    }

    auto read_action = [&](const char* field, bool skew) -> std::optional<LinearMap> {
        if (!j.contains(field)) return std::nullopt;
        const json& a = j[field];
        if (!a.is_object() || !a.contains("matrix")) throw fail({detail::quoted(field)}, std::string(field) + " needs a matrix");
        const std::string want = skew ? "skew" : "straight";
        if (a.contains("mode") && a["mode"] != want)
            throw fail({detail::quoted(field), "\"mode\""}, std::string(field) + " must have mode '" + want + "'");
        return read_matrix(a["matrix"], field, skew, {});
    };
    auto iota = read_action("iota", true);
    auto phi = read_action("phi", false);
    auto phi_inv = read_action("phi_inverse", false);
    out.iota_given = iota.has_value();
    out.phi_given = phi.has_value();
    out.phi_inverse_given = phi_inv.has_value();
    out.x.iota = iota ? *iota : solve_involution(c).iota;
    out.x.phi = phi ? *phi : LinearMap::identity(n);
    if (phi_inv) {
        out.x.phi_inverse = *phi_inv;
    } else if (phi) {
        auto inv = homotopy_inverse(c, *phi);
        if (!inv) throw fail({"\"phi\""}, "phi is not a homotopy equivalence");
        out.x.phi_inverse = *inv;
    } else {
        out.x.phi_inverse = LinearMap::identity(n);
    }
    if (auto err = check_actions(out.x); !err.empty())
        throw fail({detail::quoted(err.rfind("phi", 0) == 0 ? "phi" : "iota")}, err);
    return out;
}

inline LoadedComplex parse_complex(const std::string& path, int bump = 0) {
    return parse_complex_text(detail::read_file(path), path, bump);
}

// ---------------------------------------------------------------------------
// Bundled complexes

inline const std::map<std::string, std::function<PhiIotaComplex()>>& bundled_registry() {
    static const std::map<std::string, std::function<PhiIotaComplex()>> registry = [] {
        std::map<std::string, std::function<PhiIotaComplex()>> r;
        auto named = [](PhiIotaComplex x, std::string name) {
            x.complex.name = std::move(name);
            return x;
        };
        r["unknot"] = [] { return unknot(); };
        r["4_1"] = [] { return figure_eight().with_identity; };
        r["4_1_tau"] = [] { return figure_eight_with_actions(); };
        r["4_1_s"] = [] { return with_sarkar_power(figure_eight().with_identity, 1); };
        r["4_1x4_1"] = [named] {
            const auto f = figure_eight().with_identity;
            return named(tensor(f, f), "4_1#4_1");
        };
        r["4_1x4_1_tau"] = [named] {
            const auto f = figure_eight_with_actions();
            return named(tensor(f, f), "4_1#4_1");
        };
        for (int n = 1; n <= 3; ++n) {
            const std::string t = "T2_" + std::to_string(2 * n + 1);
            r[t] = [n] { return torus_2(n); };
            r[t + "x" + t] = [n, named, t] {
                const auto x = torus_2(n);
                return named(tensor(x, x), "T(2," + std::to_string(2 * n + 1) + ")#T(2," + std::to_string(2 * n + 1) + ")");
            };
        }
        for (int l = 1; l <= 5; ++l)
            r["dot+box" + std::to_string(l)] = [l] { return staircase_box_model(0, l); };
        return r;
    }();
    return registry;
}

inline std::vector<std::string> bundled_names() {
    std::vector<std::string> out;
    for (const auto& [k, _] : bundled_registry()) out.push_back(k);
    return out;
}

inline std::optional<PhiIotaComplex> bundled(const std::string& name) {
    const auto& r = bundled_registry();
    auto it = r.find(name);
    if (it == r.end()) return std::nullopt;
    return it->second();
}

/// "bundled:NAME" or a path to a complex file.
inline LoadedComplex load_input(const std::string& spec, int bump = 0) {
    if (spec.rfind("bundled:", 0) == 0) {
        const std::string name = spec.substr(8);
        auto x = bundled(name);
        if (!x) throw std::runtime_error("unknown bundled complex '" + name + "'");
        LoadedComplex out;
        out.x = *x;
        out.validation = validate(out.x.complex, true, bump);
        out.iota_given = out.phi_given = out.phi_inverse_given = true;
        out.origin = spec;
        return out;
    }
    return parse_complex(spec, bump);
}

inline std::string data_path(const std::string& file) { return std::string(CORKSCREW_DATA_DIR) + "/" + file; }

// ---------------------------------------------------------------------------
// Knot table

struct KnotTableRow {
    std::string name;
    int crossings = 0;
    bool alternating = false;
    int signature = 0;
    long determinant = 1;
    int arf = 0;
    std::optional<int> tau;
    bool tau_derived = false;
    int line = 0;
};

struct RejectedRow {
    int line = 0;
    std::string name;
    std::string reason;
};

struct KnotTable {
    std::vector<KnotTableRow> rows;
    std::vector<RejectedRow> rejected;
};

namespace detail {

inline std::string trim(std::string s) {
    auto ws = [](unsigned char ch) { return std::isspace(ch) != 0; };
    while (!s.empty() && ws(s.back())) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && ws(s[b])) ++b;
    return s.substr(b);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline long to_long(const std::string& s, const std::string& column) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size()) throw std::invalid_argument("column " + column + ": '" + s + "' is not an integer");
    return v;
}

inline bool to_flag(const std::string& s, const std::string& column) {
    std::string l;
    for (char ch : s) l += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (l == "1" || l == "y" || l == "yes" || l == "true") return true;
    if (l == "0" || l == "n" || l == "no" || l == "false") return false;
    throw std::invalid_argument("column " + column + ": '" + s + "' is not a flag");
}

}  // namespace detail

inline KnotTable parse_knot_csv_text(const std::string& text, const std::string& origin = "<table>") {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::map<std::string, std::size_t> col;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!detail::trim(line).empty() && detail::trim(line)[0] != '#') break;
    }
    const auto header = detail::split_csv(line);
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* req : {"name", "crossings", "alternating", "signature", "determinant", "arf"})
        if (!col.count(req)) throw ParseError(origin, lineno, 1, std::string("missing required column '") + req + "'");

    KnotTable table;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty() || detail::trim(line)[0] == '#') continue;
        const auto cells = detail::split_csv(line);
        auto cell = [&](const std::string& name) -> std::string {
            auto it = col.find(name);
            if (it == col.end() || it->second >= cells.size()) return {};
            return cells[it->second];
        };
        KnotTableRow row;
        row.line = lineno;
        row.name = cell("name");
        try {
            if (row.name.empty()) throw std::invalid_argument("empty name");
            row.crossings = static_cast<int>(detail::to_long(cell("crossings"), "crossings"));
            row.alternating = detail::to_flag(cell("alternating"), "alternating");
            row.signature = static_cast<int>(detail::to_long(cell("signature"), "signature"));
            row.determinant = detail::to_long(cell("determinant"), "determinant");
            row.arf = static_cast<int>(detail::to_long(cell("arf"), "arf"));
            if (row.determinant <= 0 || row.determinant % 2 == 0)
                throw std::invalid_argument("determinant " + std::to_string(row.determinant) +
                                            " is not a positive odd integer");
            if (row.arf != 0 && row.arf != 1) throw std::invalid_argument("arf must be 0 or 1");
            if (row.arf != arf_from_determinant(row.determinant))
                throw std::invalid_argument("arf " + std::to_string(row.arf) + " inconsistent with determinant " +
                                            std::to_string(row.determinant));
            if (row.signature % 2 != 0) throw std::invalid_argument("signature must be even");
            if (const std::string t = cell("tau"); !t.empty()) {
                row.tau = static_cast<int>(detail::to_long(t, "tau"));
            } else if (row.alternating) {
                row.tau = -row.signature / 2;
                row.tau_derived = true;
            } else {
                throw std::invalid_argument("non-alternating knot without tau: thin model unavailable");
            }
            thin_box_parity(row.determinant, *row.tau);
            table.rows.push_back(row);
        } catch (const std::invalid_argument& e) {
            table.rejected.push_back({lineno, row.name, e.what()});
        }
    }
    return table;
}

inline KnotTable parse_knot_csv(const std::string& path) {
    const std::string p = path == "bundled" ? data_path("knots8.csv") : path;
    return parse_knot_csv_text(detail::read_file(p), p);
}

inline KnotDescriptor descriptor(const KnotTableRow& row) {
    KnotDescriptor k;
    k.name = row.name;
    k.tau = row.tau.value_or(0);
    k.arf = row.arf;
    k.determinant = row.determinant;
    k.thin = true;
    k.complex_source = "thin-model";
    return k;
}

/// Crossing number first, then table index.
inline bool knot_name_less(const std::string& a, const std::string& b) {
    auto key = [](const std::string& s) {
        const auto p = s.find('_');
        long c = 0, i = 0;
        try {
            c = std::stol(s.substr(0, p));
            i = p == std::string::npos ? 0 : std::stol(s.substr(p + 1));
        } catch (const std::exception&) {
            c = i = 1L << 30;
        }
        return std::make_tuple(c, i, s);
    };
    return key(a) < key(b);
}

struct CensusEntry {
    KnotTableRow row;
    bool arithmetic = false;
    Verdict verdict;
};

struct Census {
    std::vector<CensusEntry> entries;
    std::vector<RejectedRow> rejected;
    std::vector<std::string> strong;
};

/// Thin knots with at most `max_crossings` crossings whose K # -K carries a
/// strong cork, by both the arithmetic and the homological route.
inline Census census(const KnotTable& table, int max_crossings, const VerdictOptions& o = {}) {
    Census out;
    out.rejected = table.rejected;
    std::vector<KnotTableRow> rows;
    for (const auto& r : table.rows)
        if (r.crossings <= max_crossings) rows.push_back(r);
    std::sort(rows.begin(), rows.end(),
              [](const KnotTableRow& a, const KnotTableRow& b) { return knot_name_less(a.name, b.name); });
    std::vector<std::future<Verdict>> pending;
    for (const auto& r : rows)
        pending.push_back(std::async(std::launch::async, [&o, d = descriptor(r)] { return verdict_gompf(d, 1, 1, 0, o); }));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const KnotTableRow& r = rows[k];
        CensusEntry e{r, cor13_arithmetic(r.arf, r.tau.value_or(0)), pending[k].get()};
        if (e.arithmetic != e.verdict.strong())
            throw ConsistencyError("census: arithmetic and homological routes disagree on " + r.name);
        if (e.verdict.strong()) out.strong.push_back(r.name);
        out.entries.push_back(std::move(e));
    }
    std::sort(out.rejected.begin(), out.rejected.end(),
              [](const RejectedRow& a, const RejectedRow& b) { return knot_name_less(a.name, b.name); });
    return out;
}

// ---------------------------------------------------------------------------
// Report pieces

inline json to_json(const Verdict& v) {
    json j;
    j["knot"] = v.knot;
    j["diffeo"] = v.diffeo;
    j["m"] = v.m;
    j["conclusion"] = to_string(v.conclusion);
    j["rule"] = v.rule;
    j["certificate_ref"] = v.certificate_ref.empty() ? json(nullptr) : json(v.certificate_ref);
    if (!v.reason.empty()) j["reason"] = v.reason;
    if (v.strong()) j["certificate_replayed"] = replay(v);
    return j;
}

inline json to_json(const DeltaResult& r, const KnotComplex& c) {
    return {{"delta", r.delta},
            {"grading", r.grading},
            {"window_depth", r.window.depth},
            {"cycle_dimension", r.cycle_dimension},
            {"witness", format_witness(r, c)}};
}

inline json to_json(const ConnectedResult& r) {
    json j;
    j["method"] = r.method;
    j["verified"] = r.verified;
    j["shape"] = r.form ? describe(*r.form) : std::string("nonstandard");
    j["rank"] = r.conn.rank();
    j["involutions_tried"] = r.involutions_tried;
    if (!r.caveat.empty()) j["caveat"] = r.caveat;
    return j;
}

struct RunInfo {
    std::string command;
    std::uint64_t seed = kDefaultSeed;
    int window_bump = 0;
};

inline json envelope(const RunInfo& info) {
    return {{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
            {"command", info.command},
            {"seed", info.seed},
            {"window_bump", info.window_bump}};
}

inline json error_report(const RunInfo& info, const std::string& message, std::optional<std::pair<int, int>> at = {}) {
    json j = envelope(info);
    j["status"] = "error";
    j["error"] = {{"message", message}};
    if (at) {
        j["error"]["line"] = at->first;
        j["error"]["column"] = at->second;
    }
    return j;
}

}  // namespace corkscrew::io
