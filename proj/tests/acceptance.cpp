// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "corkscrew/corkscrew.hpp"
#include "support.hpp"

using namespace corkscrew;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s) {
        o.ok = false;
        o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    if (!o.ok) ++failures;
    std::printf("%s [%2d] %s (%.2fs)%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), secs,
                o.detail.empty() ? "" : " : ", o.detail.c_str());
    std::fflush(stdout);
}

// accumulate failures inside a criterion
struct Checks {
    Outcome out;
    void operator()(bool cond, const std::string& what) {
        if (cond) return;
        out.ok = false;
        if (!out.detail.empty()) out.detail += "; ";
        out.detail += what;
    }
};

PhiIotaComplex fig8_square(bool with_tau) {
    const auto f = with_tau ? figure_eight_with_actions() : figure_eight().with_identity;
    return tensor(f, f);
}

std::string shape(const KnotComplex& c) {
    const auto sf = recognize_standard(reduce(c));
    return sf ? describe(*sf) : "nonstandard";
}

struct GradingZero {
    explicit GradingZero(const PhiIotaComplex& x) : x(x), a(a0(x)), b(a.complex.boundaries(0)) {}
    BitVector residue(const Element& e) const { return b.reduce(a.complex.to_vector(to_a0(e, x.complex), 0)); }
    bool same_class(const Element& e, const Element& f) const { return !(residue(e) ^ residue(f)).any(); }
    const PhiIotaComplex& x;
    A0Complex a;
    SpanBasis b;
};

std::map<std::string, int> oracle_deltas() {
    std::ifstream in(std::string(CORKSCREW_SOURCE_DIR) + "/tests/oracles/delta_oracle.expected");
    std::map<std::string, int> out;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string name;
        int d;
        if (ls >> name >> d) out[name] = d;
    }
    return out;
}

Outcome sarkar_box() {
    Checks c;
    const KnotComplex b = box(1);
    const LinearMap s = sarkar_map(b);
    for (std::size_t i = 0; i < b.rank(); ++i) {
        const Element g(static_cast<int>(i), Monomial{});
        const Element want = b.generators[i].id == "a" ? b.element({"a", "d"}) : g;
        c(s.apply(g) == want, "s(" + b.generators[i].id + ") = " + to_string(s.apply(g), b));
    }
    return c.out;
}

Outcome action_table() {
    Checks c;
    const auto x = fig8_square(true);
    const KnotComplex& k = x.complex;
    const GradingZero h0(x);
    const UHomology h = a0_homology(h0.a);
    c(h.tower_tops == std::vector<int>{0}, "tower top not at 0");
    c(homology_basis(h0.a.complex, 0).size() == 5, "H_0 is not five-dimensional");
    struct Row {
        std::initializer_list<const char*> gen, iota, tau;
    };
    const Row rows[] = {
        {{"x|x"}, {"x|x", "x|d", "d|x", "d|d"}, {"x|x", "x|d", "d|x", "d|d"}},
        {{"x|d"}, {"x|d", "d|d"}, {"x|d", "d|d"}},
        {{"d|x"}, {"d|x", "d|d"}, {"d|x", "d|d"}},
        {{"a|d", "d|a", "b|c", "c|b"},
         {"a|d", "d|a", "b|c", "c|b", "x|d", "d|x", "d|d"},
         {"a|d", "d|a", "b|c", "c|b", "x|d", "d|x"}},
        {{"d|d"}, {"d|d"}, {"d|d"}},
    };
    SpanBasis span(h0.a.complex.slice(0).size());
    NontorsionTest nontorsion(k);
    int row = 0;
    for (const auto& r : rows) {
        const Element g = k.element(r.gen);
        const std::string label = "row " + std::to_string(++row);
        c(k.differential.apply(g).is_zero(), label + " not a cycle");
        c(span.insert(h0.residue(g)), label + " dependent");
        c(nontorsion(g, 0) == (row == 1), label + " nontorsion mismatch");
        c(h0.same_class(x.iota.apply(g), k.element(r.iota)), label + " iota");
        c(h0.same_class(x.phi.apply(g), k.element(r.tau)), label + " tau|tau");
    }
    return c.out;
}

Outcome span_pipeline() {
    Checks c;
    const auto x = fig8_square(true);
    const KnotComplex& k = x.complex;
    const GradingZero h0(x);
    const auto basis = homology_basis(h0.a.complex, 0);
    std::vector<BitVector> images;
    for (const auto& e : basis) {
        const Element r = from_a0(e, k);
        images.push_back(h0.residue(x.iota.apply(r) + r));
    }
    SpanBasis invariant(images[0].size());
    for (std::uint32_t mask = 1; mask < (1u << basis.size()); ++mask) {
        BitVector v(images[0].size());
        Element e;
        for (std::size_t i = 0; i < basis.size(); ++i)
            if ((mask >> i) & 1u) {
                v ^= images[i];
                e += from_a0(basis[i], k);
            }
        if (!v.any()) invariant.insert(h0.residue(e));
    }
    const Element first = k.element({"x|x", "a|d", "d|a", "b|c", "c|b"});
    const Element second = k.element({"x|d", "d|x"});
    const Element third = k.element({"d|d"});
    SpanBasis listed(images[0].size());
    for (const auto& e : {first, second, third}) {
        c(invariant.contains(h0.residue(e)), to_string(e, k) + " not invariant");
        listed.insert(h0.residue(e));
    }
    c(invariant.rank() == 3 && listed.rank() == 3, "invariant span is not the three listed classes");
    c(!h0.same_class(x.phi.apply(first), first), "first class is tau|tau-invariant");

    const DeltaResult r = delta(x);
    const auto oracle = oracle_deltas();
    c(oracle.count("4_1#4_1_tau") && r.delta == oracle.at("4_1#4_1_tau"), "delta differs from oracle");
    c(r.delta > 0, "delta not positive");
    c(delta(x, 4).delta == r.delta, "delta unstable under window enlargement");
    const Verdict v = verdict_delta(x, 1);
    c(v.strong() && replay(v), "verdict_delta(m=1) not a replayable StrongCork");
    c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::string("delta = ") + std::to_string(r.delta);
    return c.out;
}

Outcome census_17() {
    Checks c;
    const io::Census cs = io::census(io::parse_knot_csv("bundled"), 8);
    const std::vector<std::string> want = {"4_1",  "5_2",  "6_3",  "7_4",  "7_5",  "7_7",  "8_1",  "8_2", "8_6",
                                           "8_7",  "8_12", "8_13", "8_14", "8_15", "8_17", "8_18", "8_21"};
    c(cs.strong == want, "strong set differs (" + std::to_string(cs.strong.size()) + " knots)");
    for (const char* bad : {"6_1", "8_3"})
        c(std::find(cs.strong.begin(), cs.strong.end(), bad) == cs.strong.end(), std::string(bad) + " included");
    for (const auto& e : cs.entries)
        if (e.verdict.strong()) c(replay(e.verdict), e.row.name + " does not replay");
    return c.out;
}

Outcome properties() {
    Checks c;
    auto cases = fixtures::builder_suite();
    for (auto& x : fixtures::random_suite(200, kDefaultSeed)) cases.push_back(std::move(x));
    c(cases.size() >= 200, "fewer than 200 cases");
    std::mt19937_64 rng(kDefaultSeed);
    std::size_t maps = 0;
    for (const auto& x : cases) {
        const KnotComplex& k = x.complex;
        const std::string& n = k.name;
        const LinearMap s = sarkar_map(k);
        const LinearMap id = LinearMap::identity(k.rank());
        c(validate(k, true).ok, n + " invalid");
        c(compose(k.differential, k.differential).is_zero(), n + " d^2");
        c(is_chain_map(k, k, s), n + " s not chain");
        c(static_cast<bool>(find_homotopy(k, compose(s, s), id)), n + " s^2");
        for (bool skew : {false, true}) {
            auto basis = chain_map_basis(k, k, skew, {});
            if (basis.size() > 6) {
                std::vector<LinearMap> sample;
                for (int t = 0; t < 6; ++t) {
                    LinearMap f = LinearMap::zero(k.rank(), skew, {});
                    for (const auto& b : basis)
                        if (rng() & 1u) f += b;
                    sample.push_back(f);
                }
                basis = sample;
            }
            for (const auto& f : basis) {
                c(static_cast<bool>(find_homotopy(k, compose(s, f), compose(f, s))), n + " sf != fs");
                ++maps;
            }
        }
        c(static_cast<bool>(find_homotopy(k, compose(x.iota, x.iota), s)), n + " iota^2");
        const PhiIotaComplex dd = dual(dual(x));
        c(dd.complex.generators == k.generators && dd.complex.differential == k.differential && dd.iota == x.iota &&
              dd.phi == x.phi,
          n + " dual dual");
    }
    c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(cases.size()) + " complexes, " +
                    std::to_string(maps) + " chain maps";
    return c.out;
}

Outcome delta_zero_local() {
    Checks c;
    std::vector<PhiIotaComplex> cases = {unknot(), fig8_square(false), fig8_square(true), figure_eight().with_identity,
                                         figure_eight_with_actions(), torus_2(1), tensor(torus_2(1), torus_2(1)),
                                         dual(torus_2(1)), thin_model(0, true), staircase_box_model(0, 3)};
    for (auto& x : fixtures::random_suite(20, kDefaultSeed + 1)) cases.push_back(std::move(x));
    int zero = 0;
    for (const auto& x : cases) {
        const DeltaLocalReport r = delta_zero_iff_local(x);
        c((r.delta == 0) == r.local_map, x.complex.name + " disagrees");
        if (r.local_map) c(verify_local_map(unknot(), x, r.certificate), x.complex.name + " certificate");
        zero += r.delta == 0;
    }
    c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(cases.size()) + " complexes, " +
                    std::to_string(zero) + " with delta 0";
    return c.out;
}

Outcome split_routes() {
    Checks c;
    const auto f = figure_eight().with_identity;
    const auto ft = figure_eight_with_actions();
    const auto fs = with_sarkar_power(f, 1);
    const auto t = torus_2(1);
    const auto tt = tensor(t, t);
    const auto b3 = staircase_box_model(0, 3);
    const auto b2 = staircase_box_model(0, 2);
    const std::pair<PhiIotaComplex, PhiIotaComplex> pairs[] = {
        {fs, f},  // Gompf pair
        {f, f},
        {unknot(), unknot()},
        {ft, ft},
        {ft, f},
        {t, dual(t)},
        {with_sarkar_power(t, 1), dual(t)},
        {with_sarkar_power(tt, 1), dual(tt)},
        {with_sarkar_power(b3, 1), dual(b3)},
        {with_sarkar_power(b2, 1), dual(b2)},
        {fs, fs},
        {t, unknot()},
    };
    int strong = 0;
    for (const auto& [x1, x2] : pairs) {
        const std::string n = x1.complex.name + " / " + x2.complex.name;
        const bool local = local_map_exists(dual(x2), x1).exists;
        const int d = delta(tensor(x1, x2)).delta;
        c(local == (d == 0), n + " routes disagree");
        const Verdict v = verdict_split(x1, x2, 1);
        c(v.strong() == !local, n + " verdict");
        if (v.strong()) c(replay(v), n + " replay");
        strong += v.strong();
    }
    c(verdict_split(fs, f, 1).strong(), "Gompf pair not strong");
    c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(std::size(pairs)) + " pairs, " +
                    std::to_string(strong) + " strong";
    return c.out;
}

Outcome conn_shapes() {
    Checks c;
    const ConnectedResult f = connected_complex(figure_eight().with_identity);
    c(f.method == "exact-standard" && f.verified, "4_1 not via standard form");
    c(shape(f.conn.complex) == "dot + box(1)@(0,0)", "conn(4_1) = " + shape(f.conn.complex));
    const ConnectedResult t = connected_complex(tensor(torus_2(1), torus_2(1)));
    c(t.method == "exact-standard" && t.verified, "T23#T23 not via standard form");
    c(shape(t.conn.complex) == "staircase(1,1,1,1) + box(1)@(-2,-2)", "conn(T23#T23) = " + shape(t.conn.complex));
    return c.out;
}

Outcome families() {
    Checks c;
    int nontrivial = 0;
    for (int s = 1; s <= 8; ++s)
        for (int n = 1; n <= 5; ++n) {
            const auto inv = torus_sum_invariants(s, n);
            const auto x = thin_model(inv.tau, thin_box_parity(inv.determinant, inv.tau));
            const bool homological = s_nontrivial(x).nontrivial;
            const std::string label = std::to_string(s) + "T(2," + std::to_string(2 * n + 1) + ")";
            c(homological == cor51_rule(s, n), label + " homological");
            c(cor13_arithmetic(inv.arf, inv.tau) == cor51_rule(s, n), label + " arithmetic");
            nontrivial += homological;
        }
    for (int l = 1; l <= 5; ++l)
        c(s_nontrivial(staircase_box_model(0, l)).nontrivial == (l % 2 == 1), "box(" + std::to_string(l) + ")");
    c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(nontrivial) + "/40 torus sums nontrivial";
    return c.out;
}

Outcome slice_witness() {
    Checks c;
    const auto x = fig8_square(false);
    const DeltaResult r = delta(x);
    c(r.delta == 0, "delta = " + std::to_string(r.delta));
    c(verify_delta_witness(a0(x), r.x, r.y, r.z), "witness does not verify");
    const std::string w = format_witness(r, x.complex);
    c(w.rfind("x = ", 0) == 0, "witness not printed");
    c.out.detail += (c.out.detail.empty() ? "" : "; ") + w;
    return c.out;
}

Outcome gates() {
    Checks c;
    std::size_t seen = 0, strong = 0;
    auto record = [&](const Verdict& v, bool must_be_inconclusive, const std::string& what) {
        ++seen;
        if (must_be_inconclusive) c(!v.strong(), what + " should be Inconclusive");
        if (v.strong()) {
            ++strong;
            c(!v.certificate_ref.empty(), what + " has no certificate");
            c(replay(v), what + " does not replay");
        }
    };
    const std::vector<int> ms = {-3, -2, -1, 1, 2, 3};
    const std::vector<int> is = {-2, -1, 0, 1, 2, 3, 4, 5};
    const io::KnotTable table = io::parse_knot_csv("bundled");
    for (const auto& row : table.rows) {
        const KnotDescriptor k = io::descriptor(row);
        for (int m : ms)
            for (int i : is)
                for (int j : {0, 5})
                    record(verdict_gompf(k, m, i, j), m % 2 == 0 || i % 2 == 0,
                           "gompf " + row.name + " m=" + std::to_string(m) + " i=" + std::to_string(i));
    }
    for (const auto& name : io::bundled_names()) {
        const PhiIotaComplex x = *io::bundled(name);
        for (int m : ms) record(verdict_delta(x, m), m % 2 == 0, "delta " + name + " m=" + std::to_string(m));
    }
    const auto f = figure_eight().with_identity;
    for (int m : ms) {
        record(verdict_split(with_sarkar_power(f, 1), f, m), m % 2 == 0, "split m=" + std::to_string(m));
        for (int i : is)
            record(verdict_periodic(figure_eight_with_actions(), m, i), m % 2 == 0 || i % 4 == 0,
                   "periodic m=" + std::to_string(m) + " i=" + std::to_string(i));
    }
    c.out.detail += (c.out.detail.empty() ? "" : "; ") + std::to_string(seen) + " verdicts, " +
                    std::to_string(strong) + " strong";
    return c.out;
}

}  // namespace

int main() {
    criterion(1, "Sarkar map on the box: s(a) = a + d", 1, sarkar_box);
    criterion(2, "Table of iota and tau|tau actions on H_0(A0(4_1#4_1))", 10, action_table);
    criterion(3, "4_1#4_1 with tau#tau: invariant span, delta > 0, StrongCork", 30, span_pipeline);
    criterion(4, "census --max-crossings 8 gives the 17 knots", 5, census_17);
    criterion(5, "property suite", 120, properties);
    criterion(6, "delta = 0 iff local map from the trivial complex", 120, delta_zero_local);
    criterion(7, "split verdict agrees with delta on the tensor product", 120, split_routes);
    criterion(8, "connected complexes of 4_1 and T(2,3)#T(2,3)", 10, conn_shapes);
    criterion(9, "torus sum and staircase+box families", 60, families);
    criterion(10, "delta(4_1#4_1, id) = 0 with witness", 10, slice_witness);
    criterion(11, "verdict gates and certificate replay", 60, gates);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures;
}
