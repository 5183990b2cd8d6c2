#pragma once
// Standard forms (staircase plus boxes), connected complexes, and the
// S-nontriviality test s !~ id on the connected complex.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cfk.hpp"
#include "morphisms.hpp"

namespace corkscrew {

// ---------------------------------------------------------------------------
// Cancellation

/// Cancel every arrow with coefficient 1 until none is left.
inline KnotComplex reduce(KnotComplex c) {
    for (;;) {
        int from = -1, to = -1;
        for (std::size_t i = 0; i < c.rank() && from < 0; ++i)
            for (const auto& t : c.differential.images[i].terms())
                if (t.mono.is_one()) {
                    from = static_cast<int>(i);
                    to = t.gen;
                    break;
                }
        if (from < 0) return c;
        const Element dx = c.differential.images[static_cast<std::size_t>(from)];
        for (auto& img : c.differential.images) {
            const Poly coeff = img.coefficient(to);
            if (!coeff.is_zero()) img += dx.times(coeff);
        }
        KnotComplex out;
        out.name = c.name;
        std::vector<int> remap(c.rank(), -1);
        for (std::size_t i = 0; i < c.rank(); ++i)
            if (static_cast<int>(i) != from && static_cast<int>(i) != to) {
                remap[i] = static_cast<int>(out.generators.size());
                out.generators.push_back(c.generators[i]);
            }
        out.differential = LinearMap::zero(out.rank(), false, {-1, -1});
        for (std::size_t i = 0; i < c.rank(); ++i) {
            if (remap[i] < 0) continue;
            Element e;
            for (const auto& t : c.differential.images[i].terms())
                if (remap[static_cast<std::size_t>(t.gen)] >= 0) e.add({remap[static_cast<std::size_t>(t.gen)], t.mono});
            out.differential.images[static_cast<std::size_t>(remap[i])] = e;
        }
        c = std::move(out);
    }
}

/// Matrix of coefficients of 1 in a straight map (rows: targets).
inline F2Matrix constant_part(const LinearMap& f, std::size_t dst_rank) {
    F2Matrix m(dst_rank, f.images.size());
    for (std::size_t i = 0; i < f.images.size(); ++i)
        for (const auto& t : f.images[i].terms())
            if (t.mono.is_one()) m.flip(static_cast<std::size_t>(t.gen), i);
    return m;
}

/// A grading-preserving map of free modules is invertible iff its constant part is.
inline bool is_isomorphism(const LinearMap& f, std::size_t dst_rank) {
    return f.images.size() == dst_rank && rank(constant_part(f, dst_rank)) == dst_rank;
}

// ---------------------------------------------------------------------------
// Standard forms

struct BoxSummand {
    int length = 1;
    Bigrading a_grading;  // grading of the initial corner a
    auto operator<=>(const BoxSummand&) const = default;
};

struct StandardForm {
    std::vector<int> steps;  // empty for a single dot
    bool mirrored = false;   // staircase is the dual of staircase_steps(steps)
    std::vector<BoxSummand> boxes;
    std::string method;      // "split" or "thin"
    KnotComplex model;       // staircase then boxes
    LinearMap iso;           // model -> reduced input, an isomorphism of complexes
    KnotComplex reduced;
};

inline KnotComplex box_at(const BoxSummand& b) {
    return shifted(box(b.length), b.a_grading - Bigrading{1 - b.length, 1 - b.length});
}

inline KnotComplex standard_model(const std::vector<int>& steps, bool mirrored, const std::vector<BoxSummand>& boxes,
                                  const std::string& name) {
    KnotComplex st = steps.empty() ? staircase(0) : staircase_steps(steps);
    if (mirrored) st = dual(st);
    KnotComplex out = st;
    for (const auto& b : boxes) out = direct_sum(out, box_at(b));
    out.name = name;
    return out;
}

namespace detail {

inline std::vector<std::vector<int>> components(const KnotComplex& c) {
    std::vector<int> parent(c.rank());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < c.rank(); ++i)
        for (const auto& t : c.differential.images[i].terms()) parent[find(static_cast<int>(i))] = find(t.gen);
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < c.rank(); ++i) groups[find(static_cast<int>(i))].push_back(static_cast<int>(i));
    std::vector<std::vector<int>> out;
    for (auto& [k, v] : groups) out.push_back(std::move(v));
    return out;
}

/// Match a component against staircase_steps; returns steps and generator order y0, y1, ...
inline std::optional<std::pair<std::vector<int>, std::vector<int>>> match_staircase(const KnotComplex& c,
                                                                                   const std::vector<int>& comp) {
    if (comp.size() == 1) {
        if (!c.differential.images[static_cast<std::size_t>(comp[0])].is_zero()) return std::nullopt;
        return std::make_pair(std::vector<int>{}, comp);
    }
    if (comp.size() % 2 == 0) return std::nullopt;
    std::map<int, std::vector<int>> incoming;
    for (int g : comp)
        for (const auto& t : c.differential.images[static_cast<std::size_t>(g)].terms()) incoming[t.gen].push_back(g);
    // y0: no outgoing arrows, hit only by a pure U power
    std::optional<int> start;
    for (int g : comp) {
        if (!c.differential.images[static_cast<std::size_t>(g)].is_zero()) continue;
        const auto& in = incoming[g];
        if (in.size() != 1) continue;
        const Poly p = c.differential.images[static_cast<std::size_t>(in[0])].coefficient(g);
        if (p.terms().size() == 1 && p.terms()[0].v == 0) start = g;
    }
    if (!start) return std::nullopt;
    std::vector<int> steps, order{*start};
    int cur = *start;
    while (order.size() < comp.size()) {
        const auto& in = incoming[cur];
        std::optional<int> odd;
        for (int g : in)
            if (std::find(order.begin(), order.end(), g) == order.end()) odd = g;
        if (!odd) return std::nullopt;
        const auto& terms = c.differential.images[static_cast<std::size_t>(*odd)].terms();
        if (terms.size() != 2) return std::nullopt;
        const Term* back = nullptr;
        const Term* next = nullptr;
        for (const auto& t : terms) (t.gen == cur ? back : next) = &t;
        if (!back || !next || back->mono.v != 0 || back->mono.u < 1 || next->mono.u != 0 || next->mono.v < 1)
            return std::nullopt;
        if (!c.differential.images[static_cast<std::size_t>(next->gen)].is_zero()) return std::nullopt;
        steps.push_back(back->mono.u);
        steps.push_back(next->mono.v);
        order.push_back(*odd);
        order.push_back(next->gen);
        cur = next->gen;
    }
    return std::make_pair(steps, order);
}

/// Match a square box; returns its side and generator order a, b, c, d.
inline std::optional<std::pair<int, std::vector<int>>> match_box(const KnotComplex& c, const std::vector<int>& comp) {
    if (comp.size() != 4) return std::nullopt;
    for (int a : comp) {
        const auto& ta = c.differential.images[static_cast<std::size_t>(a)].terms();
        if (ta.size() != 2) continue;
        const Term* tb = nullptr;
        const Term* tc = nullptr;
        for (const auto& t : ta) {
            if (t.mono.v == 0) tb = &t;
            if (t.mono.u == 0) tc = &t;
        }
        if (!tb || !tc || tb == tc) continue;
        const int l = tb->mono.u;
        if (l < 1 || tc->mono.v != l) continue;
        const auto& bimg = c.differential.images[static_cast<std::size_t>(tb->gen)].terms();
        const auto& cimg = c.differential.images[static_cast<std::size_t>(tc->gen)].terms();
        if (bimg.size() != 1 || cimg.size() != 1 || bimg[0].gen != cimg[0].gen) continue;
        if (bimg[0].mono != Monomial{0, l} || cimg[0].mono != Monomial{l, 0}) continue;
        const int d = bimg[0].gen;
        if (!c.differential.images[static_cast<std::size_t>(d)].is_zero()) continue;
        return std::make_pair(l, std::vector<int>{a, tb->gen, tc->gen, d});
    }
    return std::nullopt;
}

/// Model generator i maps to input generator order[i].
inline LinearMap permutation_map(const std::vector<int>& order) {
    LinearMap f = LinearMap::zero(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) f.images[i] = Element(order[i]);
    return f;
}

inline std::optional<StandardForm> split_form(const KnotComplex& reduced) {
    StandardForm sf;
    sf.method = "split";
    std::vector<int> order;
    bool have_staircase = false;
    std::vector<std::pair<BoxSummand, std::vector<int>>> boxes;
    const KnotComplex mirror = dual(reduced);
    for (const auto& comp : components(reduced)) {
        if (auto b = match_box(reduced, comp)) {
            boxes.push_back({{b->first, reduced.generators[static_cast<std::size_t>(b->second[0])].gr}, b->second});
            continue;
        }
        if (have_staircase) return std::nullopt;
        if (auto s = match_staircase(reduced, comp)) {
            sf.steps = s->first;
            order = s->second;
        } else if (auto m = match_staircase(mirror, comp)) {
            sf.steps = m->first;
            sf.mirrored = true;
            order = m->second;
        } else {
            return std::nullopt;
        }
        have_staircase = true;
    }
    if (!have_staircase) return std::nullopt;
    std::stable_sort(boxes.begin(), boxes.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [b, gens] : boxes) {
        sf.boxes.push_back(b);
        order.insert(order.end(), gens.begin(), gens.end());
    }
    sf.model = standard_model(sf.steps, sf.mirrored, sf.boxes, "standard(" + reduced.name + ")");
    // staircases are normalized; an unnormalized one is not of this form
    for (std::size_t i = 0; i < order.size(); ++i)
        if (sf.model.generators[i].gr != reduced.generators[static_cast<std::size_t>(order[i])].gr) return std::nullopt;
    sf.iso = permutation_map(order);
    if (!is_chain_map(sf.model, reduced, sf.iso)) return std::nullopt;
    return sf;
}

/// Search for an isomorphism model -> c among chain maps of bidegree 0.
inline std::optional<LinearMap> find_isomorphism(const KnotComplex& model, const KnotComplex& c, std::uint64_t seed,
                                                 int tries = 4096) {
    if (model.rank() != c.rank()) return std::nullopt;
    const auto basis = chain_map_basis(model, c, false, {});
    if (basis.empty()) return std::nullopt;
    auto combine = [&](std::uint64_t word) {
        LinearMap f = LinearMap::zero(model.rank());
        for (std::size_t k = 0; k < basis.size(); ++k)
            if ((word >> k) & 1u) f += basis[k];
        return f;
    };
    if (basis.size() <= 14) {
        for (std::uint64_t w = 1; w < (std::uint64_t{1} << basis.size()); ++w)
            if (LinearMap f = combine(w); is_isomorphism(f, c.rank())) return f;
        return std::nullopt;
    }
    std::mt19937_64 rng(seed);
    for (int t = 0; t < tries; ++t) {
        LinearMap f = LinearMap::zero(model.rank());
        for (const auto& b : basis)
            if (rng() & 1u) f += b;
        if (is_isomorphism(f, c.rank())) return f;
    }
    return std::nullopt;
}

/// Thin complexes: all generators share A - M = tau. Box counts follow from
/// generator counts per Alexander grading: r_k = s_k + 2 B_k + B_{k-1} + B_{k+1}.
inline std::optional<StandardForm> thin_form(const KnotComplex& reduced, std::uint64_t seed) {
    const int tau = reduced.generators.front().gr.alexander() - reduced.generators.front().gr.maslov();
    for (const auto& g : reduced.generators)
        if (g.gr.alexander() - g.gr.maslov() != tau) return std::nullopt;
    std::map<int, int> r;
    int top = 0, bottom = 0;
    for (const auto& g : reduced.generators) {
        ++r[g.gr.alexander()];
        top = std::max(top, g.gr.alexander());
        bottom = std::min(bottom, g.gr.alexander());
    }
    const int n = std::abs(tau);
    auto s = [&](int k) { return std::abs(k) <= n ? 1 : 0; };
    std::map<int, int> boxes;
    auto b = [&](int k) { return boxes.count(k) ? boxes[k] : 0; };
    for (int k = top; k >= bottom; --k) {
        const int next = r[k] - s(k) - 2 * b(k) - b(k + 1);
        if (next < 0) return std::nullopt;
        if (next > 0) boxes[k - 1] = next;
    }
    if (b(bottom - 1) != 0) return std::nullopt;
    StandardForm sf;
    sf.method = "thin";
    sf.mirrored = tau < 0;
    sf.steps.assign(static_cast<std::size_t>(2 * n), 1);
    for (auto it = boxes.rbegin(); it != boxes.rend(); ++it)
        for (int i = 0; i < it->second; ++i) sf.boxes.push_back({1, {it->first - tau, -it->first - tau}});
    std::sort(sf.boxes.begin(), sf.boxes.end());
    sf.model = standard_model(sf.steps, sf.mirrored, sf.boxes, "standard(" + reduced.name + ")");
    auto iso = find_isomorphism(sf.model, reduced, seed);
    if (!iso) return std::nullopt;
    sf.iso = *iso;
    return sf;
}

}  // namespace detail

inline std::optional<StandardForm> recognize_standard(const KnotComplex& c, std::uint64_t seed = 0) {
    KnotComplex r = reduce(c);
    std::optional<StandardForm> sf = detail::split_form(r);
    if (!sf && !r.generators.empty()) sf = detail::thin_form(r, seed);
    if (sf) sf->reduced = std::move(r);
    return sf;
}

// ---------------------------------------------------------------------------
// Connected complexes

inline PhiIotaComplex iota_complex(const PhiIotaComplex& x) {
    const std::size_t n = x.rank();
    return {x.complex, LinearMap::identity(n), x.iota, LinearMap::identity(n)};
}

struct ConnectedResult {
    PhiIotaComplex conn;  // phi = id
    std::string method;   // "exact-standard" or "greedy"
    bool verified = false;
    std::optional<StandardForm> form;
    LocalityCertificate inclusion;   // conn -> X
    LocalityCertificate projection;  // X -> conn
    std::size_t involutions_tried = 0;
    std::string caveat;
};

inline constexpr std::uint64_t kDefaultSeed = 20230601;
inline constexpr int kGreedyRounds = 64;

namespace detail {

/// Boxes that survive in the connected complex: those on the diagonal
/// (a at A = 0) whose class has odd multiplicity. Off-diagonal boxes come in
/// iota-symmetric pairs.
inline std::vector<BoxSummand> surviving_boxes(const std::vector<BoxSummand>& boxes) {
    std::map<BoxSummand, int> count;
    for (const auto& b : boxes)
        if (b.a_grading.gu == b.a_grading.gv) ++count[b];
    std::vector<BoxSummand> out;
    for (const auto& [b, n] : count)
        if (n % 2 == 1) out.push_back(b);
    return out;
}

inline std::optional<LinearMap> solve_in_image(const KnotComplex& sub, const LinearMap& incl, const LinearMap& target,
                                               bool skew, Bigrading bidegree) {
    MapSystem sys;
    const int x = sys.add_block(sub, sub, skew, bidegree);
    sys.add_equation(sub.rank(), {{x, &incl, nullptr}}, &target);
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    return sys.decode(sol->particular, x);
}

/// Restrict to the image of an idempotent chain map e commuting with iota up to homotopy.
inline std::optional<PhiIotaComplex> image_of_idempotent(const PhiIotaComplex& x, const LinearMap& e) {
    const KnotComplex& c = x.complex;
    KnotComplex sub;
    sub.name = c.name;
    LinearMap incl = LinearMap::zero(0);
    // images of generators with independent constant columns form a basis
    F2Matrix m = constant_part(e, c.rank());
    SpanBasis cols(c.rank());
    for (std::size_t j = 0; j < c.rank(); ++j) {
        BitVector col(c.rank());
        for (std::size_t r = 0; r < c.rank(); ++r)
            if (m.get(r, j)) col.set(r);
        if (cols.insert(col)) {
            sub.generators.push_back(c.generators[j]);
            incl.images.push_back(e.images[j]);
        }
    }
    if (sub.rank() == c.rank() || sub.rank() == 0) return std::nullopt;
    sub.differential = LinearMap::zero(sub.rank(), false, {-1, -1});
    auto d = solve_in_image(sub, incl, compose(c.differential, incl), false, {-1, -1});
    if (!d) return std::nullopt;
    sub.differential = *d;
    auto iota = solve_in_image(sub, incl, compose(e, compose(x.iota, incl)), true, {});
    if (!iota) return std::nullopt;
    const std::size_t n = sub.rank();
    return PhiIotaComplex{sub, LinearMap::identity(n), *iota, LinearMap::identity(n)};
}

/// Best-effort kernel growth by local non-isomorphisms, capped and seeded.
inline PhiIotaComplex greedy_connected(PhiIotaComplex x, std::uint64_t seed, int rounds, int bump) {
    std::mt19937_64 rng(seed);
    for (int round = 0; round < rounds; ++round) {
        const MorphismSpace space = self_local_space(x, bump);
        bool progressed = false;
        for (int attempt = 0; attempt < 32 && !progressed; ++attempt) {
            LinearMap g = LinearMap::zero(x.rank());
            bool local = false;
            for (std::size_t k = 0; k < space.basis.size(); ++k)
                if (rng() & 1u) {
                    g += space.basis[k];
                    local = local != space.local[k];
                }
            if (!local || is_isomorphism(g, x.rank())) continue;
            // idempotent power by repeated squaring
            LinearMap e = g;
            for (int i = 0; i < 64 && !(compose(e, e) == e); ++i) e = compose(e, e);
            if (!(compose(e, e) == e)) continue;
            if (auto sub = image_of_idempotent(x, e)) {
                x = std::move(*sub);
                progressed = true;
            }
        }
        if (!progressed) break;
    }
    return x;
}

}  // namespace detail

/// Connected complex of the iota-complex underlying X.
inline ConnectedResult connected_complex(const PhiIotaComplex& x, std::uint64_t seed = kDefaultSeed, int bump = 0) {
    const PhiIotaComplex xi = iota_complex(x);
    ConnectedResult out;
    if (auto sf = recognize_standard(x.complex, seed)) {
        KnotComplex conn =
            standard_model(sf->steps, sf->mirrored, detail::surviving_boxes(sf->boxes), "conn(" + x.complex.name + ")");
        std::optional<ConnectedResult> found;
        out.involutions_tried = enumerate_involutions(conn, [&](InvolutionSearch inv) {
            const std::size_t n = conn.rank();
            PhiIotaComplex candidate{conn, LinearMap::identity(n), inv.iota, LinearMap::identity(n)};
            auto in = local_map_exists(candidate, xi, false, bump);
            if (!in) return false;
            auto pr = local_map_exists(xi, candidate, false, bump);
            if (!pr) return false;
            found = ConnectedResult{candidate, "exact-standard", true, sf, std::move(in), std::move(pr), 0, ""};
            return true;
        });
        if (found) {
            found->involutions_tried = out.involutions_tried;
            return *found;
        }
        out.caveat = "standard form found but no involution on it is locally equivalent; ";
    }
    out.conn = detail::greedy_connected(xi, seed, kGreedyRounds, bump);
    out.conn.complex.name = "conn(" + x.complex.name + ")";
    out.method = "greedy";
    out.verified = false;
    out.caveat += "greedy nonmaximal - unverified";
    out.inclusion = local_map_exists(out.conn, xi, false, bump);
    out.projection = local_map_exists(xi, out.conn, false, bump);
    return out;
}

struct SNontrivialResult {
    bool nontrivial = false;
    ConnectedResult connected;
    std::optional<LinearMap> homotopy;  // s ~ id on conn, when trivial
    std::size_t unknowns = 0;           // size of the infeasible system otherwise
    std::string caveat;
};

inline SNontrivialResult s_nontrivial(const PhiIotaComplex& x, std::uint64_t seed = kDefaultSeed, int bump = 0) {
    SNontrivialResult r;
    r.connected = connected_complex(x, seed, bump);
    const KnotComplex& c = r.connected.conn.complex;
    const HomotopyResult h = homotopic(c, sarkar_map(c), LinearMap::identity(c.rank()));
    r.nontrivial = !h;
    r.homotopy = h.homotopy;
    r.unknowns = h.unknowns;
    r.caveat = r.connected.caveat;
    return r;
}

/// Shape summary, e.g. "staircase(1,1) + box(1)@(0,0)".
inline std::string describe(const StandardForm& sf) {
    std::string s = sf.steps.empty() ? "dot" : std::string(sf.mirrored ? "mirror-" : "") + "staircase(";
    if (!sf.steps.empty()) {
        for (std::size_t i = 0; i < sf.steps.size(); ++i) s += (i ? "," : "") + std::to_string(sf.steps[i]);
        s += ")";
    }
    for (const auto& b : sf.boxes)
        s += " + box(" + std::to_string(b.length) + ")@(" + std::to_string(b.a_grading.gu) + "," +
             std::to_string(b.a_grading.gv) + ")";
    return s;
}

}  // namespace corkscrew
