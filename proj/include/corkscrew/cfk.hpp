#pragma once
// Knot-like complexes over F2[U,V] with a diffeomorphism action phi and the
// skew involution iota, together with the canonical maps derived from the
// differential and the model complexes used throughout.

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "homotopy.hpp"
#include "ucomplex.hpp"

namespace corkscrew {

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (C, phi, iota): phi straight of bidegree 0, iota skew of bidegree 0.
/// `phi_inverse` is a homotopy inverse of phi recorded at construction.
struct PhiIotaComplex {
    KnotComplex complex;
    LinearMap phi;
    LinearMap iota;
    LinearMap phi_inverse;

    std::size_t rank() const { return complex.rank(); }
};

inline PhiIotaComplex with_phi(PhiIotaComplex x, LinearMap phi, LinearMap phi_inverse) {
    x.phi = std::move(phi);
    x.phi_inverse = std::move(phi_inverse);
    return x;
}

// ---------------------------------------------------------------------------
// Derived maps

/// Phi = d/dU(d), Psi = d/dV(d), entrywise.
inline std::pair<LinearMap, LinearMap> phi_psi_maps(const KnotComplex& c) {
    LinearMap big_phi = LinearMap::zero(c.rank(), false, {1, -1});
    LinearMap big_psi = LinearMap::zero(c.rank(), false, {-1, 1});
    for (std::size_t i = 0; i < c.rank(); ++i) {
        for (std::size_t j = 0; j < c.rank(); ++j) {
            const Poly p = c.differential.images[i].coefficient(static_cast<int>(j));
            if (p.is_zero()) continue;
            big_phi.images[i] += Element(static_cast<int>(j)).times(formal_derivative(p, Variable::U));
            big_psi.images[i] += Element(static_cast<int>(j)).times(formal_derivative(p, Variable::V));
        }
    }
    return {big_phi, big_psi};
}

/// s = id + Phi Psi
inline LinearMap sarkar_map(const KnotComplex& c) {
    auto [big_phi, big_psi] = phi_psi_maps(c);
    LinearMap s = LinearMap::identity(c.rank()) + compose(big_phi, big_psi);
    s.bidegree = {};
    return s;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationReport {
    bool ok = true;
    std::string error;
    bool s3_checked = false;
    bool s3_type = false;
    std::string s3_detail;
};

/// Complex obtained by setting one variable to 1, graded by the other.
inline UComplex specialize_to_one(const KnotComplex& c, Variable set_to_one) {
    UComplex out;
    for (const auto& g : c.generators)
        out.generators.push_back({g.id, set_to_one == Variable::U ? g.gr.gv : g.gr.gu});
    for (const auto& img : c.differential.images) {
        UElement e;
        for (const auto& t : img.terms()) e.add({t.gen, set_to_one == Variable::U ? t.mono.v : t.mono.u});
        out.differential.images.push_back(e);
    }
    return out;
}

inline Window default_window(const KnotComplex& c, int bump = 0) {
    return {static_cast<int>(c.rank()) * (1 + c.differential.max_exponent()) + 2 * bump};
}

inline ValidationReport validate(const KnotComplex& c, bool require_s3_type, int window_bump = 0) {
    ValidationReport r;
    auto fail = [&](std::string msg) {
        r.ok = false;
        r.error = std::move(msg);
        return r;
    };
    if (c.generators.empty()) return fail("no generators");
    for (std::size_t i = 0; i < c.rank(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (c.generators[i].id == c.generators[j].id)
                return fail("duplicate generator id '" + c.generators[i].id + "'");
        if (!c.generators[i].gr.integral_alexander())
            return fail("generator " + c.generators[i].id + " has non-integral Alexander grading");
    }
    if (c.differential.skew || c.differential.bidegree != Bigrading{-1, -1})
        return fail("differential must be straight of bidegree (-1,-1)");
    if (auto v = grading_violation(c.differential, c, c); !v.empty())
        return fail("differential bidegree violated at " + v);
    const LinearMap d2 = compose(c.differential, c.differential);
    for (std::size_t i = 0; i < c.rank(); ++i)
        if (!d2.images[i].is_zero())
            return fail("d^2 != 0 on generator " + c.generators[i].id + ": " + to_string(d2.images[i], c));
    if (require_s3_type) {
        r.s3_checked = true;
        r.s3_type = true;
        const Window w = default_window(c, window_bump);
        for (Variable var : {Variable::U, Variable::V}) {
            const UHomology h = homology_u(specialize_to_one(c, var), w);
            const char* label = var == Variable::U ? "C|U=1" : "C|V=1";
            if (h.tower_tops.size() != 1) {
                r.s3_type = false;
                r.s3_detail = std::string(label) + " has " + std::to_string(h.tower_tops.size()) + " free towers";
            } else if (h.tower_tops.front() != 0) {
                r.s3_type = false;
                r.s3_detail = std::string(label) + " tower top at " + std::to_string(h.tower_tops.front());
            }
            if (!r.s3_type) return fail("not of S3-type: " + r.s3_detail);
        }
    }
    return r;
}

/// Check the contract of a (phi, iota)-complex. Empty string when valid.
inline std::string check_actions(const PhiIotaComplex& x) {
    const auto& c = x.complex;
    if (x.phi.skew || x.phi.bidegree != Bigrading{}) return "phi must be straight of bidegree (0,0)";
    if (!x.iota.skew || x.iota.bidegree != Bigrading{}) return "iota must be skew of bidegree (0,0)";
    if (auto v = grading_violation(x.phi, c, c); !v.empty()) return "phi grading violated at " + v;
    if (auto v = grading_violation(x.iota, c, c); !v.empty()) return "iota grading violated at " + v;
    if (auto v = grading_violation(x.phi_inverse, c, c); !v.empty()) return "phi_inverse grading violated at " + v;
    if (!is_chain_map(c, c, x.phi)) return "phi is not a chain map";
    if (!is_chain_map(c, c, x.iota)) return "iota is not a chain map";
    if (!is_chain_map(c, c, x.phi_inverse)) return "phi_inverse is not a chain map";
    const LinearMap id = LinearMap::identity(c.rank());
    if (!find_homotopy(c, compose(x.phi, x.phi_inverse), id)) return "phi_inverse is not a homotopy inverse";
    if (!find_homotopy(c, compose(x.phi_inverse, x.phi), id)) return "phi_inverse is not a homotopy inverse";
    if (!find_homotopy(c, compose(x.iota, x.iota), sarkar_map(c))) return "iota^2 is not homotopic to s";
    if (!find_homotopy(c, compose(x.phi, x.iota), compose(x.iota, x.phi)))
        return "phi and iota do not homotopy commute";
    return {};
}

// ---------------------------------------------------------------------------
// Constructions

inline KnotComplex shifted(KnotComplex c, Bigrading shift) {
    for (auto& g : c.generators) g.gr = g.gr + shift;
    return c;
}

inline LinearMap direct_sum_maps(const LinearMap& f, const LinearMap& g, std::size_t offset) {
    LinearMap out = f;
    for (const auto& img : g.images) {
        Element e;
        for (const auto& t : img.terms()) e.add({t.gen + static_cast<int>(offset), t.mono});
        out.images.push_back(e);
    }
    return out;
}

/// Generators of `b` are appended after those of `a`.
inline KnotComplex direct_sum(const KnotComplex& a, const KnotComplex& b, std::string name = {}) {
    KnotComplex out;
    out.name = name.empty() ? a.name + "+" + b.name : std::move(name);
    out.generators = a.generators;
    for (auto g : b.generators) {
        auto clash = [&](const std::string& id) {
            return std::any_of(out.generators.begin(), out.generators.end(),
                               [&](const Generator& h) { return h.id == id; });
        };
        while (clash(g.id)) g.id += "'";
        out.generators.push_back(g);
    }
    out.differential = direct_sum_maps(a.differential, b.differential, a.rank());
    return out;
}

/// f (x) g on the tensor product, generator (i, j) at index i * n2 + j.
inline LinearMap tensor_maps(const LinearMap& f, const LinearMap& g) {
    if (f.skew != g.skew) throw std::invalid_argument("tensor_maps: modes differ");
    const std::size_t n2 = g.images.size();
    LinearMap out = LinearMap::zero(f.images.size() * n2, f.skew, f.bidegree + g.bidegree);
    for (std::size_t i = 0; i < f.images.size(); ++i)
        for (std::size_t j = 0; j < n2; ++j) {
            Element e;
            for (const auto& a : f.images[i].terms())
                for (const auto& b : g.images[j].terms())
                    e.add({a.gen * static_cast<int>(n2) + b.gen, a.mono * b.mono});
            out.images[i * n2 + j] = e;
        }
    return out;
}

inline KnotComplex tensor(const KnotComplex& a, const KnotComplex& b) {
    KnotComplex out;
    out.name = a.name + "#" + b.name;
    for (const auto& g : a.generators)
        for (const auto& h : b.generators) out.generators.push_back({g.id + "|" + h.id, g.gr + h.gr});
    const LinearMap ida = LinearMap::identity(a.rank());
    const LinearMap idb = LinearMap::identity(b.rank());
    LinearMap da = a.differential, db = b.differential;
    LinearMap left = tensor_maps(da, idb);
    LinearMap right = tensor_maps(ida, db);
    out.differential = left + right;
    out.differential.bidegree = {-1, -1};
    return out;
}

/// Tensor product with phi1 (x) phi2 and iota = (id + Phi (x) Psi)(iota1 (x) iota2).
inline PhiIotaComplex tensor(const PhiIotaComplex& x1, const PhiIotaComplex& x2) {
    PhiIotaComplex out;
    out.complex = tensor(x1.complex, x2.complex);
    out.phi = tensor_maps(x1.phi, x2.phi);
    out.phi_inverse = tensor_maps(x1.phi_inverse, x2.phi_inverse);
    const auto [phi1, psi1] = phi_psi_maps(x1.complex);
    const auto [phi2, psi2] = phi_psi_maps(x2.complex);
    LinearMap correction = LinearMap::identity(out.rank()) + tensor_maps(phi1, psi2);
    correction.bidegree = {};
    out.iota = compose(correction, tensor_maps(x1.iota, x2.iota));
    return out;
}

/// Dual of a map: transpose, with monomials swapped for skew maps.
inline LinearMap dual_map(const LinearMap& f) {
    LinearMap out = LinearMap::zero(f.images.size(), f.skew, f.bidegree);
    for (std::size_t i = 0; i < f.images.size(); ++i)
        for (const auto& t : f.images[i].terms())
            out.images.at(static_cast<std::size_t>(t.gen)).add({static_cast<int>(i), f.skew ? t.mono.swapped() : t.mono});
    return out;
}

inline std::string mirror_name(const std::string& name) {
    if (name.rfind("-", 0) == 0) return name.substr(1);
    return "-" + name;
}

inline KnotComplex dual(const KnotComplex& c) {
    KnotComplex out;
    out.name = mirror_name(c.name);
    for (const auto& g : c.generators) out.generators.push_back({g.id, -g.gr});
    out.differential = dual_map(c.differential);
    return out;
}

/// Dual triple. The action on the dual is the transpose of the recorded
/// homotopy inverse, so that dual(dual(X)) == X exactly.
inline PhiIotaComplex dual(const PhiIotaComplex& x) {
    PhiIotaComplex out;
    out.complex = dual(x.complex);
    out.iota = dual_map(x.iota);
    out.phi = dual_map(x.phi_inverse);
    out.phi_inverse = dual_map(x.phi);
    return out;
}

// ---------------------------------------------------------------------------
// Involutions

struct InvolutionSearch {
    LinearMap iota;
    LinearMap homotopy;  // iota^2 + s = dH + Hd
    std::size_t space_dimension = 0;
    std::size_t candidates_tried = 0;
};

inline constexpr std::size_t kMaxInvolutionSpace = 22;

/// Visit skew chain maps of bidegree 0 with iota^2 ~ s in lexicographic order
/// of their coordinates. The visitor returns true to stop.
template <class Visitor>
std::size_t enumerate_involutions(const KnotComplex& c, Visitor&& visit) {
    const auto basis = chain_map_basis(c, c, true, {});
    if (basis.size() > kMaxInvolutionSpace)
        throw AlgebraError("involution search space too large (dimension " + std::to_string(basis.size()) + ")");
    const LinearMap s = sarkar_map(c);
    const std::uint64_t n = std::uint64_t{1} << basis.size();
    std::size_t tried = 0;
    for (std::uint64_t word = 0; word < n; ++word) {
        LinearMap iota = LinearMap::zero(c.rank(), true, {});
        for (std::size_t k = 0; k < basis.size(); ++k)
            if ((word >> (basis.size() - 1 - k)) & 1u) iota += basis[k];
        ++tried;
        auto h = find_homotopy(c, compose(iota, iota), s);
        if (!h) continue;
        if (visit(InvolutionSearch{iota, *h.homotopy, basis.size(), tried})) break;
    }
    return tried;
}

/// Lexicographically minimal skew chain map with iota^2 ~ s.
inline InvolutionSearch solve_involution(const KnotComplex& c) {
    std::optional<InvolutionSearch> found;
    enumerate_involutions(c, [&](InvolutionSearch r) {
        found = std::move(r);
        return true;
    });
    if (!found) throw AlgebraError("no involution found for " + c.name);
    return *found;
}

// ---------------------------------------------------------------------------
// Model complexes

inline KnotComplex make_complex(std::string name, std::vector<Generator> gens,
                                const std::vector<std::tuple<std::string, std::string, Monomial>>& arrows) {
    KnotComplex c;
    c.name = std::move(name);
    c.generators = std::move(gens);
    c.differential = LinearMap::zero(c.rank(), false, {-1, -1});
    for (const auto& [from, to, m] : arrows) c.differential.images[c.index_of(from)].add({c.index_of(to), m});
    return c;
}

inline PhiIotaComplex trivial_actions(KnotComplex c, LinearMap iota) {
    const std::size_t n = c.rank();
    return {std::move(c), LinearMap::identity(n), std::move(iota), LinearMap::identity(n)};
}

inline PhiIotaComplex unknot() {
    KnotComplex c = make_complex("unknot", {{"u", {0, 0}}}, {});
    LinearMap iota = LinearMap::identity(1);
    iota.skew = true;
    return trivial_actions(std::move(c), std::move(iota));
}

/// Box of side l: da = U^l b + V^l c, db = V^l d, dc = U^l d.
inline KnotComplex box(int l) {
    if (l < 1) throw std::invalid_argument("box: side length must be >= 1");
    return make_complex("box(" + std::to_string(l) + ")",
                        {{"a", {1 - l, 1 - l}}, {"b", {l, -l}}, {"c", {-l, l}}, {"d", {l - 1, l - 1}}},
                        {{"a", "b", {l, 0}}, {"a", "c", {0, l}}, {"b", "d", {0, l}}, {"c", "d", {l, 0}}});
}

/// Staircase with d y_{2i+1} = U^{steps[2i]} y_{2i} + V^{steps[2i+1]} y_{2i+2},
/// normalized so that y_0 has gr_U = 0 and the last generator has gr_V = 0.
inline KnotComplex staircase_steps(const std::vector<int>& steps, std::string name = {}) {
    if (steps.size() % 2 != 0) throw std::invalid_argument("staircase: step list must have even length");
    for (int s : steps)
        if (s < 1) throw std::invalid_argument("staircase: steps must be >= 1");
    const int total_v = std::accumulate(steps.begin(), steps.end(), 0, [&, i = 0](int acc, int s) mutable {
        return acc + ((i++ % 2 == 1) ? s : 0);
    });
    std::vector<Generator> gens;
    std::vector<std::tuple<std::string, std::string, Monomial>> arrows;
    Bigrading cur{0, -2 * total_v};
    gens.push_back({"y0", cur});
    for (std::size_t i = 0; i < steps.size() / 2; ++i) {
        const int a = steps[2 * i], b = steps[2 * i + 1];
        const Bigrading odd = cur + Bigrading{1 - 2 * a, 1};
        const Bigrading even = odd + Bigrading{-1, 2 * b - 1};
        const std::string yo = "y" + std::to_string(2 * i + 1), ye = "y" + std::to_string(2 * i + 2);
        gens.push_back({yo, odd});
        gens.push_back({ye, even});
        arrows.push_back({yo, "y" + std::to_string(2 * i), Monomial{a, 0}});
        arrows.push_back({yo, ye, Monomial{0, b}});
        cur = even;
    }
    if (name.empty()) {
        name = "staircase(";
        for (std::size_t i = 0; i < steps.size(); ++i) name += (i ? "," : "") + std::to_string(steps[i]);
        name += ")";
    }
    return make_complex(std::move(name), std::move(gens), arrows);
}

/// Step-one staircase of tau = n (n >= 0); the single dot when n == 0.
inline KnotComplex staircase(int n) {
    if (n < 0) throw std::invalid_argument("staircase: use the dual for negative tau");
    return staircase_steps(std::vector<int>(static_cast<std::size_t>(2 * n), 1),
                           n == 0 ? "dot" : "staircase(" + std::to_string(n) + ")");
}

/// Reflection y_i -> y_{2n-i} of a symmetric staircase.
inline LinearMap staircase_reflection(const KnotComplex& c) {
    LinearMap iota = LinearMap::zero(c.rank(), true, {});
    for (std::size_t i = 0; i < c.rank(); ++i) iota.images[i] = Element(static_cast<int>(c.rank() - 1 - i));
    return iota;
}

/// T(2, 2n+1): step-one staircase with the reflection involution.
inline PhiIotaComplex torus_2(int n) {
    if (n < 1) throw std::invalid_argument("torus(2,2n+1): n must be >= 1");
    KnotComplex c = staircase(n);
    c.name = "T(2," + std::to_string(2 * n + 1) + ")";
    LinearMap iota = staircase_reflection(c);
    return trivial_actions(std::move(c), std::move(iota));
}

/// Step-one staircase of tau (dual for tau < 0) plus an optional box of side
/// `box_side` centred at the staircase's middle bigrading (for side 1 the
/// corner a sits there).
inline KnotComplex staircase_plus_box(int tau, int box_side) {
    KnotComplex st = tau >= 0 ? staircase(tau) : dual(staircase(-tau));
    if (tau < 0) st.name = "staircase(" + std::to_string(tau) + ")";
    if (box_side <= 0) return st;
    const int mid = st.generators[static_cast<std::size_t>(std::abs(tau))].gr.gu;
    KnotComplex b = shifted(box(box_side), Bigrading{mid, mid});
    return direct_sum(st, b, st.name + "+box(" + std::to_string(box_side) + ")");
}

/// Thin model: staircase of tau plus one box(1) when the box count is odd.
inline PhiIotaComplex thin_model(int tau, bool odd_boxes) {
    KnotComplex c = staircase_plus_box(tau, odd_boxes ? 1 : 0);
    c.name = "thin(" + std::to_string(tau) + (odd_boxes ? ",odd)" : ",even)");
    InvolutionSearch inv = solve_involution(c);
    return trivial_actions(std::move(c), std::move(inv.iota));
}

/// Staircase of tau plus a centred box(l), with a solved involution.
inline PhiIotaComplex staircase_box_model(int tau, int l) {
    KnotComplex c = staircase_plus_box(tau, l);
    InvolutionSearch inv = solve_involution(c);
    return trivial_actions(std::move(c), std::move(inv.iota));
}

/// Figure-eight complex: x plus box(1), with its involution iota and the
/// periodic action tau (free parameter set to zero). phi defaults to tau.
struct FigureEight {
    PhiIotaComplex with_identity;
    LinearMap tau;
    LinearMap tau_inverse;
};

inline FigureEight figure_eight() {
    KnotComplex c = make_complex("4_1", {{"x", {0, 0}}, {"a", {0, 0}}, {"b", {1, -1}}, {"c", {-1, 1}}, {"d", {0, 0}}},
                                 {{"a", "b", {1, 0}}, {"a", "c", {0, 1}}, {"b", "d", {0, 1}}, {"c", "d", {1, 0}}});
    auto el = [&](std::initializer_list<const char*> ids) { return c.element(ids); };
    LinearMap iota = LinearMap::zero(5, true, {});
    iota.images[c.index_of("x")] = el({"x", "d"});
    iota.images[c.index_of("a")] = el({"a", "x"});
    iota.images[c.index_of("b")] = el({"c"});
    iota.images[c.index_of("c")] = el({"b"});
    iota.images[c.index_of("d")] = el({"d"});
    LinearMap tau = LinearMap::zero(5, false, {});
    tau.images[c.index_of("x")] = el({"x", "d"});
    tau.images[c.index_of("a")] = el({"a", "x"});
    tau.images[c.index_of("b")] = el({"b"});
    tau.images[c.index_of("c")] = el({"c"});
    tau.images[c.index_of("d")] = el({"d"});
    // tau^4 ~ s^2 ~ id, so tau^3 = tau s is a homotopy inverse
    LinearMap tau_inv = compose(tau, sarkar_map(c));
    FigureEight out{trivial_actions(c, iota), tau, tau_inv};
    return out;
}

inline PhiIotaComplex figure_eight_with_actions() {
    FigureEight f = figure_eight();
    return with_phi(f.with_identity, f.tau, f.tau_inverse);
}

/// Replace phi by s^i (s is its own homotopy inverse).
inline PhiIotaComplex with_sarkar_power(PhiIotaComplex x, int i) {
    const LinearMap s = sarkar_map(x.complex);
    const LinearMap si = power(s, ((i % 2) + 2) % 2);
    return with_phi(std::move(x), si, si);
}

/// Rename generators of unknot (x) X back to those of X.
inline PhiIotaComplex strip_unit_labels(PhiIotaComplex x) {
    for (auto& g : x.complex.generators) {
        auto p = g.id.find('|');
        if (p != std::string::npos) g.id = g.id.substr(p + 1);
    }
    return x;
}

}  // namespace corkscrew
