#pragma once
// Homotopy, homotopy commutation, and local maps between (phi, iota)-complexes.

#include <optional>
#include <string>
#include <vector>

#include "a0.hpp"
#include "cfk.hpp"
#include "homotopy.hpp"

namespace corkscrew {

inline HomotopyResult homotopic(const KnotComplex& c, const LinearMap& f, const LinearMap& g) {
    if (f.skew != g.skew || f.bidegree != g.bidegree)
        throw std::invalid_argument("homotopic: maps differ in mode or bidegree");
    return find_homotopy(c, f, g);
}

/// f g ~ g f for self-maps of c.
inline HomotopyResult commutes_up_to_homotopy(const KnotComplex& c, const LinearMap& f, const LinearMap& g) {
    return find_homotopy(c, compose(f, g), compose(g, f));
}

/// Tower cycle of A0(X) embedded back into CFK(X), with its grading.
struct TowerCycle {
    Element element;
    int grading = 0;
};

inline TowerCycle tower_cycle(const PhiIotaComplex& x, int bump = 0) {
    const A0Complex a = a0(x);
    const UHomology h = a0_homology(a, bump);
    if (h.tower_tops.size() != 1 || !h.tower_generator)
        throw AlgebraError("A0 of " + x.complex.name + " does not have a single tower");
    return {from_a0(*h.tower_generator, x.complex), h.tower_tops.front()};
}

/// Tests U-nontorsion of diagonal cycles of one complex.
class NontorsionTest {
public:
    NontorsionTest(const KnotComplex& c, int bump = 0)
        : c_(&c), a_(a0_complex(c)),
          probe_(a_, torsion_window(c.rank(), c.differential.max_exponent(), bump)) {}
    NontorsionTest(const NontorsionTest&) = delete;
    NontorsionTest& operator=(const NontorsionTest&) = delete;

    bool operator()(const Element& cycle, int grading) const {
        if (cycle.is_zero()) return false;
        return probe_.nontorsion(to_a0(cycle, *c_), grading);
    }

private:
    const KnotComplex* c_;
    UComplex a_;
    TowerProbe probe_;
};

/// Outcome of a local map search. When none exists, `solution_dimension`
/// counts the solutions of the linear constraints, all of which send the
/// tower generator to torsion.
struct LocalityCertificate {
    bool exists = false;
    std::optional<LinearMap> map;
    std::optional<LinearMap> h_phi;
    std::optional<LinearMap> h_iota;
    int shift = 0;  // f has bidegree (shift, shift)
    std::size_t unknowns = 0;
    std::size_t solution_dimension = 0;
    int tower_grading = 0;

    explicit operator bool() const { return exists; }
};

/// Is there a map f of bidegree (shift, shift) with f chain, f phi1 ~ phi2 f,
/// f iota1 ~ iota2 f, and f(tower) nontorsion?
inline LocalityCertificate local_map_at_shift(const PhiIotaComplex& x1, const PhiIotaComplex& x2, int shift,
                                              int bump = 0) {
    const KnotComplex& c1 = x1.complex;
    const KnotComplex& c2 = x2.complex;
    MapSystem sys;
    const Bigrading deg{shift, shift};
    const int f = sys.add_block(c1, c2, false, deg);
    const int hp = sys.add_block(c1, c2, false, deg + kHomotopyShift);
    const int hi = sys.add_block(c1, c2, true, deg + kHomotopyShift);
    sys.add_equation(c1.rank(), {{f, &c2.differential, nullptr}, {f, nullptr, &c1.differential}});
    sys.add_equation(c1.rank(), {{f, nullptr, &x1.phi},
                                 {f, &x2.phi, nullptr},
                                 {hp, &c2.differential, nullptr},
                                 {hp, nullptr, &c1.differential}});
    sys.add_equation(c1.rank(), {{f, nullptr, &x1.iota},
                                 {f, &x2.iota, nullptr},
                                 {hi, &c2.differential, nullptr},
                                 {hi, nullptr, &c1.differential}});
    LocalityCertificate cert;
    cert.shift = shift;
    cert.unknowns = sys.unknowns();
    const auto sol = sys.solve();
    const TowerCycle t = tower_cycle(x1, bump);
    cert.tower_grading = t.grading;
    if (!sol) return cert;
    cert.solution_dimension = sol->kernel.size();
    const NontorsionTest nontorsion(c2, bump);
    // the image quotient at deep grading is one-dimensional, so the functional
    // is nonzero on the span iff it is nonzero on some basis vector
    for (const auto& k : sol->kernel) {
        LinearMap m = sys.decode(k, f);
        if (nontorsion(m.apply(t.element), t.grading + shift)) {
            cert.exists = true;
            cert.map = std::move(m);
            cert.h_phi = sys.decode(k, hp);
            cert.h_iota = sys.decode(k, hi);
            return cert;
        }
    }
    return cert;
}

/// Replays a certificate: every defining property of a local map, checked directly.
inline bool verify_local_map(const PhiIotaComplex& x1, const PhiIotaComplex& x2, const LocalityCertificate& cert,
                             int bump = 0) {
    if (!cert.exists || !cert.map || !cert.h_phi || !cert.h_iota) return false;
    const LinearMap& f = *cert.map;
    const KnotComplex& c1 = x1.complex;
    const KnotComplex& c2 = x2.complex;
    if (!grading_violation(f, c1, c2).empty() || !is_chain_map(c1, c2, f)) return false;
    if (!verifies_homotopy(c1, c2, compose(f, x1.phi), compose(x2.phi, f), *cert.h_phi)) return false;
    if (!verifies_homotopy(c1, c2, compose(f, x1.iota), compose(x2.iota, f), *cert.h_iota)) return false;
    const TowerCycle t = tower_cycle(x1, bump);
    return NontorsionTest(c2, bump)(f.apply(t.element), t.grading + cert.shift);
}

/// Local map X1 -> X2. With allow_shift, diagonal shifts are tried in order
/// 0, -2, 2, -4, 4, ... up to the grading spread.
inline LocalityCertificate local_map_exists(const PhiIotaComplex& x1, const PhiIotaComplex& x2,
                                            bool allow_shift = false, int bump = 0) {
    LocalityCertificate cert = local_map_at_shift(x1, x2, 0, bump);
    if (cert || !allow_shift) return cert;
    int spread = 0;
    for (const auto& g : x1.complex.generators)
        for (const auto& h : x2.complex.generators)
            spread = std::max({spread, std::abs(g.gr.gu - h.gr.gu), std::abs(g.gr.gv - h.gr.gv)});
    for (int s = 2; s <= spread + 2; s += 2)
        for (int shift : {-s, s})
            if (auto c = local_map_at_shift(x1, x2, shift, bump)) return c;
    return cert;
}

/// Grading-preserving self-maps with f chain and f iota ~ iota f.
struct MorphismSpace {
    std::vector<LinearMap> basis;
    std::vector<bool> local;  // locality functional on each basis element
    std::size_t unknowns = 0;
};

inline MorphismSpace self_local_space(const PhiIotaComplex& x, int bump = 0) {
    const KnotComplex& c = x.complex;
    MapSystem sys;
    const int f = sys.add_block(c, c, false, {});
    const int hi = sys.add_block(c, c, true, kHomotopyShift);
    sys.add_equation(c.rank(), {{f, &c.differential, nullptr}, {f, nullptr, &c.differential}});
    sys.add_equation(c.rank(), {{f, nullptr, &x.iota},
                                {f, &x.iota, nullptr},
                                {hi, &c.differential, nullptr},
                                {hi, nullptr, &c.differential}});
    MorphismSpace out;
    out.unknowns = sys.unknowns();
    const auto sol = sys.solve();
    const TowerCycle t = tower_cycle(x, bump);
    const NontorsionTest nontorsion(c, bump);
    // f-parts of the solution space, deduplicated through their span
    std::vector<BitVector> fparts;
    const auto [b0, b1] = sys.block_range(f);
    for (const auto& k : sol->kernel) {
        BitVector v(static_cast<std::size_t>(b1 - b0));
        for (int i = b0; i < b1; ++i)
            if (k.get(static_cast<std::size_t>(i))) v.set(static_cast<std::size_t>(i - b0));
        fparts.push_back(v);
    }
    for (const auto& v : lex_basis(fparts, static_cast<std::size_t>(b1 - b0))) {
        BitVector full(sys.unknowns());
        for (int i = b0; i < b1; ++i)
            if (v.get(static_cast<std::size_t>(i - b0))) full.set(static_cast<std::size_t>(i));
        LinearMap m = sys.decode(full, f);
        out.local.push_back(nontorsion(m.apply(t.element), t.grading));
        out.basis.push_back(std::move(m));
    }
    return out;
}

}  // namespace corkscrew
