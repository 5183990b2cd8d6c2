#pragma once
// The Alexander-grading-zero subcomplex A0 as a free F2[U]-complex, U = UV.

#include <stdexcept>
#include <string>
#include <vector>

#include "cfk.hpp"
#include "ucomplex.hpp"

namespace corkscrew {

class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A0 with restricted actions. Generator i is lift[i] * g_i.
struct A0Complex {
    UComplex complex;
    UMap phi;
    UMap iota;
    std::vector<Monomial> lift;
    int max_exponent = 0;  // over d, phi, iota of the source
};

/// Generator of A0 attached to a generator of Alexander grading a.
inline Monomial a0_lift(Bigrading gr) {
    const int a = gr.alexander();
    return a >= 0 ? Monomial{a, 0} : Monomial{0, -a};
}

/// U^a V^b g with A = 0 becomes U^k w_g.
inline UElement to_a0(const Element& e, const KnotComplex& c) {
    UElement out;
    for (const auto& t : e.terms()) {
        const Bigrading gr = c.grading(t);
        if (gr.gu != gr.gv)
            throw std::invalid_argument("to_a0: term of " + c.generators[t.gen].id + " is off the diagonal");
        out.add({t.gen, t.mono.u - std::max(c.generators[t.gen].gr.alexander(), 0)});
    }
    return out;
}

inline Element from_a0(const UElement& e, const KnotComplex& c) {
    Element out;
    for (const auto& t : e.terms()) out.add({t.gen, a0_lift(c.generators[t.gen].gr) * Monomial{t.k, t.k}});
    return out;
}

inline UMap restrict_to_a0(const LinearMap& f, const KnotComplex& src, const KnotComplex& dst) {
    UMap out;
    for (std::size_t i = 0; i < src.rank(); ++i)
        out.images.push_back(to_a0(f.apply(Element(static_cast<int>(i), a0_lift(src.generators[i].gr))), dst));
    return out;
}

inline UComplex a0_complex(const KnotComplex& c) {
    UComplex out;
    for (const auto& g : c.generators) out.generators.push_back({g.id, std::min(g.gr.gu, g.gr.gv)});
    out.differential = restrict_to_a0(c.differential, c, c);
    return out;
}

inline A0Complex a0(const PhiIotaComplex& x) {
    A0Complex out;
    out.complex = a0_complex(x.complex);
    out.phi = restrict_to_a0(x.phi, x.complex, x.complex);
    out.iota = restrict_to_a0(x.iota, x.complex, x.complex);
    for (const auto& g : x.complex.generators) out.lift.push_back(a0_lift(g.gr));
    out.max_exponent = std::max({x.complex.differential.max_exponent(), x.phi.max_exponent(), x.iota.max_exponent()});
    return out;
}

/// Torsion bound: generators times (1 + largest exponent), plus twice the bump.
inline Window torsion_window(std::size_t generators, int max_exponent, int bump = 0) {
    return {static_cast<int>(generators) * (1 + max_exponent) + 2 * bump};
}

inline Window torsion_window(const A0Complex& a, int bump = 0) {
    return torsion_window(a.complex.rank(), a.max_exponent, bump);
}

/// Homology of a complex, re-verified at depth + 2.
inline UHomology stable_homology(const UComplex& c, Window w) {
    UHomology h = homology_u(c, w);
    const UHomology wider = homology_u(c, Window{w.depth + 2});
    if (!(h == wider)) throw WindowError("window unstable at depth " + std::to_string(w.depth));
    return h;
}

inline UHomology a0_homology(const A0Complex& a, int bump = 0) {
    return stable_homology(a.complex, torsion_window(a, bump));
}

}  // namespace corkscrew
