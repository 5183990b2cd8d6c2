#pragma once
// The cylinder complex Cyl(phi, iota) on A0 and the delta invariant.

#include <optional>
#include <string>
#include <vector>

#include "a0.hpp"
#include "morphisms.hpp"

namespace corkscrew {

/// A0 + A0[-1] + A0[-1] with D(x,y,z) = (dx, (1+phi)x + dy, (1+iota)x + dz).
/// Generator blocks: x at [0, n), y at [n, 2n), z at [2n, 3n).
struct CylComplex {
    UComplex complex;
    std::size_t block = 0;

    UElement project(const UElement& e) const {
        UElement out;
        for (const auto& t : e.terms())
            if (t.gen < static_cast<int>(block)) out.add(t);
        return out;
    }
    UElement part(const UElement& e, int which) const {
        UElement out;
        const int lo = which * static_cast<int>(block), hi = lo + static_cast<int>(block);
        for (const auto& t : e.terms())
            if (t.gen >= lo && t.gen < hi) out.add({t.gen - lo, t.k});
        return out;
    }
};

inline CylComplex build_cyl(const A0Complex& a) {
    const UComplex& c = a.complex;
    const int n = static_cast<int>(c.rank());
    CylComplex out;
    out.block = c.rank();
    for (const char* tag : {"", "y:", "z:"})
        for (const auto& g : c.generators)
            out.complex.generators.push_back({tag + g.id, g.grading - (*tag ? 1 : 0)});
    auto offset = [](const UElement& e, int by) {
        UElement out;
        for (const auto& t : e.terms()) out.add({t.gen + by, t.k});
        return out;
    };
    for (int i = 0; i < n; ++i) {
        UElement d = c.differential.images[i];
        d += offset(a.phi.images[i] + UElement(i), n);
        d += offset(a.iota.images[i] + UElement(i), 2 * n);
        out.complex.differential.images.push_back(d);
    }
    for (int shift : {n, 2 * n})
        for (int i = 0; i < n; ++i) out.complex.differential.images.push_back(offset(c.differential.images[i], shift));
    return out;
}

struct DeltaResult {
    int delta = 0;
    int grading = 0;  // top grading with a nontorsion q-image
    UElement x, y, z;
    Window window;
    std::size_t cycle_dimension = 0;  // dim of Cyl cycles at that grading
    std::size_t nontorsion_rank = 0;  // rank of the tower functional there (0 or 1)
};

/// Exact check of dx = 0, dy = (1+phi)x, dz = (1+iota)x.
inline bool verify_delta_witness(const A0Complex& a, const UElement& x, const UElement& y, const UElement& z) {
    const UMap& d = a.complex.differential;
    return d.apply(x).is_zero() && d.apply(y) == a.phi.apply(x) + x && d.apply(z) == a.iota.apply(x) + x;
}

inline DeltaResult delta_at_window(const A0Complex& a, Window w) {
    const CylComplex cyl = build_cyl(a);
    const TowerProbe probe(a.complex, w);
    const int top = a.complex.max_grading();
    const int floor = a.complex.min_grading() - 2 * w.depth;
    for (int g = top; g >= floor; --g) {
        const auto cycles = lex_basis(cyl.complex.cycles(g), cyl.complex.slice(g).size());
        std::optional<std::size_t> hit;
        for (std::size_t i = 0; i < cycles.size(); ++i) {
            const UElement x = cyl.project(cyl.complex.from_vector(cycles[i], g));
            if (!x.is_zero() && probe.nontorsion(x, g)) hit = i;
        }
        if (!hit) continue;
        if (g % 2 != 0) throw AlgebraError("delta: top nontorsion grading " + std::to_string(g) + " is odd");
        DeltaResult r;
        r.grading = g;
        r.delta = -g / 2;
        r.window = w;
        r.cycle_dimension = cycles.size();
        r.nontorsion_rank = 1;
        // last reduced basis vector with nonzero functional is the lex-least such cycle
        const UElement e = cyl.complex.from_vector(cycles[*hit], g);
        r.x = cyl.part(e, 0);
        r.y = cyl.part(e, 1);
        r.z = cyl.part(e, 2);
        return r;
    }
    throw WindowError("delta: no nontorsion class above grading " + std::to_string(floor));
}

inline DeltaResult delta(const PhiIotaComplex& x, int bump = 0) {
    const A0Complex a = a0(x);
    const Window w = torsion_window(a, bump);
    DeltaResult r = delta_at_window(a, w);
    const DeltaResult wider = delta_at_window(a, Window{w.depth + 2});
    if (wider.delta != r.delta) throw WindowError("delta: window unstable at depth " + std::to_string(w.depth));
    return r;
}

inline std::string format_witness(const DeltaResult& r, const KnotComplex& c) {
    auto show = [&](const UElement& e) {
        if (e.is_zero()) return std::string("0");
        std::string s;
        for (std::size_t i = 0; i < e.terms().size(); ++i) {
            const auto& t = e.terms()[i];
            if (i) s += " + ";
            if (t.k == 1) s += "U*";
            if (t.k > 1) s += "U^" + std::to_string(t.k) + "*";
            s += c.generators.at(t.gen).id;
        }
        return s;
    };
    return "x = " + show(r.x) + "; y = " + show(r.y) + "; z = " + show(r.z);
}

struct DeltaLocalReport {
    int delta = 0;
    bool local_map = false;
    LocalityCertificate certificate;
    DeltaResult delta_result;
};

class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// delta(X) = 0 iff there is a local map from the trivial complex to X.
inline DeltaLocalReport delta_zero_iff_local(const PhiIotaComplex& x, int bump = 0) {
    DeltaLocalReport r;
    r.delta_result = delta(x, bump);
    r.delta = r.delta_result.delta;
    r.certificate = local_map_exists(unknot(), x, false, bump);
    r.local_map = r.certificate.exists;
    if ((r.delta == 0) != r.local_map)
        throw ConsistencyError("consistency violation: delta = " + std::to_string(r.delta) +
                               " but local map from trivial " + (r.local_map ? "exists" : "does not exist") +
                               " for " + x.complex.name);
    return r;
}

}  // namespace corkscrew
