#pragma once
// Chain maps, homotopies, and spaces of chain maps between free complexes.

#include <optional>
#include <string>
#include <vector>

#include "complex.hpp"
#include "map_system.hpp"

namespace corkscrew {

inline constexpr Bigrading kHomotopyShift{1, 1};

/// d_dst f + f d_src
inline LinearMap chain_defect(const KnotComplex& src, const KnotComplex& dst, const LinearMap& f) {
    return compose(dst.differential, f) + compose(f, src.differential);
}

inline bool is_chain_map(const KnotComplex& src, const KnotComplex& dst, const LinearMap& f) {
    return chain_defect(src, dst, f).is_zero();
}

/// Outcome of a homotopy search. When no homotopy exists, `unknowns` and
/// `equations` describe the infeasible system over the finite slices.
struct HomotopyResult {
    std::optional<LinearMap> homotopy;
    std::size_t unknowns = 0;
    std::size_t equations = 0;

    explicit operator bool() const { return homotopy.has_value(); }
};

/// Decide f ~ g as maps src -> dst by solving d H + H d = f + g.
inline HomotopyResult find_homotopy(const KnotComplex& src, const KnotComplex& dst,
                                    const LinearMap& f, const LinearMap& g) {
    if (f.skew != g.skew) throw std::invalid_argument("find_homotopy: maps of different mode");
    MapSystem sys;
    const int h = sys.add_block(src, dst, f.skew, f.bidegree + kHomotopyShift);
    const LinearMap target = f + g;
    sys.add_equation(src.rank(),
                     {{h, &dst.differential, nullptr}, {h, nullptr, &src.differential}}, &target);
    HomotopyResult out;
    out.unknowns = sys.unknowns();
    if (auto sol = sys.solve()) out.homotopy = sys.decode(sol->particular, h);
    return out;
}

inline HomotopyResult find_homotopy(const KnotComplex& c, const LinearMap& f, const LinearMap& g) {
    return find_homotopy(c, c, f, g);
}

/// Check d H + H d == f + g exactly.
inline bool verifies_homotopy(const KnotComplex& src, const KnotComplex& dst, const LinearMap& f,
                              const LinearMap& g, const LinearMap& h) {
    return chain_defect(src, dst, h) == f + g;
}

/// Basis of all chain maps src -> dst of the given mode and bidegree.
inline std::vector<LinearMap> chain_map_basis(const KnotComplex& src, const KnotComplex& dst,
                                              bool skew, Bigrading bidegree) {
    MapSystem sys;
    const int f = sys.add_block(src, dst, skew, bidegree);
    sys.add_equation(src.rank(), {{f, &dst.differential, nullptr}, {f, nullptr, &src.differential}});
    std::vector<LinearMap> out;
    auto sol = sys.solve();
    for (const auto& k : lex_basis(sol->kernel, sys.unknowns())) out.push_back(sys.decode(k, f));
    return out;
}

/// Homotopy inverse of a chain self-map: g with g f ~ id and f g ~ id.
inline std::optional<LinearMap> homotopy_inverse(const KnotComplex& c, const LinearMap& f) {
    MapSystem sys;
    const int g = sys.add_block(c, c, f.skew, -f.bidegree);
    const int h = sys.add_block(c, c, false, kHomotopyShift);
    const LinearMap id = LinearMap::identity(c.rank());
    sys.add_equation(c.rank(), {{g, &c.differential, nullptr}, {g, nullptr, &c.differential}});
    sys.add_equation(c.rank(),
                     {{g, nullptr, &f}, {h, &c.differential, nullptr}, {h, nullptr, &c.differential}}, &id);
    auto sol = sys.solve();
    if (!sol) return std::nullopt;
    LinearMap inv = sys.decode(sol->particular, g);
    if (!find_homotopy(c, compose(f, inv), id)) return std::nullopt;
    return inv;
}

}  // namespace corkscrew
