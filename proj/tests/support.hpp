#pragma once
// Randomized inputs for property tests: builder complexes hidden behind
// grading-preserving changes of basis.

#include <random>
#include <string>
#include <vector>

#include "corkscrew/cfk.hpp"

namespace corkscrew::fixtures {

/// Random P = I + N, N nilpotent of bidegree 0; returns {P, P^-1}.
inline std::pair<LinearMap, LinearMap> random_basis_change(const KnotComplex& c, std::mt19937_64& rng,
                                                           int max_power = 1) {
    const std::size_t n = c.rank();
    LinearMap nil = LinearMap::zero(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const Bigrading diff = c.generators[i].gr - c.generators[j].gr;
            if (diff.gu > 0 || diff.gv > 0 || diff.gu % 2 != 0 || diff.gv % 2 != 0) continue;
            const Monomial m{-diff.gu / 2, -diff.gv / 2};
            if (m.u > max_power || m.v > max_power) continue;
            // constant entries only below the diagonal keep P unipotent
            if (m.is_one() && j < i) continue;
            if (rng() % 2) nil.images[i].add({static_cast<int>(j), m});
        }
    LinearMap p = LinearMap::identity(n) + nil;
    LinearMap inv = LinearMap::identity(n);
    LinearMap term = LinearMap::identity(n);
    for (std::size_t k = 1; k <= n + 1; ++k) {
        term = compose(nil, term);
        if (term.is_zero()) break;
        inv += term;
    }
    p.bidegree = inv.bidegree = {};
    return {p, inv};
}

inline LinearMap conjugate(const LinearMap& f, const LinearMap& p, const LinearMap& p_inv) {
    LinearMap out = compose(p_inv, compose(f, p));
    out.bidegree = f.bidegree;
    return out;
}

inline PhiIotaComplex change_basis(const PhiIotaComplex& x, std::mt19937_64& rng) {
    auto [p, inv] = random_basis_change(x.complex, rng);
    PhiIotaComplex out = x;
    out.complex.differential = conjugate(x.complex.differential, p, inv);
    out.phi = conjugate(x.phi, p, inv);
    out.phi_inverse = conjugate(x.phi_inverse, p, inv);
    out.iota = conjugate(x.iota, p, inv);
    out.complex.name = x.complex.name + "'";
    return out;
}

/// Builder suite: every model used in the worked examples.
inline std::vector<PhiIotaComplex> builder_suite() {
    const auto f = figure_eight();
    const auto t = torus_2(1);
    std::vector<PhiIotaComplex> out = {
        unknot(),
        t,
        torus_2(2),
        torus_2(3),
        f.with_identity,
        figure_eight_with_actions(),
        with_sarkar_power(f.with_identity, 1),
        thin_model(0, true),
        thin_model(1, true),
        thin_model(-2, true),
        thin_model(3, false),
        staircase_box_model(0, 2),
        staircase_box_model(0, 3),
        dual(t),
        dual(figure_eight_with_actions()),
        tensor(t, t),
        tensor(t, f.with_identity),
    };
    return out;
}

/// Small random S3-type complexes: a builder model after a random change of basis.
inline std::vector<PhiIotaComplex> random_suite(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto f = figure_eight();
    const std::vector<PhiIotaComplex> seeds = {
        unknot(),          torus_2(1),         f.with_identity,          figure_eight_with_actions(),
        thin_model(0, true), thin_model(1, true), staircase_box_model(0, 2), staircase_box_model(0, 3),
        dual(torus_2(2)),  thin_model(-1, true)};
    std::vector<PhiIotaComplex> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(change_basis(seeds[rng() % seeds.size()], rng));
    return out;
}

}  // namespace corkscrew::fixtures
