#pragma once
// Free singly graded chain complexes over F2[U] (deg U = -2, deg d = -1) and
// their homology, computed slice by slice inside a finite grading window.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "f2.hpp"

namespace corkscrew {

struct UTerm {
    int gen = 0;
    int k = 0;  // power of U
    auto operator<=>(const UTerm&) const = default;
};

class UElement {
public:
    UElement() = default;
    UElement(int gen, int k = 0) : terms_{UTerm{gen, k}} {}

    const std::vector<UTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const UTerm& t) {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), t);
        if (it != terms_.end() && *it == t)
            terms_.erase(it);
        else
            terms_.insert(it, t);
    }
    UElement& operator+=(const UElement& o) {
        for (const auto& t : o.terms_) add(t);
        return *this;
    }
    friend UElement operator+(UElement a, const UElement& b) { return a += b; }

    UElement shifted(int k) const {
        UElement out = *this;
        for (auto& t : out.terms_) t.k += k;
        return out;
    }
    bool operator==(const UElement&) const = default;

private:
    std::vector<UTerm> terms_;
};

/// U-equivariant map given by images of generators.
struct UMap {
    std::vector<UElement> images;

    UElement apply(const UElement& e) const {
        UElement out;
        for (const auto& t : e.terms()) out += images.at(t.gen).shifted(t.k);
        return out;
    }
    static UMap identity(std::size_t n) {
        UMap m;
        for (std::size_t i = 0; i < n; ++i) m.images.emplace_back(static_cast<int>(i));
        return m;
    }
    bool operator==(const UMap&) const = default;
};

struct UGenerator {
    std::string id;
    int grading = 0;
};

class UComplex {
public:
    std::vector<UGenerator> generators;
    UMap differential;

    std::size_t rank() const { return generators.size(); }

    int max_grading() const {
        int m = generators.empty() ? 0 : generators.front().grading;
        for (const auto& g : generators) m = std::max(m, g.grading);
        return m;
    }
    int min_grading() const {
        int m = generators.empty() ? 0 : generators.front().grading;
        for (const auto& g : generators) m = std::min(m, g.grading);
        return m;
    }
    int grading(const UTerm& t) const { return generators.at(t.gen).grading - 2 * t.k; }

    /// Basis of the grading-h piece, ordered by generator.
    std::vector<UTerm> slice(int h) const {
        std::vector<UTerm> out;
        for (int g = 0; g < static_cast<int>(generators.size()); ++g) {
            const int d = generators[g].grading - h;
            if (d >= 0 && d % 2 == 0) out.push_back({g, d / 2});
        }
        return out;
    }

    BitVector to_vector(const UElement& e, int h) const {
        const auto basis = slice(h);
        BitVector v(basis.size());
        for (const auto& t : e.terms()) {
            auto it = std::lower_bound(basis.begin(), basis.end(), t);
            if (it == basis.end() || *it != t)
                throw std::invalid_argument("UComplex: element not homogeneous of grading " + std::to_string(h));
            v.flip(static_cast<std::size_t>(it - basis.begin()));
        }
        return v;
    }
    UElement from_vector(const BitVector& v, int h) const {
        const auto basis = slice(h);
        UElement e;
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (v.get(i)) e.add(basis[i]);
        return e;
    }

    /// Matrix of a U-equivariant map of degree `deg` from grading h to h + deg.
    F2Matrix map_matrix(const UMap& f, int h, int deg) const {
        const auto src = slice(h);
        const auto dst = slice(h + deg);
        F2Matrix m(dst.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            const BitVector col = to_vector(f.apply(UElement(src[c].gen, src[c].k)), h + deg);
            for (std::size_t r = 0; r < dst.size(); ++r)
                if (col.get(r)) m.set(r, c);
        }
        return m;
    }
    F2Matrix boundary_matrix(int h) const { return map_matrix(differential, h, -1); }

    std::vector<BitVector> cycles(int h) const { return kernel_basis(boundary_matrix(h)); }

    SpanBasis boundaries(int h) const {
        SpanBasis span(slice(h).size());
        const F2Matrix d = boundary_matrix(h + 1);
        for (std::size_t c = 0; c < d.cols(); ++c) {
            BitVector col(d.rows());
            for (std::size_t r = 0; r < d.rows(); ++r)
                if (d.get(r, c)) col.set(r);
            span.insert(col);
        }
        return span;
    }

    bool is_cycle(const UElement& e) const { return differential.apply(e).is_zero(); }
};

/// Window policy for torsion bounds: U^depth is assumed to annihilate every
/// torsion class. `depth` is re-checked at depth + 2 by callers that need a
/// certificate.
struct Window {
    int depth = 0;
};

/// Decides U-nontorsion of cycles by pushing them deep below all torsion.
class TowerProbe {
public:
    TowerProbe(const UComplex& c, Window w) : c_(&c), w_(w) {}

    /// Grading a cycle of grading h is pushed to.
    int deep_grading(int h) const {
        const int floor = c_->min_grading() - 2 * w_.depth;
        int k = w_.depth;
        while (h - 2 * k > floor) ++k;
        return h - 2 * k;
    }

    bool nontorsion(const UElement& cycle, int h) const {
        const int t = deep_grading(h);
        const BitVector v = c_->to_vector(cycle.shifted((h - t) / 2), t);
        return !boundaries_at(t).contains(v);
    }

    /// Dimension of homology at the deep grading for parity of h.
    std::size_t deep_dimension(int h) const {
        const int t = deep_grading(h);
        return c_->cycles(t).size() - boundaries_at(t).rank();
    }

private:
    const SpanBasis& boundaries_at(int t) const {
        auto it = cache_.find(t);
        if (it == cache_.end()) it = cache_.emplace(t, c_->boundaries(t)).first;
        return it->second;
    }

    const UComplex* c_;
    Window w_;
    mutable std::map<int, SpanBasis> cache_;
};

struct TorsionSummand {
    int top = 0;    // grading of the generator
    int order = 0;  // U^order kills it
    int count = 0;
    auto operator<=>(const TorsionSummand&) const = default;
};

/// Homology as an F2[U]-module: free summands (towers) plus cyclic torsion.
struct UHomology {
    std::vector<int> tower_tops;  // one entry per free summand
    std::vector<TorsionSummand> torsion;
    std::optional<UElement> tower_generator;  // cycle at the top of the (single) tower
    int window_low = 0;
    int window_high = 0;

    bool operator==(const UHomology& o) const {
        return tower_tops == o.tower_tops && torsion == o.torsion;
    }
};

/// rank of U^k : H_h -> H_{h-2k}
inline std::size_t u_power_rank(const UComplex& c, int h, int k) {
    const auto z = c.cycles(h);
    const int t = h - 2 * k;
    SpanBasis span = c.boundaries(t);
    const std::size_t base = span.rank();
    for (const auto& v : z) span.insert(c.to_vector(c.from_vector(v, h).shifted(k), t));
    return span.rank() - base;
}

/// Homology basis at grading h: cycles completing the boundaries.
inline std::vector<UElement> homology_basis(const UComplex& c, int h) {
    SpanBasis span = c.boundaries(h);
    std::vector<UElement> out;
    for (const auto& z : c.cycles(h))
        if (span.insert(z)) out.push_back(c.from_vector(z, h));
    return out;
}

/// True iff the cycle x of grading h is a boundary.
inline bool is_boundary(const UComplex& c, const UElement& x, int h) {
    return c.boundaries(h).contains(c.to_vector(x, h));
}

/// Full module structure within the window [min - 2 depth, max + 2].
inline UHomology homology_u(const UComplex& c, Window w) {
    UHomology out;
    if (c.rank() == 0) return out;
    out.window_high = c.max_grading() + 2;
    out.window_low = c.min_grading() - 2 * w.depth;
    const int n = w.depth;
    // summands with top h and order > k: rank(U^k|H_h) - rank(U^{k+1}|H_{h+2})
    auto alive = [&](int h, int k) {
        return static_cast<int>(u_power_rank(c, h, k)) - static_cast<int>(u_power_rank(c, h + 2, k + 1));
    };
    for (int h = c.max_grading(); h >= c.min_grading(); --h) {
        std::vector<int> a(static_cast<std::size_t>(n) + 2);
        for (int k = 0; k <= n + 1; ++k) a[static_cast<std::size_t>(k)] = alive(h, k);
        for (int order = 1; order <= n; ++order) {
            const int cnt = a[static_cast<std::size_t>(order) - 1] - a[static_cast<std::size_t>(order)];
            if (cnt > 0) out.torsion.push_back({h, order, cnt});
        }
        for (int i = 0; i < a[static_cast<std::size_t>(n)]; ++i) out.tower_tops.push_back(h);
    }
    if (out.tower_tops.size() == 1) {
        const int h = out.tower_tops.front();
        TowerProbe probe(c, w);
        for (const auto& z : c.cycles(h)) {
            UElement e = c.from_vector(z, h);
            if (probe.nontorsion(e, h)) {
                out.tower_generator = e;
                break;
            }
        }
    }
    return out;
}

}  // namespace corkscrew
