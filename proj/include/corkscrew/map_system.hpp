#pragma once
// Linear systems whose unknowns are module maps between free complexes.
//
// Each unknown block is a map X : src -> dst of fixed mode and bidegree. Since
// every graded slice is finite, X is determined by finitely many F2
// coordinates: for each source generator, the coefficients of the slice basis
// of dst at the required target grading. Equations are identities between
// maps, built from terms A*X, X*B, A*X*B and known constant maps, and are
// imposed generator by generator and monomial by monomial.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "complex.hpp"
#include "f2.hpp"

namespace corkscrew {

class MapSystem {
public:
    struct Coordinate {
        int block;
        int src;       // source generator
        SliceEntry entry;  // the image mono * dst-generator
    };

    /// Register an unknown map. Returns its block id.
    int add_block(const KnotComplex& src, const KnotComplex& dst, bool skew, Bigrading bidegree) {
        Block b{&src, &dst, skew, bidegree, static_cast<int>(coords_.size()), {}};
        const auto dst_gr = dst.gradings();
        for (int g = 0; g < static_cast<int>(src.rank()); ++g) {
            const auto slice = slice_basis(dst_gr, image_grading(src.generators[g].gr, skew, bidegree));
            for (const auto& e : slice.basis) coords_.push_back({static_cast<int>(blocks_.size()), g, e});
        }
        b.end = static_cast<int>(coords_.size());
        blocks_.push_back(b);
        return static_cast<int>(blocks_.size()) - 1;
    }

    std::size_t unknowns() const { return coords_.size(); }
    const std::vector<Coordinate>& coordinates() const { return coords_; }
    std::pair<int, int> block_range(int block) const { return {blocks_[block].begin, blocks_[block].end}; }

    /// One summand of an equation: pre * X_block * post. A null pre or post is the identity.
    struct Summand {
        int block;
        const LinearMap* pre = nullptr;
        const LinearMap* post = nullptr;
    };

    /// Impose sum(summands) == rhs as maps out of a complex with `n_src` generators.
    /// A null rhs means zero.
    void add_equation(std::size_t n_src, std::vector<Summand> summands, const LinearMap* rhs = nullptr) {
        const int eq = equations_++;
        for (const auto& s : summands) {
            const Block& b = blocks_.at(s.block);
            const std::size_t block_src = b.src->rank();
            if (s.post ? s.post->source_rank() != n_src : block_src != n_src)
                throw std::invalid_argument("MapSystem: equation domain mismatch");
            for (int k = b.begin; k < b.end; ++k) {
                const Coordinate& c = coords_[k];
                LinearMap unit = LinearMap::zero(block_src, b.skew, b.bidegree);
                unit.images[c.src] = Element(c.entry.gen, c.entry.mono);
                LinearMap term = s.post ? compose(unit, *s.post) : unit;
                if (s.pre) term = compose(*s.pre, term);
                for (std::size_t g = 0; g < term.images.size(); ++g)
                    for (const auto& t : term.images[g].terms())
                        toggle(column(k), row_key(eq, static_cast<int>(g), t));
            }
        }
        if (rhs) {
            if (rhs->source_rank() != n_src) throw std::invalid_argument("MapSystem: rhs domain mismatch");
            for (std::size_t g = 0; g < rhs->images.size(); ++g)
                for (const auto& t : rhs->images[g].terms())
                    toggle(rhs_, row_key(eq, static_cast<int>(g), t));
        }
    }

    /// Exact solution set, or nullopt if inconsistent.
    std::optional<Solution> solve() const {
        const std::size_t n_rows = rows_.size();
        F2Matrix a(n_rows, coords_.size());
        for (const auto& [k, rows] : columns_)
            for (int r : rows) a.flip(static_cast<std::size_t>(r), static_cast<std::size_t>(k));
        BitVector b(n_rows);
        for (int r : rhs_) b.flip(static_cast<std::size_t>(r));
        return solve_f2(a, b);
    }

    /// Decode a coordinate vector into the map of one block.
    LinearMap decode(const BitVector& x, int block) const {
        const Block& b = blocks_.at(block);
        LinearMap m = LinearMap::zero(b.src->rank(), b.skew, b.bidegree);
        for (int k = b.begin; k < b.end; ++k)
            if (x.get(static_cast<std::size_t>(k)))
                m.images[coords_[k].src].add({coords_[k].entry.gen, coords_[k].entry.mono});
        return m;
    }

    /// Encode a known map as coordinates of a block (for testing membership).
    BitVector encode(const LinearMap& m, int block) const {
        const Block& b = blocks_.at(block);
        BitVector x(coords_.size());
        for (int k = b.begin; k < b.end; ++k) {
            const auto& c = coords_[k];
            const auto& terms = m.images.at(c.src).terms();
            if (std::binary_search(terms.begin(), terms.end(), Term{c.entry.gen, c.entry.mono}))
                x.set(static_cast<std::size_t>(k));
        }
        return x;
    }

private:
    struct Block {
        const KnotComplex* src;
        const KnotComplex* dst;
        bool skew;
        Bigrading bidegree;
        int begin;
        int end;
    };
    using RowKey = std::tuple<int, int, int, int, int>;

    int row_key(int eq, int g, const Term& t) {
        RowKey key{eq, g, t.gen, t.mono.u, t.mono.v};
        auto [it, inserted] = rows_.try_emplace(key, static_cast<int>(rows_.size()));
        return it->second;
    }
    std::vector<int>& column(int k) { return columns_[k]; }
    static void toggle(std::vector<int>& v, int r) { v.push_back(r); }

    std::vector<Block> blocks_;
    std::vector<Coordinate> coords_;
    std::map<RowKey, int> rows_;
    std::map<int, std::vector<int>> columns_;
    std::vector<int> rhs_;
    int equations_ = 0;
};

}  // namespace corkscrew
