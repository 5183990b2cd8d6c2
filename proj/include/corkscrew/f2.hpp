#pragma once
// Bit-packed dense linear algebra over F2.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace corkscrew {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    static BitVector from_bits(std::initializer_list<int> bits) {
        BitVector v(bits.size());
        std::size_t i = 0;
        for (int b : bits) v.set(i++, b != 0);
        return v;
    }

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool value = true) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& o) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    /// Index of the lowest set bit, or size() if none.
    std::size_t first() const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
        return size_;
    }
    bool dot(const BitVector& o) const {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
        return std::popcount(acc) & 1;
    }

    bool operator==(const BitVector&) const = default;

    /// Lexicographic comparison, index 0 most significant, 0 < 1.
    bool lex_less(const BitVector& o) const {
        for (std::size_t i = 0; i < size_; ++i)
            if (get(i) != o.get(i)) return o.get(i);
        return false;
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

    static F2Matrix identity(std::size_t n) {
        F2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i);
        return m;
    }

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }
    void flip(std::size_t r, std::size_t c) { rows_[r].flip(c); }

    const BitVector& row(std::size_t r) const { return rows_[r]; }
    BitVector& row(std::size_t r) { return rows_[r]; }

    void append_row(BitVector r) {
        if (r.size() != cols_) throw std::invalid_argument("F2Matrix: row width mismatch");
        rows_.push_back(std::move(r));
    }

    BitVector operator*(const BitVector& x) const {
        if (x.size() != cols_) throw std::invalid_argument("F2Matrix: vector size mismatch");
        BitVector out(rows());
        for (std::size_t r = 0; r < rows(); ++r)
            if (rows_[r].dot(x)) out.set(r);
        return out;
    }

    F2Matrix operator*(const F2Matrix& o) const {
        if (cols_ != o.rows()) throw std::invalid_argument("F2Matrix: product shape mismatch");
        F2Matrix out(rows(), o.cols());
        for (std::size_t r = 0; r < rows(); ++r)
            for (std::size_t k = 0; k < cols_; ++k)
                if (get(r, k)) out.rows_[r] ^= o.rows_[k];
        return out;
    }

    F2Matrix transposed() const {
        F2Matrix t(cols_, rows());
        for (std::size_t r = 0; r < rows(); ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (get(r, c)) t.set(c, r);
        return t;
    }

    bool operator==(const F2Matrix&) const = default;

private:
    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

/// Reduced row echelon form with leftmost pivots.
struct Echelon {
    F2Matrix reduced;
    std::vector<std::size_t> pivot_cols;  // pivot column of reduced row i
    std::size_t rank() const { return pivot_cols.size(); }
};

inline Echelon row_reduce(F2Matrix m) {
    Echelon e;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
        std::size_t p = lead;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        std::swap(m.row(p), m.row(lead));
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != lead && m.get(r, c)) m.row(r) ^= m.row(lead);
        e.pivot_cols.push_back(c);
        ++lead;
    }
    F2Matrix out(0, m.cols());
    for (std::size_t r = 0; r < lead; ++r) out.append_row(m.row(r));
    e.reduced = std::move(out);
    return e;
}

inline std::size_t rank(const F2Matrix& m) { return row_reduce(m).rank(); }

/// Basis of the null space {x : A x = 0}: one vector per free column.
inline std::vector<BitVector> kernel_basis(const Echelon& e, std::size_t cols) {
    std::vector<char> is_pivot(cols, 0);
    for (auto c : e.pivot_cols) is_pivot[c] = 1;
    std::vector<BitVector> out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        BitVector v(cols);
        v.set(f);
        for (std::size_t r = 0; r < e.rank(); ++r)
            if (e.reduced.get(r, f)) v.set(e.pivot_cols[r]);
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<BitVector> kernel_basis(const F2Matrix& a) {
    return kernel_basis(row_reduce(a), a.cols());
}

struct Solution {
    BitVector particular;
    std::vector<BitVector> kernel;
};

/// Solve A x = b exactly. Free variables are set to zero in the particular
/// solution. Returns nullopt when b is not in the column span.
inline std::optional<Solution> solve_f2(const F2Matrix& a, const BitVector& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve_f2: dimension mismatch");
    F2Matrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a.get(r, c)) aug.set(r, c);
        if (b.get(r)) aug.set(r, a.cols());
    }
    Echelon e = row_reduce(std::move(aug));
    if (!e.pivot_cols.empty() && e.pivot_cols.back() == a.cols()) return std::nullopt;
    Solution s{BitVector(a.cols()), {}};
    for (std::size_t r = 0; r < e.rank(); ++r)
        if (e.reduced.get(r, a.cols())) s.particular.set(e.pivot_cols[r]);
    // Kernel of A from the same reduction (the augmented column is never a pivot here).
    Echelon ea{F2Matrix(0, a.cols()), e.pivot_cols};
    for (std::size_t r = 0; r < e.rank(); ++r) {
        BitVector row(a.cols());
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (e.reduced.get(r, c)) row.set(c);
        ea.reduced.append_row(std::move(row));
    }
    s.kernel = kernel_basis(ea, a.cols());
    return s;
}

/// Reduced echelon basis of span(vectors): each vector has a distinct leading
/// (lowest-index) one and every other vector vanishes there. Enumerating
/// coefficient words with the first vector as most significant bit walks the
/// span in lexicographic order (index 0 most significant, 0 < 1).
inline std::vector<BitVector> lex_basis(const std::vector<BitVector>& vectors, std::size_t dim) {
    F2Matrix m(0, dim);
    for (const auto& v : vectors) m.append_row(v);
    Echelon e = row_reduce(std::move(m));
    std::vector<BitVector> out;
    for (std::size_t r = 0; r < e.rank(); ++r) out.push_back(e.reduced.row(r));
    return out;
}

/// Incremental span membership over F2, used for quotient computations.
class SpanBasis {
public:
    explicit SpanBasis(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }

    /// Reduce v against the current basis; returns the residue.
    BitVector reduce(BitVector v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (v.get(pivots_[i])) v ^= rows_[i];
        return v;
    }
    bool contains(const BitVector& v) const { return !reduce(v).any(); }

    /// Insert v; returns false if v was already in the span.
    bool insert(const BitVector& v) {
        BitVector r = reduce(v);
        if (!r.any()) return false;
        const std::size_t p = r.first();
        for (auto& row : rows_)
            if (row.get(p)) row ^= r;
        rows_.push_back(std::move(r));
        pivots_.push_back(p);
        return true;
    }

private:
    std::size_t dim_;
    std::vector<BitVector> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace corkscrew
