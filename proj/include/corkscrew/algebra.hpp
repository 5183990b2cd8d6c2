#pragma once
// Exact arithmetic in F2[U,V]: monomials, polynomials, bigradings and the
// graded slices of a free module.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace corkscrew {

enum class Variable { U, V };

struct Monomial {
    int u = 0;
    int v = 0;

    constexpr Monomial() = default;
    constexpr Monomial(int u_exp, int v_exp) : u(u_exp), v(v_exp) {}

    constexpr auto operator<=>(const Monomial&) const = default;

    constexpr Monomial operator*(const Monomial& o) const { return {u + o.u, v + o.v}; }
    constexpr Monomial swapped() const { return {v, u}; }
    constexpr bool divides(const Monomial& o) const { return u <= o.u && v <= o.v; }
    constexpr bool is_one() const { return u == 0 && v == 0; }
};

inline std::string to_string(const Monomial& m) {
    if (m.is_one()) return "1";
    std::string s;
    if (m.u > 0) s += m.u == 1 ? "U" : "U^" + std::to_string(m.u);
    if (m.v > 0) s += m.v == 1 ? "V" : "V^" + std::to_string(m.v);
    return s;
}

/// Bigrading (gr_U, gr_V). Maslov and Alexander gradings are derived.
struct Bigrading {
    int gu = 0;
    int gv = 0;

    constexpr auto operator<=>(const Bigrading&) const = default;

    constexpr Bigrading operator+(const Bigrading& o) const { return {gu + o.gu, gv + o.gv}; }
    constexpr Bigrading operator-(const Bigrading& o) const { return {gu - o.gu, gv - o.gv}; }
    constexpr Bigrading operator-() const { return {-gu, -gv}; }
    constexpr Bigrading swapped() const { return {gv, gu}; }

    constexpr int maslov() const { return gu; }
    /// Only meaningful when gu and gv have equal parity.
    constexpr int alexander() const { return (gu - gv) / 2; }
    constexpr bool integral_alexander() const { return ((gu - gv) % 2) == 0; }
};

inline std::string to_string(const Bigrading& g) {
    return "(" + std::to_string(g.gu) + "," + std::to_string(g.gv) + ")";
}

/// Bidegree contributed by multiplying with a monomial.
constexpr Bigrading degree(const Monomial& m) { return {-2 * m.u, -2 * m.v}; }

/// Polynomial over F2: a set of monomials kept sorted and duplicate-free.
class Poly {
public:
    Poly() = default;
    Poly(Monomial m) : terms_{m} {}
    Poly(std::initializer_list<Monomial> ms) {
        for (const auto& m : ms) add(m);
    }

    static Poly one() { return Poly(Monomial{0, 0}); }

    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool contains(const Monomial& m) const {
        return std::binary_search(terms_.begin(), terms_.end(), m);
    }

    /// Add a single monomial (symmetric difference).
    void add(const Monomial& m) {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m);
        if (it != terms_.end() && *it == m)
            terms_.erase(it);
        else
            terms_.insert(it, m);
    }

    Poly& operator+=(const Poly& o) {
        std::vector<Monomial> out;
        out.reserve(terms_.size() + o.terms_.size());
        std::set_symmetric_difference(terms_.begin(), terms_.end(), o.terms_.begin(),
                                      o.terms_.end(), std::back_inserter(out));
        terms_ = std::move(out);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out;
        for (const auto& x : a.terms_)
            for (const auto& y : b.terms_) out.add(x * y);
        return out;
    }
    friend Poly operator*(const Poly& a, const Monomial& m) {
        Poly out;
        out.terms_.reserve(a.terms_.size());
        for (const auto& x : a.terms_) out.terms_.push_back(x * m);
        return out;  // multiplication by a monomial preserves order
    }

    Poly swapped() const {
        Poly out;
        for (const auto& m : terms_) out.add(m.swapped());
        return out;
    }

    bool operator==(const Poly&) const = default;
    auto operator<=>(const Poly& o) const { return terms_ <=> o.terms_; }

private:
    std::vector<Monomial> terms_;
};

inline std::string to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < p.terms().size(); ++i) {
        if (i) s += "+";
        s += to_string(p.terms()[i]);
    }
    return s;
}

/// Formal derivative over F2: d/dU(U^a V^b) = a U^{a-1} V^b with a taken mod 2.
inline Poly formal_derivative(const Poly& p, Variable var) {
    Poly out;
    for (const auto& m : p.terms()) {
        int e = var == Variable::U ? m.u : m.v;
        if (e % 2 == 1)
            out.add(var == Variable::U ? Monomial{m.u - 1, m.v} : Monomial{m.u, m.v - 1});
    }
    return out;
}

struct SliceEntry {
    Monomial mono;
    int gen = 0;
    auto operator<=>(const SliceEntry&) const = default;
};

/// Basis of the F2-vector space of a free F2[U,V]-module in a single bigrading.
struct GradedSlice {
    Bigrading grading;
    std::vector<SliceEntry> basis;
};

/// All pairs (U^a V^b, g) with gr(g) + (-2a, -2b) == target, ordered by
/// generator index and then exponent.
inline GradedSlice slice_basis(const std::vector<Bigrading>& generators, Bigrading target) {
    GradedSlice out{target, {}};
    for (int g = 0; g < static_cast<int>(generators.size()); ++g) {
        const Bigrading d = generators[g] - target;
        if (d.gu < 0 || d.gv < 0 || d.gu % 2 != 0 || d.gv % 2 != 0) continue;
        out.basis.push_back({Monomial{d.gu / 2, d.gv / 2}, g});
    }
    return out;
}

}  // namespace corkscrew
