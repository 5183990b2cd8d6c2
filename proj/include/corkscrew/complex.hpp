#pragma once
// Free bigraded F2[U,V]-modules, their elements, and module maps between them.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"

namespace corkscrew {

struct Term {
    int gen = 0;
    Monomial mono;
    auto operator<=>(const Term&) const = default;
};

/// Element of a free module: a finite F2-sum of monomial multiples of generators.
class Element {
public:
    Element() = default;
    Element(int gen, Monomial m = {}) : terms_{Term{gen, m}} {}

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Term& t) {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), t);
        if (it != terms_.end() && *it == t)
            terms_.erase(it);
        else
            terms_.insert(it, t);
    }
    Element& operator+=(const Element& o) {
        std::vector<Term> out;
        out.reserve(terms_.size() + o.terms_.size());
        std::set_symmetric_difference(terms_.begin(), terms_.end(), o.terms_.begin(),
                                      o.terms_.end(), std::back_inserter(out));
        terms_ = std::move(out);
        return *this;
    }
    friend Element operator+(Element a, const Element& b) { return a += b; }

    Element times(const Monomial& m) const {
        Element out;
        out.terms_.reserve(terms_.size());
        for (const auto& t : terms_) out.terms_.push_back({t.gen, t.mono * m});
        std::sort(out.terms_.begin(), out.terms_.end());
        return out;
    }
    Element times(const Poly& p) const {
        Element out;
        for (const auto& m : p.terms()) out += times(m);
        return out;
    }

    /// Coefficient polynomial of generator g.
    Poly coefficient(int gen) const {
        Poly p;
        for (const auto& t : terms_)
            if (t.gen == gen) p.add(t.mono);
        return p;
    }

    bool operator==(const Element&) const = default;
    auto operator<=>(const Element& o) const { return terms_ <=> o.terms_; }

private:
    std::vector<Term> terms_;
};

/// Free bigraded module: ordered named generators.
struct Generator {
    std::string id;
    Bigrading gr;
    bool operator==(const Generator&) const = default;
};

/// Module map given by the images of generators. A skew map satisfies
/// f(U^a V^b x) = U^b V^a f(x) and sends grading g to swap(g) + bidegree;
/// a straight map is F2[U,V]-linear and sends g to g + bidegree.
struct LinearMap {
    std::vector<Element> images;  // indexed by source generator
    bool skew = false;
    Bigrading bidegree{};

    static LinearMap zero(std::size_t n_src, bool skew = false, Bigrading bideg = {}) {
        return {std::vector<Element>(n_src), skew, bideg};
    }
    static LinearMap identity(std::size_t n) {
        LinearMap m = zero(n);
        for (std::size_t i = 0; i < n; ++i) m.images[i] = Element(static_cast<int>(i));
        return m;
    }

    std::size_t source_rank() const { return images.size(); }

    Element apply(const Element& e) const {
        Element out;
        for (const auto& t : e.terms())
            out += images.at(t.gen).times(skew ? t.mono.swapped() : t.mono);
        return out;
    }

    bool is_zero() const {
        return std::all_of(images.begin(), images.end(),
                           [](const Element& e) { return e.is_zero(); });
    }

    LinearMap& operator+=(const LinearMap& o) {
        if (o.images.size() != images.size() || o.skew != skew)
            throw std::invalid_argument("LinearMap: sum of incompatible maps");
        for (std::size_t i = 0; i < images.size(); ++i) images[i] += o.images[i];
        return *this;
    }
    friend LinearMap operator+(LinearMap a, const LinearMap& b) { return a += b; }

    bool operator==(const LinearMap& o) const {
        return skew == o.skew && images == o.images;
    }

    /// Maximum exponent appearing in any entry.
    int max_exponent() const {
        int m = 0;
        for (const auto& e : images)
            for (const auto& t : e.terms()) m = std::max({m, t.mono.u, t.mono.v});
        return m;
    }
};

/// f after g.
inline LinearMap compose(const LinearMap& f, const LinearMap& g) {
    LinearMap out;
    out.skew = f.skew != g.skew;
    out.bidegree = (f.skew ? g.bidegree.swapped() : g.bidegree) + f.bidegree;
    out.images.reserve(g.images.size());
    for (const auto& e : g.images) out.images.push_back(f.apply(e));
    return out;
}

inline LinearMap power(const LinearMap& f, int k) {
    if (k < 0) throw std::invalid_argument("power: negative exponent");
    LinearMap out = LinearMap::identity(f.images.size());
    for (int i = 0; i < k; ++i) out = compose(f, out);
    return out;
}

/// Finitely generated free bigraded chain complex over F2[U,V].
struct KnotComplex {
    std::string name;
    std::vector<Generator> generators;
    LinearMap differential;

    std::size_t rank() const { return generators.size(); }

    std::vector<Bigrading> gradings() const {
        std::vector<Bigrading> out;
        out.reserve(generators.size());
        for (const auto& g : generators) out.push_back(g.gr);
        return out;
    }

    int index_of(const std::string& id) const {
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (generators[i].id == id) return static_cast<int>(i);
        throw std::out_of_range("no generator named '" + id + "' in " + name);
    }

    Bigrading grading(const Term& t) const { return generators.at(t.gen).gr + degree(t.mono); }

    /// Element from a list of generator names (monomial 1).
    Element element(std::initializer_list<const char*> ids) const {
        Element e;
        for (const char* id : ids) e.add({index_of(id), {}});
        return e;
    }
};

inline std::string to_string(const Element& e, const KnotComplex& c) {
    if (e.is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < e.terms().size(); ++i) {
        const auto& t = e.terms()[i];
        if (i) s += " + ";
        if (!t.mono.is_one()) s += to_string(t.mono) + "*";
        s += c.generators.at(t.gen).id;
    }
    return s;
}

/// Target bigrading of generator `src` under a map with the given mode and bidegree.
inline Bigrading image_grading(Bigrading src, bool skew, Bigrading bidegree) {
    return (skew ? src.swapped() : src) + bidegree;
}

/// First violation of the grading contract of `f` : src -> dst, or empty.
inline std::string grading_violation(const LinearMap& f, const KnotComplex& src,
                                     const KnotComplex& dst) {
    if (f.images.size() != src.rank()) return "map has wrong number of columns";
    for (std::size_t i = 0; i < f.images.size(); ++i) {
        const Bigrading want = image_grading(src.generators[i].gr, f.skew, f.bidegree);
        for (const auto& t : f.images[i].terms()) {
            if (t.gen < 0 || t.gen >= static_cast<int>(dst.rank()))
                return "image of " + src.generators[i].id + " names a missing generator";
            if (dst.grading(t) != want)
                return src.generators[i].id + "->" + dst.generators[t.gen].id;
        }
    }
    return {};
}

}  // namespace corkscrew
