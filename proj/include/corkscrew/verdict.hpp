#pragma once
// Strong-cork rules. Each StrongCork carries a certificate that replay()
// re-checks from scratch; anything short of that is Inconclusive.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corkscrew/cfk.hpp"
#include "corkscrew/connected.hpp"
#include "corkscrew/delta.hpp"
#include "corkscrew/morphisms.hpp"

namespace corkscrew {

// ---------------------------------------------------------------------------
// Arithmetic rules

inline int mod(int a, int n) { return ((a % n) + n) % n; }

inline bool cor13_arithmetic(int arf, int tau) {
    const int r = mod(2 * arf + std::abs(tau), 4);
    return r == 1 || r == 2;
}

inline bool cor51_rule(int s, int n) { return mod(n, 2) == 1 && (mod(s, 4) == 2 || mod(s, 4) == 3); }

struct ClassicalInvariants {
    int arf = 0;
    int tau = 0;
    long determinant = 1;
};

/// Invariants of s copies of T(2,2n+1).
inline ClassicalInvariants torus_sum_invariants(int s, int n) {
    ClassicalInvariants out;
    const int single_arf = (mod(n, 4) == 1 || mod(n, 4) == 2) ? 1 : 0;
    out.arf = mod(s * single_arf, 2);
    out.tau = s * n;
    out.determinant = 1;
    for (int k = 0; k < s; ++k) out.determinant *= 2 * n + 1;
    return out;
}

/// Arf = 0 iff D = +-1 mod 8.
inline int arf_from_determinant(long d) {
    const long r = ((d % 8) + 8) % 8;
    return (r == 1 || r == 7) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Inputs

struct KnotDescriptor {
    std::string name;
    int tau = 0;
    int arf = 0;
    long determinant = 1;
    bool thin = false;
    std::string complex_source;           // "thin-model", "bundled:NAME", or a path
    std::optional<PhiIotaComplex> complex;  // filled for non-thin or explicit inputs
};

/// Parity of the number of boxes of a thin complex: (D - 2|tau| - 1)/4 mod 2.
inline bool thin_box_parity(long determinant, int tau) {
    const long q = determinant - 2L * std::abs(tau) - 1;
    if (q < 0 || q % 4 != 0)
        throw std::invalid_argument("(D - 2|tau| - 1)/4 is not a non-negative integer for D = " +
                                    std::to_string(determinant) + ", tau = " + std::to_string(tau));
    return (q / 4) % 2 == 1;
}

inline PhiIotaComplex descriptor_complex(const KnotDescriptor& k) {
    if (k.complex) return *k.complex;
    if (!k.thin) throw std::invalid_argument(k.name + ": non-thin knot needs an explicit complex");
    PhiIotaComplex x = thin_model(k.tau, thin_box_parity(k.determinant, k.tau));
    x.complex.name = k.name;
    return x;
}

struct VerdictOptions {
    std::uint64_t seed = kDefaultSeed;
    int bump = 0;
};

// ---------------------------------------------------------------------------
// Verdicts

enum class Conclusion { StrongCork, Inconclusive };

inline const char* to_string(Conclusion c) { return c == Conclusion::StrongCork ? "StrongCork" : "Inconclusive"; }

struct Certificate {
    std::string kind;  // "s-nontrivial", "delta", "no-local-map", or empty
    std::vector<PhiIotaComplex> inputs;
    std::optional<LinearMap> tau_square;  // periodic: tau^2 ~ s holds
    int delta = 0;
    std::optional<DeltaResult> delta_result;
    std::size_t unknowns = 0;
    VerdictOptions options;
};

struct Verdict {
    std::string knot;
    std::string diffeo;
    int m = 0;
    Conclusion conclusion = Conclusion::Inconclusive;
    std::string rule;
    std::string certificate_ref;
    std::string reason;
    Certificate certificate;

    bool strong() const { return conclusion == Conclusion::StrongCork; }
};

namespace detail {

inline void require_nonzero(int m) {
    if (m == 0) throw std::invalid_argument("surgery coefficient 1/m needs m != 0");
}

inline std::string s_ref(const PhiIotaComplex& k, const SNontrivialResult& r, const VerdictOptions& o) {
    const auto& form = r.connected.form;
    return "s-nontrivial:" + k.complex.name + ":conn=" + (form ? describe(*form) : std::string("?")) +
           ":unknowns=" + std::to_string(r.unknowns) + ":seed=" + std::to_string(o.seed);
}

inline std::string delta_ref(const PhiIotaComplex& x, const DeltaResult& r) {
    return "delta:" + x.complex.name + ":delta=" + std::to_string(r.delta) + ":grading=" + std::to_string(r.grading) +
           ":" + format_witness(r, x.complex);
}

inline std::string no_local_ref(const PhiIotaComplex& src, const PhiIotaComplex& dst, const LocalityCertificate& c,
                                int tensor_delta) {
    return "no-local-map:" + src.complex.name + "->" + dst.complex.name + ":unknowns=" + std::to_string(c.unknowns) +
           ":solutions=" + std::to_string(c.solution_dimension) + ":delta(tensor)=" + std::to_string(tensor_delta);
}

/// s-nontriviality gate shared by the Gompf and periodic rules. Returns the
/// reason for Inconclusive, or empty when the certificate is in place.
inline std::string s_gate(const PhiIotaComplex& k, Verdict& v, const VerdictOptions& o) {
    const SNontrivialResult r = s_nontrivial(k, o.seed, o.bump);
    if (!r.connected.verified) return "connected complex unverified (" + r.caveat + ")";
    if (!r.nontrivial) return "s is homotopic to the identity on the connected complex";
    v.certificate.kind = "s-nontrivial";
    v.certificate.inputs = {k};
    v.certificate.unknowns = r.unknowns;
    v.certificate.options = o;
    v.certificate_ref = s_ref(k, r, o);
    return {};
}

}  // namespace detail

/// K # -K with the swallow-follow twist t_lambda^i t_mu^j.
inline Verdict verdict_gompf(const KnotDescriptor& k, int m, int i, int j, const VerdictOptions& o = {}) {
    detail::require_nonzero(m);
    Verdict v;
    v.knot = k.name + "#-" + k.name;
    v.diffeo = "torus_twist(i=" + std::to_string(i) + ",j=" + std::to_string(j) + ")";
    v.m = m;
    v.rule = "Theorem 1.2";
    if (mod(m, 2) == 0) {
        v.reason = "m even";
        return v;
    }
    if (mod(i, 2) == 0) {
        v.reason = "i even: s^i is homotopic to the identity";
        return v;
    }
    const PhiIotaComplex kc = descriptor_complex(k);
    v.reason = detail::s_gate(kc, v, o);
    if (!v.reason.empty()) {
        v.certificate = {};
        v.certificate_ref.clear();
        return v;
    }
    // the proof reduces to: no local map (K, id) -> (K, s)
    const PhiIotaComplex plain = with_sarkar_power(kc, 0);
    const PhiIotaComplex twisted = with_sarkar_power(kc, 1);
    if (local_map_exists(plain, twisted, false, o.bump))
        throw ConsistencyError("consistency violation: " + k.name +
                               " is s-nontrivial but (K, id) maps locally to (K, s)");
    v.conclusion = Conclusion::StrongCork;
    return v;
}

/// delta > 0 rule; negative m uses the dual triple.
inline Verdict verdict_delta(const PhiIotaComplex& x, int m, const VerdictOptions& o = {}) {
    detail::require_nonzero(m);
    Verdict v;
    v.knot = x.complex.name;
    v.diffeo = "explicit(phi)";
    v.m = m;
    v.rule = m > 0 ? "Theorem delta>0" : "Theorem delta>0 (mirrored)";
    if (mod(m, 2) == 0) {
        v.reason = "m even";
        return v;
    }
    const PhiIotaComplex y = m > 0 ? x : dual(x);
    const DeltaResult r = delta(y, o.bump);
    v.certificate.delta = r.delta;
    if (r.delta <= 0) {
        v.reason = "delta = " + std::to_string(r.delta);
        return v;
    }
    v.conclusion = Conclusion::StrongCork;
    v.certificate.kind = "delta";
    v.certificate.inputs = {y};
    v.certificate.delta_result = r;
    v.certificate.options = o;
    v.certificate_ref = detail::delta_ref(y, r);
    return v;
}

/// K1 # K2 with phi1 # phi2, cross-checked by delta of X1 (x) X2.
inline Verdict verdict_split(const PhiIotaComplex& x1, const PhiIotaComplex& x2, int m, const VerdictOptions& o = {}) {
    detail::require_nonzero(m);
    Verdict v;
    v.knot = x1.complex.name + "#" + x2.complex.name;
    v.diffeo = "split(phi1, phi2)";
    v.m = m;
    v.rule = "Theorem 4.1";
    const PhiIotaComplex src = dual(x2);
    const LocalityCertificate local = local_map_exists(src, x1, false, o.bump);
    const PhiIotaComplex t = tensor(x1, x2);
    const DeltaResult r = delta(t, o.bump);
    if (local.exists == (r.delta > 0))
        throw ConsistencyError("route disagreement for " + v.knot + ": local map dual(X2) -> X1 " +
                               (local.exists ? "exists" : "does not exist") +
                               " but delta(X1 (x) X2) = " + std::to_string(r.delta));
    v.certificate.delta = r.delta;
    if (mod(m, 2) == 0) {
        v.reason = "m even";
        return v;
    }
    if (m < 0) {
        v.reason = "rule stated for positive m";
        return v;
    }
    if (local.exists) {
        v.reason = "a local map dual(X2) -> X1 exists";
        return v;
    }
    v.conclusion = Conclusion::StrongCork;
    v.certificate.kind = "no-local-map";
    v.certificate.inputs = {x1, x2};
    v.certificate.unknowns = local.unknowns;
    v.certificate.delta_result = r;
    v.certificate.options = o;
    v.certificate_ref = detail::no_local_ref(src, x1, local, r.delta);
    return v;
}

/// phi = tau with tau^2 ~ s, diffeomorphism tau^i.
inline Verdict verdict_periodic(const PhiIotaComplex& k, int m, int i, const VerdictOptions& o = {}) {
    detail::require_nonzero(m);
    const KnotComplex& c = k.complex;
    const HomotopyResult sq = homotopic(c, compose(k.phi, k.phi), sarkar_map(c));
    if (!sq) throw AlgebraError("periodic action on " + c.name + " does not satisfy tau^2 ~ s");
    Verdict v;
    v.knot = c.name + "#-" + c.name;
    v.diffeo = "periodic_tau(i=" + std::to_string(i) + ")";
    v.m = m;
    v.rule = "Corollary 5.3";
    if (mod(m, 2) == 0) {
        v.reason = "m even";
        return v;
    }
    if (mod(i, 4) == 0) {
        v.reason = "i = 0 mod 4: tau^i is homotopic to the identity";
        return v;
    }
    v.reason = detail::s_gate(k, v, o);
    if (!v.reason.empty()) {
        v.certificate = {};
        v.certificate_ref.clear();
        return v;
    }
    v.certificate.tau_square = sq.homotopy;
    v.conclusion = Conclusion::StrongCork;
    return v;
}

// ---------------------------------------------------------------------------
// Replay

/// Recomputes a StrongCork certificate from its stored inputs and checks it
/// against the recorded reference. Inconclusive verdicts replay trivially.
inline bool replay(const Verdict& v);

namespace detail {

inline bool replay_certificate(const Verdict& v) {
    const Certificate& cert = v.certificate;
    const VerdictOptions& o = cert.options;
    if (cert.kind == "s-nontrivial") {
        if (cert.inputs.size() != 1) return false;
        const PhiIotaComplex& k = cert.inputs[0];
        const SNontrivialResult r = s_nontrivial(k, o.seed, o.bump);
        if (!r.nontrivial || !r.connected.verified) return false;
        const PhiIotaComplex xi = iota_complex(k);
        if (!verify_local_map(r.connected.conn, xi, r.connected.inclusion, o.bump)) return false;
        if (!verify_local_map(xi, r.connected.conn, r.connected.projection, o.bump)) return false;
        if (cert.tau_square &&
            !verifies_homotopy(k.complex, k.complex, compose(k.phi, k.phi), sarkar_map(k.complex), *cert.tau_square))
            return false;
        return detail::s_ref(k, r, o) == v.certificate_ref;
    }
    if (cert.kind == "delta") {
        if (cert.inputs.size() != 1 || !cert.delta_result) return false;
        const PhiIotaComplex& x = cert.inputs[0];
        const DeltaResult& stored = *cert.delta_result;
        const A0Complex a = a0(x);
        if (!verify_delta_witness(a, stored.x, stored.y, stored.z)) return false;
        const DeltaResult r = delta(x, o.bump);
        return r.delta == stored.delta && r.delta > 0 && detail::delta_ref(x, r) == v.certificate_ref;
    }
    if (cert.kind == "no-local-map") {
        if (cert.inputs.size() != 2) return false;
        const PhiIotaComplex src = dual(cert.inputs[1]);
        const LocalityCertificate local = local_map_exists(src, cert.inputs[0], false, o.bump);
        if (local.exists) return false;
        const DeltaResult r = delta(tensor(cert.inputs[0], cert.inputs[1]), o.bump);
        return r.delta > 0 && detail::no_local_ref(src, cert.inputs[0], local, r.delta) == v.certificate_ref;
    }
    return false;
}

}  // namespace detail

inline bool replay(const Verdict& v) {
    if (!v.strong()) return true;
    try {
        return detail::replay_certificate(v);
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace corkscrew
