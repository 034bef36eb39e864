#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rsrepair/tower.hpp"

namespace rsrepair {

/// Polynomial over K, coefficients low degree first, no trailing zeros.
using KPoly = std::vector<FieldElement>;

inline void kpoly_trim(KPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

inline int kpoly_deg(const KPoly& f) { return static_cast<int>(f.size()) - 1; }

inline KPoly kpoly_mul(const KPoly& a, const KPoly& b, const TowerSpec& spec) {
    if (a.empty() || b.empty()) return {};
    KPoly out(a.size() + b.size() - 1, fe_zero());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = add(out[i + j], mul(a[i], b[j], spec), spec);
    kpoly_trim(out);
    return out;
}

inline KPoly kpoly_add(const KPoly& a, const KPoly& b, const TowerSpec& spec) {
    KPoly out(std::max(a.size(), b.size()), fe_zero());
    for (std::size_t i = 0; i < out.size(); ++i) {
        FieldElement x = i < a.size() ? a[i] : fe_zero();
        FieldElement y = i < b.size() ? b[i] : fe_zero();
        out[i] = add(x, y, spec);
    }
    kpoly_trim(out);
    return out;
}

inline KPoly kpoly_scale(const KPoly& a, const FieldElement& c, const TowerSpec& spec) {
    KPoly out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(mul(x, c, spec));
    kpoly_trim(out);
    return out;
}

inline FieldElement kpoly_eval(const KPoly& f, const FieldElement& x, const TowerSpec& spec) {
    FieldElement acc = fe_zero();
    for (std::size_t i = f.size(); i-- > 0;) acc = add(mul(acc, x, spec), f[i], spec);
    return acc;
}

/// Reed-Solomon code over K with evaluation points omega and the dual-GRS
/// multipliers v_i = prod_{j != i} (omega_i - omega_j)^{-1}.
struct CodeSpec {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::vector<FieldElement> omega;
    std::vector<FieldElement> v;
};

/// Exact dual multipliers; rejects repeated evaluation points.
inline std::vector<FieldElement> dual_multipliers(const std::vector<FieldElement>& omega,
                                                  const TowerSpec& spec) {
    for (std::size_t i = 0; i < omega.size(); ++i)
        for (std::size_t j = i + 1; j < omega.size(); ++j)
            if (omega[i] == omega[j])
                throw std::invalid_argument("dual_multipliers: repeated evaluation points");
    std::vector<FieldElement> v;
    v.reserve(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        FieldElement acc = fe_one(spec);
        for (std::size_t j = 0; j < omega.size(); ++j) {
            if (j == i) continue;
            acc = mul(acc, inv(sub(omega[i], omega[j], spec), spec), spec);
        }
        v.push_back(std::move(acc));
    }
    return v;
}

inline CodeSpec make_code_from_points(std::uint32_t k, std::vector<FieldElement> omega,
                                      const TowerSpec& spec) {
    if (k < 1 || k >= omega.size())
        throw std::invalid_argument("make_code_from_points: need 1 <= k < n");
    CodeSpec code;
    code.n = static_cast<std::uint32_t>(omega.size());
    code.k = k;
    code.v = dual_multipliers(omega, spec);
    code.omega = std::move(omega);
    // v_i * prod_{j != i}(omega_i - omega_j) = 1
    for (std::size_t i = 0; i < code.omega.size(); ++i) {
        FieldElement prod = code.v[i];
        for (std::size_t j = 0; j < code.omega.size(); ++j)
            if (j != i) prod = mul(prod, sub(code.omega[i], code.omega[j], spec), spec);
        if (!(prod == fe_one(spec))) throw std::logic_error("dual multiplier invariant violated");
    }
    return code;
}

/// RS_K(n, k, {alpha_1..alpha_n}): the construction's evaluation points are
/// the tower generators themselves.
inline CodeSpec make_code(const TowerSpec& spec) {
    std::vector<FieldElement> omega;
    omega.reserve(spec.n);
    for (std::uint32_t i = 1; i <= spec.n; ++i) omega.push_back(fe_alpha(i, spec));
    return make_code_from_points(spec.k, std::move(omega), spec);
}

/// c_i = f(omega_i) where f has the message as coefficients, low degree first.
inline std::vector<FieldElement> encode(const std::vector<FieldElement>& message,
                                        const CodeSpec& code, const TowerSpec& spec) {
    if (message.size() != code.k) throw std::invalid_argument("encode: message length != k");
    std::vector<FieldElement> out;
    out.reserve(code.n);
    KPoly f(message);
    for (std::uint32_t i = 0; i < code.n; ++i) out.push_back(kpoly_eval(f, code.omega[i], spec));
    return out;
}

/// Monic annihilator prod (x - omega_j) over the listed points.
inline KPoly annihilator(const std::vector<FieldElement>& points, const TowerSpec& spec) {
    KPoly f{fe_one(spec)};
    for (const auto& pt : points) f = kpoly_mul(f, KPoly{neg(pt, spec), fe_one(spec)}, spec);
    return f;
}

/// The dual codeword (v_j omega_j^t h(omega_j))_j; requires
/// deg(x^t h(x)) < n - k.
inline std::vector<FieldElement> dual_codeword(std::uint32_t t, const KPoly& h_poly,
                                               const CodeSpec& code, const TowerSpec& spec) {
    if (h_poly.empty()) throw std::invalid_argument("dual_codeword: zero annihilator");
    if (t + static_cast<std::uint32_t>(kpoly_deg(h_poly)) > code.n - code.k - 1)
        throw std::invalid_argument("dual_codeword: degree bound violated");
    std::vector<FieldElement> out;
    out.reserve(code.n);
    for (std::uint32_t j = 0; j < code.n; ++j) {
        FieldElement x = mul(code.v[j], fe_pow(code.omega[j], t, spec), spec);
        out.push_back(mul(x, kpoly_eval(h_poly, code.omega[j], spec), spec));
    }
    return out;
}

inline FieldElement inner_product(const std::vector<FieldElement>& x,
                                  const std::vector<FieldElement>& y, const TowerSpec& spec) {
    if (x.size() != y.size()) throw std::invalid_argument("inner_product: length mismatch");
    FieldElement acc = fe_zero();
    for (std::size_t i = 0; i < x.size(); ++i) acc = add(acc, mul(x[i], y[i], spec), spec);
    return acc;
}

/// Lagrange interpolation from any k positions (1-based node indices).
inline std::vector<FieldElement> decode_from_k(const std::vector<std::uint32_t>& positions,
                                               const std::vector<FieldElement>& values,
                                               const CodeSpec& code, const TowerSpec& spec) {
    if (positions.size() != code.k || values.size() != code.k)
        throw std::invalid_argument("decode_from_k: need exactly k positions and values");
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] < 1 || positions[i] > code.n)
            throw std::out_of_range("decode_from_k: position outside [1,n]");
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            if (positions[i] == positions[j])
                throw std::invalid_argument("decode_from_k: repeated positions");
    }
    KPoly f;
    for (std::size_t m = 0; m < positions.size(); ++m) {
        const FieldElement& wm = code.omega[positions[m] - 1];
        KPoly basis{fe_one(spec)};
        FieldElement denom = fe_one(spec);
        for (std::size_t mm = 0; mm < positions.size(); ++mm) {
            if (mm == m) continue;
            const FieldElement& wmm = code.omega[positions[mm] - 1];
            basis = kpoly_mul(basis, KPoly{neg(wmm, spec), fe_one(spec)}, spec);
            denom = mul(denom, sub(wm, wmm, spec), spec);
        }
        basis = kpoly_scale(basis, mul(values[m], inv(denom, spec), spec), spec);
        f = kpoly_add(f, basis, spec);
    }
    std::vector<FieldElement> message(code.k, fe_zero());
    for (std::size_t i = 0; i < f.size(); ++i) message[i] = f[i];
    return message;
}

}  // namespace rsrepair
