#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsrepair/fp.hpp"

namespace rsrepair {

/// Univariate polynomial over F_p. Coefficients are stored constant term
/// first with no trailing zeros; the zero polynomial has an empty vector.
struct PrimeFieldPoly {
    Residue p = 2;
    std::vector<Residue> coeffs;

    PrimeFieldPoly() = default;
    PrimeFieldPoly(Residue modulus, std::vector<Residue> c) : p(modulus), coeffs(std::move(c)) {
        for (auto& x : coeffs) x %= p;
        trim();
    }

    void trim() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }

    Residue coeff(std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0; }

    bool operator==(const PrimeFieldPoly& o) const { return p == o.p && coeffs == o.coeffs; }
};

inline PrimeFieldPoly poly_x(Residue p) { return PrimeFieldPoly(p, {0, 1}); }

inline PrimeFieldPoly poly_add(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    PrimeFieldPoly r;
    r.p = a.p;
    r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0);
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = fp_add(a.coeff(i), b.coeff(i), a.p);
    r.trim();
    return r;
}

inline PrimeFieldPoly poly_sub(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    PrimeFieldPoly r;
    r.p = a.p;
    r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0);
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] = fp_sub(a.coeff(i), b.coeff(i), a.p);
    r.trim();
    return r;
}

inline PrimeFieldPoly poly_mul(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    PrimeFieldPoly r;
    r.p = a.p;
    if (a.is_zero() || b.is_zero()) return r;
    std::vector<std::uint64_t> acc(a.coeffs.size() + b.coeffs.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (!a.coeffs[i]) continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j)
            acc[i + j] += std::uint64_t(a.coeffs[i]) * b.coeffs[j];
    }
    r.coeffs.resize(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) r.coeffs[i] = static_cast<Residue>(acc[i] % a.p);
    r.trim();
    return r;
}

/// Remainder of a modulo monic f.
inline PrimeFieldPoly poly_rem(PrimeFieldPoly a, const PrimeFieldPoly& f) {
    if (!f.is_monic()) throw std::invalid_argument("poly_rem: divisor must be monic");
    const int df = f.degree();
    while (a.degree() >= df) {
        Residue lead = a.coeffs.back();
        std::size_t shift = a.coeffs.size() - 1 - df;
        for (int i = 0; i <= df; ++i)
            a.coeffs[shift + i] = fp_sub(a.coeffs[shift + i], fp_mul(lead, f.coeffs[i], a.p), a.p);
        a.trim();
    }
    return a;
}

inline PrimeFieldPoly poly_mulmod(const PrimeFieldPoly& a, const PrimeFieldPoly& b,
                                  const PrimeFieldPoly& f) {
    return poly_rem(poly_mul(a, b), f);
}

inline PrimeFieldPoly poly_powmod(PrimeFieldPoly base, std::uint64_t e, const PrimeFieldPoly& f) {
    PrimeFieldPoly r(f.p, {1});
    base = poly_rem(std::move(base), f);
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, f);
        base = poly_mulmod(base, base, f);
        e >>= 1;
    }
    return r;
}

inline PrimeFieldPoly poly_gcd(PrimeFieldPoly a, PrimeFieldPoly b) {
    while (!b.is_zero()) {
        // make b monic so poly_rem applies
        Residue inv_lead = fp_inv(b.coeffs.back(), b.p);
        for (auto& c : b.coeffs) c = fp_mul(c, inv_lead, b.p);
        PrimeFieldPoly r = poly_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

/// The count smallest primes q with q = 1 (mod modulus), strictly increasing.
/// Trial-division sieve over growing segments; desk-scale only.
inline std::vector<std::uint64_t> select_primes(std::size_t count, std::uint64_t modulus) {
    if (modulus < 1) throw std::invalid_argument("select_primes: modulus must be positive");
    std::vector<std::uint64_t> out;
    if (count == 0) return out;
    std::vector<std::uint64_t> primes;  // all primes below the current limit
    std::uint64_t limit = 2;
    std::uint64_t next = 2;
    while (out.size() < count) {
        if (next > limit) limit *= 2;
        for (; next <= limit && out.size() < count; ++next) {
            bool prime = true;
            for (std::uint64_t q : primes) {
                if (q * q > next) break;
                if (next % q == 0) { prime = false; break; }
            }
            if (!prime) continue;
            primes.push_back(next);
            if (next % modulus == 1 % modulus) out.push_back(next);
        }
    }
    return out;
}

/// Rabin irreducibility test over F_p. Requires monic input of degree >= 1.
inline bool is_irreducible(const PrimeFieldPoly& f) {
    if (!f.is_monic() || f.degree() < 1)
        throw std::invalid_argument("is_irreducible: input must be monic of degree >= 1");
    const int d = f.degree();
    const PrimeFieldPoly x = poly_rem(poly_x(f.p), f);
    // Frobenius ladder: frob[j] = x^(p^j) mod f
    std::vector<PrimeFieldPoly> frob(d + 1);
    frob[0] = x;
    for (int j = 1; j <= d; ++j) frob[j] = poly_powmod(frob[j - 1], f.p, f);
    if (!(frob[d] == x)) return false;
    for (int q = 2; q <= d; ++q) {
        if (d % q != 0) continue;
        bool q_prime = true;
        for (int m = 2; m * m <= q; ++m)
            if (q % m == 0) { q_prime = false; break; }
        if (!q_prime) continue;
        PrimeFieldPoly g = poly_gcd(f, poly_sub(frob[d / q], x));
        if (g.degree() != 0) return false;
    }
    return true;
}

/// The monic irreducible of the given degree whose non-leading coefficients,
/// read as a base-p integer with the constant term least significant, are
/// minimal. Deterministic across runs and platforms.
inline PrimeFieldPoly find_irreducible(Residue p, std::uint32_t degree) {
    if (degree < 1) throw std::invalid_argument("find_irreducible: degree must be >= 1");
    for (std::uint64_t enc = 0;; ++enc) {
        PrimeFieldPoly cand;
        cand.p = p;
        cand.coeffs.assign(degree + 1, 0);
        std::uint64_t e = enc;
        for (std::uint32_t i = 0; i < degree; ++i) {
            cand.coeffs[i] = static_cast<Residue>(e % p);
            e /= p;
        }
        if (e != 0) throw std::logic_error("find_irreducible: search space exhausted");
        cand.coeffs[degree] = 1;
        if (is_irreducible(cand)) return cand;
    }
}

/// Power sums S_0..S_upto of the roots of a monic irreducible f, computed in
/// F_p through Newton's identities. S_e equals the trace of theta^e for any
/// root theta of f, taken down to F_p.
inline std::vector<Residue> power_sums(const PrimeFieldPoly& f, std::size_t upto) {
    if (!is_irreducible(f)) throw std::invalid_argument("power_sums: input must be irreducible");
    const Residue p = f.p;
    const int d = f.degree();
    // elementary symmetric functions: e_m = (-1)^m * a_{d-m}
    std::vector<Residue> e(d + 1, 0);
    e[0] = 1 % p;
    for (int m = 1; m <= d; ++m) {
        Residue a = f.coeff(d - m);
        e[m] = (m % 2 == 1) ? fp_neg(a, p) : a;
    }
    std::vector<Residue> s(upto + 1, 0);
    s[0] = static_cast<Residue>(d % p);
    for (std::size_t k = 1; k <= upto; ++k) {
        // S_k = sum_{i=1}^{bound} (-1)^{i-1} e_i S_{k-i} [+ (-1)^{k-1} k e_k if k <= d]
        std::size_t bound = k <= static_cast<std::size_t>(d) ? k - 1 : static_cast<std::size_t>(d);
        std::uint64_t acc = 0;
        for (std::size_t i = 1; i <= bound; ++i) {
            Residue term = fp_mul(e[i], s[k - i], p);
            acc += (i % 2 == 1) ? term : fp_neg(term, p);
        }
        if (k <= static_cast<std::size_t>(d)) {
            Residue term = fp_mul(static_cast<Residue>(k % p), e[k], p);
            acc += (k % 2 == 1) ? term : fp_neg(term, p);
        }
        s[k] = static_cast<Residue>(acc % p);
    }
    return s;
}

}  // namespace rsrepair
