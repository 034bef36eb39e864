#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rsrepair {

/// Residue arithmetic modulo a small prime p. All inputs are expected to be
/// already reduced to [0, p); intermediate products go through 64 bits.
using Residue = std::uint32_t;

inline Residue fp_add(Residue a, Residue b, Residue p) {
    Residue s = a + b;
    return s >= p ? s - p : s;
}

inline Residue fp_sub(Residue a, Residue b, Residue p) { return a >= b ? a - b : a + p - b; }

inline Residue fp_neg(Residue a, Residue p) { return a == 0 ? 0 : p - a; }

inline Residue fp_mul(Residue a, Residue b, Residue p) {
    return static_cast<Residue>(std::uint64_t(a) * b % p);
}

inline Residue fp_pow(Residue a, std::uint64_t e, Residue p) {
    Residue r = 1 % p;
    Residue base = a % p;
    while (e) {
        if (e & 1) r = fp_mul(r, base, p);
        base = fp_mul(base, base, p);
        e >>= 1;
    }
    return r;
}

inline Residue fp_inv(Residue a, Residue p) {
    if (a % p == 0) throw std::domain_error("fp_inv: zero has no inverse");
    return fp_pow(a, p - 2, p);  // Fermat; p prime
}

/// Dense F_p linear solve, A x = b with A square given row-major.
/// Rows are bit-packed when p == 2. Throws std::domain_error if A is singular.
inline std::vector<Residue> fp_solve(std::size_t dim, const std::vector<Residue>& a_rows,
                                     const std::vector<Residue>& b, Residue p) {
    if (a_rows.size() != dim * dim || b.size() != dim)
        throw std::invalid_argument("fp_solve: shape mismatch");
    std::vector<Residue> x(dim, 0);
    if (dim == 0) return x;

    if (p == 2) {
        const std::size_t words = (dim + 1 + 63) / 64;  // augmented with b
        std::vector<std::uint64_t> rows(dim * words, 0);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c)
                if (a_rows[r * dim + c] & 1) rows[r * words + c / 64] |= 1ull << (c % 64);
            if (b[r] & 1) rows[r * words + dim / 64] |= 1ull << (dim % 64);
        }
        std::vector<std::size_t> pivot_row(dim, SIZE_MAX);
        std::size_t next = 0;
        for (std::size_t c = 0; c < dim; ++c) {
            std::size_t sel = SIZE_MAX;
            for (std::size_t r = next; r < dim; ++r)
                if (rows[r * words + c / 64] >> (c % 64) & 1) { sel = r; break; }
            if (sel == SIZE_MAX) throw std::domain_error("fp_solve: singular matrix");
            for (std::size_t w = 0; w < words; ++w)
                std::swap(rows[next * words + w], rows[sel * words + w]);
            for (std::size_t r = 0; r < dim; ++r) {
                if (r != next && (rows[r * words + c / 64] >> (c % 64) & 1))
                    for (std::size_t w = c / 64; w < words; ++w)
                        rows[r * words + w] ^= rows[next * words + w];
            }
            pivot_row[c] = next++;
        }
        for (std::size_t c = 0; c < dim; ++c)
            x[c] = rows[pivot_row[c] * words + dim / 64] >> (dim % 64) & 1;
        return x;
    }

    std::vector<std::uint32_t> m(dim * (dim + 1));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) m[r * (dim + 1) + c] = a_rows[r * dim + c] % p;
        m[r * (dim + 1) + dim] = b[r] % p;
    }
    const std::size_t w = dim + 1;
    std::vector<std::size_t> pivot_row(dim, SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t c = 0; c < dim; ++c) {
        std::size_t sel = SIZE_MAX;
        for (std::size_t r = next; r < dim; ++r)
            if (m[r * w + c] % p != 0) { sel = r; break; }
        if (sel == SIZE_MAX) throw std::domain_error("fp_solve: singular matrix");
        for (std::size_t j = 0; j < w; ++j) std::swap(m[next * w + j], m[sel * w + j]);
        Residue piv_inv = fp_inv(m[next * w + c], p);
        for (std::size_t j = c; j < w; ++j) m[next * w + j] = fp_mul(m[next * w + j], piv_inv, p);
        for (std::size_t r = 0; r < dim; ++r) {
            if (r == next) continue;
            Residue f = m[r * w + c];
            if (f == 0) continue;
            for (std::size_t j = c; j < w; ++j)
                m[r * w + j] = fp_sub(m[r * w + j], fp_mul(f, m[next * w + j], p), p);
        }
        pivot_row[c] = next++;
    }
    for (std::size_t c = 0; c < dim; ++c) x[c] = m[pivot_row[c] * w + dim];
    return x;
}

/// Inverse of a square F_p matrix given row-major; throws if singular.
inline std::vector<Residue> fp_invert(std::size_t dim, const std::vector<Residue>& a_rows,
                                      Residue p) {
    if (a_rows.size() != dim * dim) throw std::invalid_argument("fp_invert: shape mismatch");
    std::vector<Residue> inv(dim * dim, 0);
    if (dim == 0) return inv;

    if (p == 2) {
        const std::size_t words = (2 * dim + 63) / 64;  // [A | I]
        std::vector<std::uint64_t> rows(dim * words, 0);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c)
                if (a_rows[r * dim + c] & 1) rows[r * words + c / 64] |= 1ull << (c % 64);
            std::size_t c = dim + r;
            rows[r * words + c / 64] |= 1ull << (c % 64);
        }
        std::vector<std::size_t> pivot_row(dim);
        std::size_t next = 0;
        for (std::size_t c = 0; c < dim; ++c) {
            std::size_t sel = SIZE_MAX;
            for (std::size_t r = next; r < dim; ++r)
                if (rows[r * words + c / 64] >> (c % 64) & 1) { sel = r; break; }
            if (sel == SIZE_MAX) throw std::domain_error("fp_invert: singular matrix");
            for (std::size_t w = 0; w < words; ++w)
                std::swap(rows[next * words + w], rows[sel * words + w]);
            for (std::size_t r = 0; r < dim; ++r)
                if (r != next && (rows[r * words + c / 64] >> (c % 64) & 1))
                    for (std::size_t w = c / 64; w < words; ++w)
                        rows[r * words + w] ^= rows[next * words + w];
            pivot_row[c] = next++;
        }
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
                std::size_t j = dim + c;
                inv[r * dim + c] = rows[pivot_row[r] * words + j / 64] >> (j % 64) & 1;
            }
        return inv;
    }

    const std::size_t w = 2 * dim;
    std::vector<std::uint32_t> m(dim * w, 0);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) m[r * w + c] = a_rows[r * dim + c] % p;
        m[r * w + dim + r] = 1;
    }
    std::vector<std::size_t> pivot_row(dim);
    std::size_t next = 0;
    for (std::size_t c = 0; c < dim; ++c) {
        std::size_t sel = SIZE_MAX;
        for (std::size_t r = next; r < dim; ++r)
            if (m[r * w + c] != 0) { sel = r; break; }
        if (sel == SIZE_MAX) throw std::domain_error("fp_invert: singular matrix");
        for (std::size_t j = 0; j < w; ++j) std::swap(m[next * w + j], m[sel * w + j]);
        Residue piv_inv = fp_inv(m[next * w + c], p);
        for (std::size_t j = 0; j < w; ++j) m[next * w + j] = fp_mul(m[next * w + j], piv_inv, p);
        for (std::size_t r = 0; r < dim; ++r) {
            if (r == next) continue;
            Residue f = m[r * w + c];
            if (f == 0) continue;
            for (std::size_t j = 0; j < w; ++j)
                m[r * w + j] = fp_sub(m[r * w + j], fp_mul(f, m[next * w + j], p), p);
        }
        pivot_row[c] = next++;
    }
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) inv[r * dim + c] = m[pivot_row[r] * w + dim + c];
    return inv;
}

}  // namespace rsrepair
