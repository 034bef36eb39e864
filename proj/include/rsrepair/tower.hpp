#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsrepair/fp.hpp"
#include "rsrepair/poly.hpp"

namespace rsrepair {

enum class TowerMode { universal, two_erasure };

/// The full algebraic context: K = F_p(alpha_1,...,alpha_n)(beta) with
/// [F_p(alpha_i):F_p] = p_i (distinct primes, p_i = 1 mod D) and
/// [K:F] = D (r! in universal mode, s_1*s_2 in two-erasure mode).
///
/// Axis 0 is the beta exponent (dimension D); axis i >= 1 is the alpha_i
/// exponent (dimension p_i). Immutable after build_tower and shareable.
struct TowerSpec {
    Residue p = 2;
    TowerMode mode = TowerMode::universal;
    std::uint32_t mode_param = 0;  // r in universal mode, d in two-erasure mode
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t beta_degree = 1;  // D
    std::vector<std::uint32_t> primes;
    std::vector<PrimeFieldPoly> min_polys;
    PrimeFieldPoly beta_poly;
    // power_tables[ax][e] = e-th power sum of the roots of the axis minimal
    // polynomial, e = 0..2*dim-2; this is the trace of a generator power.
    std::vector<std::vector<Residue>> power_tables;
    std::uint64_t ext_degree = 1;  // l = D * prod(p_i)

    std::uint32_t axis_count() const { return n + 1; }

    std::uint32_t axis_dim(std::uint32_t ax) const {
        return ax == 0 ? beta_degree : primes.at(ax - 1);
    }

    const PrimeFieldPoly& axis_poly(std::uint32_t ax) const {
        return ax == 0 ? beta_poly : min_polys.at(ax - 1);
    }

    std::uint32_t full_mask() const { return (1u << (n + 1)) - 1; }

    /// Axis mask for F_p({alpha_j : j in retained}); beta is never retained.
    std::uint32_t alpha_mask(const std::vector<std::uint32_t>& retained) const {
        std::uint32_t m = 0;
        for (auto j : retained) {
            if (j < 1 || j > n) throw std::out_of_range("alpha_mask: index outside [1,n]");
            m |= 1u << j;
        }
        return m;
    }

    std::uint64_t mask_dim(std::uint32_t mask) const {
        std::uint64_t d = 1;
        for (std::uint32_t ax = 0; ax <= n; ++ax)
            if (mask >> ax & 1) d *= axis_dim(ax);
        return d;
    }
};

/// Repair subfield F_A = F_p({alpha_j : j in retained}).
struct SubfieldMask {
    std::vector<std::uint32_t> retained;
};

inline std::uint64_t factorial(std::uint32_t r) {
    std::uint64_t f = 1;
    for (std::uint32_t i = 2; i <= r; ++i) f *= i;
    return f;
}

inline TowerSpec build_tower(Residue p, TowerMode mode, std::uint32_t mode_param,
                             std::uint32_t n, std::uint32_t k) {
    if (p < 2 || p > 251) throw std::invalid_argument("build_tower: p must be a prime <= 251");
    for (Residue q = 2; q * q <= p; ++q)
        if (p % q == 0) throw std::invalid_argument("build_tower: p must be prime");
    if (n < 2 || n > 30) throw std::invalid_argument("build_tower: n must be in [2,30]");
    if (k < 1 || k >= n) throw std::invalid_argument("build_tower: need 1 <= k < n");

    TowerSpec spec;
    spec.p = p;
    spec.mode = mode;
    spec.mode_param = mode_param;
    spec.n = n;
    spec.k = k;
    if (mode == TowerMode::universal) {
        if (mode_param != n - k)
            throw std::invalid_argument("build_tower: universal mode requires r = n - k");
        if (mode_param > 12) throw std::invalid_argument("build_tower: r! too large");
        spec.beta_degree = static_cast<std::uint32_t>(factorial(mode_param));
    } else {
        std::uint32_t d = mode_param;
        if (d < k || d > n - 2)
            throw std::invalid_argument("build_tower: two-erasure mode requires k <= d <= n-2");
        spec.beta_degree = (d + 1 - k) * (d + 2 - k);  // s = s_1 * s_2
    }

    auto primes64 = select_primes(n, spec.beta_degree);
    spec.primes.assign(primes64.begin(), primes64.end());
    spec.ext_degree = spec.beta_degree;
    for (auto q : spec.primes) {
        if (spec.beta_degree % q == 0)
            throw std::logic_error("build_tower: gcd(D, prod p_i) != 1");
        if (spec.ext_degree > (1ull << 62) / q) throw std::invalid_argument("build_tower: l overflows");
        spec.ext_degree *= q;
    }

    spec.beta_poly = find_irreducible(p, spec.beta_degree);
    spec.min_polys.reserve(n);
    for (auto q : spec.primes) spec.min_polys.push_back(find_irreducible(p, q));

    spec.power_tables.resize(n + 1);
    for (std::uint32_t ax = 0; ax <= n; ++ax) {
        std::uint32_t dim = spec.axis_dim(ax);
        spec.power_tables[ax] = power_sums(spec.axis_poly(ax), 2 * std::size_t(dim) - 2);
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Monomial-basis layouts
// ---------------------------------------------------------------------------

/// Row-major index space over the active axes of a support mask, ascending
/// axis order with axis 0 (beta) most significant. The full-mask layout is
/// the canonical serialization order: u major, then e_1..e_n.
struct SupportLayout {
    std::vector<std::uint32_t> axes;
    std::vector<std::uint32_t> dims;
    std::vector<std::uint64_t> strides;
    std::uint64_t size = 1;
};

inline SupportLayout make_layout(std::uint32_t mask, const TowerSpec& spec) {
    SupportLayout lay;
    for (std::uint32_t ax = 0; ax <= spec.n; ++ax)
        if (mask >> ax & 1) {
            lay.axes.push_back(ax);
            lay.dims.push_back(spec.axis_dim(ax));
        }
    lay.strides.assign(lay.axes.size(), 1);
    for (std::size_t i = lay.axes.size(); i-- > 1;)
        lay.strides[i - 1] = lay.strides[i] * lay.dims[i];
    lay.size = lay.axes.empty() ? 1 : lay.strides[0] * lay.dims[0];
    return lay;
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

/// Element of K in canonical form: a dense coefficient vector over the
/// monomial basis of the sub-tower spanned by the active axes. Canonical
/// means every active axis carries some coefficient with positive exponent,
/// so equal elements compare equal componentwise.
struct FieldElement {
    std::uint32_t support = 0;
    std::vector<std::uint8_t> coeffs{0};

    bool is_zero() const { return support == 0 && coeffs[0] == 0; }
    bool operator==(const FieldElement&) const = default;
};

namespace detail {

/// Remap a coefficient vector between two layouts whose axis sets may differ;
/// axes absent from the destination must carry only exponent-0 mass.
inline void remap_into(const std::vector<std::uint8_t>& src, const SupportLayout& src_lay,
                       const SupportLayout& dst_lay, std::vector<std::uint8_t>& dst) {
    std::vector<std::uint64_t> dst_stride_of_src(src_lay.axes.size(), 0);
    for (std::size_t i = 0; i < src_lay.axes.size(); ++i) {
        for (std::size_t j = 0; j < dst_lay.axes.size(); ++j)
            if (dst_lay.axes[j] == src_lay.axes[i]) dst_stride_of_src[i] = dst_lay.strides[j];
    }
    std::vector<std::uint32_t> exp(src_lay.axes.size(), 0);
    std::uint64_t dst_idx = 0;
    for (std::uint64_t idx = 0; idx < src_lay.size; ++idx) {
        if (src[idx]) dst[dst_idx] = src[idx];
        // odometer increment, last axis fastest
        for (std::size_t i = src_lay.axes.size(); i-- > 0;) {
            if (++exp[i] < src_lay.dims[i]) {
                dst_idx += dst_stride_of_src[i];
                break;
            }
            exp[i] = 0;
            dst_idx -= dst_stride_of_src[i] * (src_lay.dims[i] - 1);
        }
    }
}

/// Restore canonical form: drop axes whose positive exponents carry no mass.
inline void normalize(FieldElement& a, const TowerSpec& spec) {
    if (a.support == 0) {
        if (a.coeffs.size() != 1) a.coeffs.resize(1);
        return;
    }
    SupportLayout lay = make_layout(a.support, spec);
    std::uint32_t used = 0;
    std::vector<std::uint32_t> exp(lay.axes.size(), 0);
    bool any = false;
    for (std::uint64_t idx = 0; idx < lay.size; ++idx) {
        if (a.coeffs[idx]) {
            any = true;
            for (std::size_t i = 0; i < lay.axes.size(); ++i)
                if (exp[i] > 0) used |= 1u << lay.axes[i];
        }
        for (std::size_t i = lay.axes.size(); i-- > 0;) {
            if (++exp[i] < lay.dims[i]) break;
            exp[i] = 0;
        }
    }
    if (!any) {
        a.support = 0;
        a.coeffs.assign(1, 0);
        return;
    }
    if (used == a.support) return;
    SupportLayout dst_lay = make_layout(used, spec);
    std::vector<std::uint8_t> dst(dst_lay.size, 0);
    remap_into(a.coeffs, lay, dst_lay, dst);
    a.support = used;
    a.coeffs = std::move(dst);
}

inline std::vector<std::uint8_t> embed(const FieldElement& a, std::uint32_t mask,
                                       const TowerSpec& spec) {
    if (a.support & ~mask) throw std::invalid_argument("embed: support exceeds target mask");
    SupportLayout dst_lay = make_layout(mask, spec);
    std::vector<std::uint8_t> dst(dst_lay.size, 0);
    remap_into(a.coeffs, make_layout(a.support, spec), dst_lay, dst);
    return dst;
}

}  // namespace detail

inline FieldElement fe_zero() { return FieldElement{}; }

inline FieldElement fe_constant(Residue c, const TowerSpec& spec) {
    FieldElement e;
    e.coeffs[0] = static_cast<std::uint8_t>(c % spec.p);
    return e;
}

inline FieldElement fe_one(const TowerSpec& spec) { return fe_constant(1, spec); }

/// The basis monomial beta^u * prod_i alpha_i^{exps[i]} with coefficient 1.
inline FieldElement monomial(std::uint32_t u, const std::vector<std::uint32_t>& exps,
                             const TowerSpec& spec) {
    if (exps.size() != spec.n) throw std::invalid_argument("monomial: need one exponent per alpha");
    if (u >= spec.beta_degree) throw std::out_of_range("monomial: beta exponent out of range");
    for (std::uint32_t i = 0; i < spec.n; ++i)
        if (exps[i] >= spec.primes[i]) throw std::out_of_range("monomial: alpha exponent out of range");
    std::uint32_t mask = (u > 0 ? 1u : 0u);
    for (std::uint32_t i = 0; i < spec.n; ++i)
        if (exps[i] > 0) mask |= 1u << (i + 1);
    FieldElement e;
    e.support = mask;
    SupportLayout lay = make_layout(mask, spec);
    e.coeffs.assign(lay.size, 0);
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < lay.axes.size(); ++i) {
        std::uint32_t ax = lay.axes[i];
        std::uint32_t ex = ax == 0 ? u : exps[ax - 1];
        idx += ex * lay.strides[i];
    }
    e.coeffs[idx] = 1;
    return e;
}

inline FieldElement fe_alpha(std::uint32_t i, const TowerSpec& spec) {
    std::vector<std::uint32_t> exps(spec.n, 0);
    exps.at(i - 1) = 1;
    return monomial(0, exps, spec);
}

inline FieldElement fe_beta(const TowerSpec& spec) {
    if (spec.beta_degree < 2) throw std::out_of_range("fe_beta: trivial beta extension");
    return monomial(1, std::vector<std::uint32_t>(spec.n, 0), spec);
}

inline FieldElement add(const FieldElement& a, const FieldElement& b, const TowerSpec& spec) {
    std::uint32_t mask = a.support | b.support;
    std::vector<std::uint8_t> ca = detail::embed(a, mask, spec);
    std::vector<std::uint8_t> cb = detail::embed(b, mask, spec);
    for (std::size_t i = 0; i < ca.size(); ++i)
        ca[i] = static_cast<std::uint8_t>(fp_add(ca[i], cb[i], spec.p));
    FieldElement r;
    r.support = mask;
    r.coeffs = std::move(ca);
    detail::normalize(r, spec);
    return r;
}

inline FieldElement neg(const FieldElement& a, const TowerSpec& spec) {
    FieldElement r = a;
    for (auto& c : r.coeffs) c = static_cast<std::uint8_t>(fp_neg(c, spec.p));
    return r;
}

inline FieldElement sub(const FieldElement& a, const FieldElement& b, const TowerSpec& spec) {
    return add(a, neg(b, spec), spec);
}

inline FieldElement scale(const FieldElement& a, Residue c, const TowerSpec& spec) {
    c %= spec.p;
    if (c == 0) return fe_zero();
    FieldElement r = a;
    for (auto& x : r.coeffs) x = static_cast<std::uint8_t>(fp_mul(x, c, spec.p));
    detail::normalize(r, spec);
    return r;
}

/// Canonical product: exponent-wise convolution over the union support
/// followed by reduction modulo each generator's minimal polynomial.
inline FieldElement mul(const FieldElement& a, const FieldElement& b, const TowerSpec& spec) {
    if (a.is_zero() || b.is_zero()) return fe_zero();
    const std::uint32_t mask = a.support | b.support;
    SupportLayout lay = make_layout(mask, spec);

    // blown-up exponent ranges before reduction
    std::vector<std::uint32_t> bdims(lay.axes.size());
    for (std::size_t i = 0; i < lay.axes.size(); ++i) {
        std::uint32_t d = lay.dims[i];
        std::uint32_t da = (a.support >> lay.axes[i] & 1) ? d - 1 : 0;
        std::uint32_t db = (b.support >> lay.axes[i] & 1) ? d - 1 : 0;
        bdims[i] = da + db + 1;
    }
    std::vector<std::uint64_t> bstrides(lay.axes.size(), 1);
    for (std::size_t i = lay.axes.size(); i-- > 1;) bstrides[i - 1] = bstrides[i] * bdims[i];
    std::uint64_t bsize = lay.axes.empty() ? 1 : bstrides[0] * bdims[0];

    // nonzero terms as (blow-index contribution, coefficient)
    auto collect = [&](const FieldElement& e) {
        std::vector<std::pair<std::uint64_t, std::uint32_t>> terms;
        SupportLayout el = make_layout(e.support, spec);
        std::vector<std::uint64_t> bstride_of(el.axes.size(), 0);
        for (std::size_t i = 0; i < el.axes.size(); ++i)
            for (std::size_t j = 0; j < lay.axes.size(); ++j)
                if (lay.axes[j] == el.axes[i]) bstride_of[i] = bstrides[j];
        std::vector<std::uint32_t> exp(el.axes.size(), 0);
        std::uint64_t bidx = 0;
        for (std::uint64_t idx = 0; idx < el.size; ++idx) {
            if (e.coeffs[idx]) terms.emplace_back(bidx, e.coeffs[idx]);
            for (std::size_t i = el.axes.size(); i-- > 0;) {
                if (++exp[i] < el.dims[i]) {
                    bidx += bstride_of[i];
                    break;
                }
                exp[i] = 0;
                bidx -= bstride_of[i] * (el.dims[i] - 1);
            }
        }
        return terms;
    };
    auto ta = collect(a);
    auto tb = collect(b);
    if (ta.size() > tb.size()) std::swap(ta, tb);

    std::vector<std::uint64_t> acc(bsize, 0);
    for (const auto& [ia, ca] : ta)
        for (const auto& [ib, cb] : tb) acc[ia + ib] += std::uint64_t(ca) * cb;

    // reduce one generator at a time
    for (std::size_t i = 0; i < lay.axes.size(); ++i) {
        std::uint32_t dim = lay.dims[i];
        if (bdims[i] <= dim) continue;
        const PrimeFieldPoly& f = spec.axis_poly(lay.axes[i]);
        std::vector<std::uint64_t> negf(dim);
        for (std::uint32_t j = 0; j < dim; ++j) negf[j] = fp_neg(f.coeff(j), spec.p);
        const std::uint64_t stride = bstrides[i];
        const std::uint64_t block = stride * bdims[i];
        for (std::uint64_t base = 0; base < bsize; base += block) {
            for (std::uint32_t e = bdims[i] - 1; e >= dim; --e) {
                const std::uint64_t off = base + std::uint64_t(e) * stride;
                for (std::uint64_t inner = 0; inner < stride; ++inner) {
                    std::uint64_t c = acc[off + inner] % spec.p;
                    acc[off + inner] = 0;
                    if (!c) continue;
                    const std::uint64_t tgt = base + std::uint64_t(e - dim) * stride + inner;
                    for (std::uint32_t j = 0; j < dim; ++j)
                        acc[tgt + std::uint64_t(j) * stride] += c * negf[j];
                }
            }
        }
    }

    FieldElement r;
    r.support = mask;
    r.coeffs.assign(lay.size, 0);
    {
        std::vector<std::uint32_t> exp(lay.axes.size(), 0);
        std::uint64_t bidx = 0;
        for (std::uint64_t idx = 0; idx < lay.size; ++idx) {
            r.coeffs[idx] = static_cast<std::uint8_t>(acc[bidx] % spec.p);
            for (std::size_t i = lay.axes.size(); i-- > 0;) {
                if (++exp[i] < lay.dims[i]) {
                    bidx += bstrides[i];
                    break;
                }
                exp[i] = 0;
                bidx -= bstrides[i] * (lay.dims[i] - 1);
            }
        }
    }
    detail::normalize(r, spec);
    return r;
}

inline FieldElement fe_pow(FieldElement base, std::uint64_t e, const TowerSpec& spec) {
    FieldElement r = fe_one(spec);
    while (e) {
        if (e & 1) r = mul(r, base, spec);
        base = mul(base, base, spec);
        e >>= 1;
    }
    return r;
}

/// Multiplicative inverse via the linear system a*x = 1 restricted to the
/// sub-tower spanned by a's active axes.
inline FieldElement inv(const FieldElement& a, const TowerSpec& spec) {
    if (a.is_zero()) throw std::domain_error("inv: division by zero");
    if (a.support == 0) return fe_constant(fp_inv(a.coeffs[0], spec.p), spec);
    SupportLayout lay = make_layout(a.support, spec);
    const std::size_t m = static_cast<std::size_t>(lay.size);
    std::vector<Residue> rows(m * m, 0);
    for (std::size_t c = 0; c < m; ++c) {
        // basis monomial with flat index c in this layout
        std::uint32_t u = 0;
        std::vector<std::uint32_t> exps(spec.n, 0);
        std::uint64_t rem = c;
        for (std::size_t i = 0; i < lay.axes.size(); ++i) {
            std::uint32_t ex = static_cast<std::uint32_t>(rem / lay.strides[i]);
            rem %= lay.strides[i];
            if (lay.axes[i] == 0)
                u = ex;
            else
                exps[lay.axes[i] - 1] = ex;
        }
        FieldElement col = mul(a, monomial(u, exps, spec), spec);
        std::vector<std::uint8_t> cc = detail::embed(col, a.support, spec);
        for (std::size_t r = 0; r < m; ++r) rows[r * m + c] = cc[r];
    }
    std::vector<Residue> e0(m, 0);
    e0[0] = 1;
    std::vector<Residue> x = fp_solve(m, rows, e0, spec.p);
    FieldElement r;
    r.support = a.support;
    r.coeffs.resize(m);
    for (std::size_t i = 0; i < m; ++i) r.coeffs[i] = static_cast<std::uint8_t>(x[i]);
    detail::normalize(r, spec);
    return r;
}

namespace detail {

/// Contract one exponent axis against its power-sum table, or scale by the
/// extension degree when the axis is not active.
inline FieldElement drop_axis(const FieldElement& a, std::uint32_t ax, const TowerSpec& spec) {
    const auto& table = spec.power_tables[ax];
    if (!(a.support >> ax & 1)) {
        return scale(a, static_cast<Residue>(spec.axis_dim(ax) % spec.p), spec);
    }
    SupportLayout src = make_layout(a.support, spec);
    std::uint32_t dst_mask = a.support & ~(1u << ax);
    SupportLayout dst = make_layout(dst_mask, spec);
    std::vector<std::uint64_t> acc(dst.size, 0);
    std::vector<std::uint64_t> dst_stride_of(src.axes.size(), 0);
    std::size_t ax_pos = 0;
    for (std::size_t i = 0; i < src.axes.size(); ++i) {
        if (src.axes[i] == ax) {
            ax_pos = i;
            continue;
        }
        for (std::size_t j = 0; j < dst.axes.size(); ++j)
            if (dst.axes[j] == src.axes[i]) dst_stride_of[i] = dst.strides[j];
    }
    std::vector<std::uint32_t> exp(src.axes.size(), 0);
    std::uint64_t dst_idx = 0;
    for (std::uint64_t idx = 0; idx < src.size; ++idx) {
        if (a.coeffs[idx]) acc[dst_idx] += std::uint64_t(a.coeffs[idx]) * table[exp[ax_pos]];
        for (std::size_t i = src.axes.size(); i-- > 0;) {
            if (++exp[i] < src.dims[i]) {
                dst_idx += dst_stride_of[i];
                break;
            }
            exp[i] = 0;
            dst_idx -= dst_stride_of[i] * (src.dims[i] - 1);
        }
    }
    FieldElement r;
    r.support = dst_mask;
    r.coeffs.resize(dst.size);
    for (std::uint64_t i = 0; i < dst.size; ++i)
        r.coeffs[i] = static_cast<std::uint8_t>(acc[i] % spec.p);
    normalize(r, spec);
    return r;
}

}  // namespace detail

/// Relative trace between sub-towers: tr_{E/L} where E and L are spanned by
/// the axes of from_mask and to_mask (to_mask subset of from_mask) and the
/// input lies in E. Axes of from_mask \ to_mask are contracted in turn; the
/// composition order is immaterial by transitivity.
inline FieldElement subfield_trace(const FieldElement& a, std::uint32_t from_mask,
                                   std::uint32_t to_mask, const TowerSpec& spec) {
    if (to_mask & ~from_mask) throw std::invalid_argument("subfield_trace: masks not nested");
    if (a.support & ~from_mask) throw std::invalid_argument("subfield_trace: input outside source field");
    FieldElement r = a;
    for (std::uint32_t ax = 0; ax <= spec.n; ++ax)
        if ((from_mask >> ax & 1) && !(to_mask >> ax & 1)) r = detail::drop_axis(r, ax, spec);
    return r;
}

/// tr_{K/F_A}(a) for the repair subfield F_A given by the mask.
inline FieldElement trace_to(const FieldElement& a, const SubfieldMask& mask,
                             const TowerSpec& spec) {
    return subfield_trace(a, spec.full_mask(), spec.alpha_mask(mask.retained), spec);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Coefficients of a in the canonical monomial order of the sub-tower given
/// by mask (u major, then e_1..e_n restricted to active axes).
inline std::vector<std::uint8_t> flatten(const FieldElement& a, std::uint32_t mask,
                                         const TowerSpec& spec) {
    return detail::embed(a, mask, spec);
}

inline FieldElement unflatten(const std::vector<std::uint8_t>& digits, std::uint32_t mask,
                              const TowerSpec& spec) {
    SupportLayout lay = make_layout(mask, spec);
    if (digits.size() != lay.size) throw std::invalid_argument("unflatten: digit count mismatch");
    FieldElement r;
    r.support = mask;
    r.coeffs.resize(digits.size());
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] >= spec.p) throw std::invalid_argument("unflatten: digit out of range");
        r.coeffs[i] = digits[i];
    }
    detail::normalize(r, spec);
    return r;
}

inline std::uint32_t bits_per_digit(Residue p) {
    std::uint32_t b = 1;
    while ((1u << b) < p) ++b;
    return b;
}

/// Pack base-p digits little-endian into bytes: floor(8/bits_per_digit)
/// digits per byte, first digit in the lowest bits.
inline std::vector<std::uint8_t> pack_digits(const std::vector<std::uint8_t>& digits, Residue p) {
    std::uint32_t b = bits_per_digit(p);
    std::uint32_t per = 8 / b;
    if (per == 0) throw std::invalid_argument("pack_digits: p too large");
    std::vector<std::uint8_t> out((digits.size() + per - 1) / per, 0);
    for (std::size_t i = 0; i < digits.size(); ++i)
        out[i / per] |= static_cast<std::uint8_t>(digits[i] << (b * (i % per)));
    return out;
}

inline std::vector<std::uint8_t> unpack_digits(const std::vector<std::uint8_t>& bytes,
                                               std::size_t count, Residue p) {
    std::uint32_t b = bits_per_digit(p);
    std::uint32_t per = 8 / b;
    std::vector<std::uint8_t> out(count, 0);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = (bytes.at(i / per) >> (b * (i % per))) & ((1u << b) - 1);
    return out;
}

inline std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto x : bytes) {
        s.push_back(digits[x >> 4]);
        s.push_back(digits[x & 15]);
    }
    return s;
}

inline std::vector<std::uint8_t> from_hex(const std::string& s) {
    if (s.size() % 2) throw std::invalid_argument("from_hex: odd length");
    auto val = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("from_hex: bad digit");
    };
    std::vector<std::uint8_t> out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(val(s[2 * i]) << 4 | val(s[2 * i + 1]));
    return out;
}

/// Linear combination sum_i coeffs[i] * elems[i] over F_p.
inline FieldElement fe_lincomb(const std::vector<FieldElement>& elems,
                               const std::vector<Residue>& coeffs, const TowerSpec& spec) {
    if (elems.size() != coeffs.size()) throw std::invalid_argument("fe_lincomb: length mismatch");
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (coeffs[i] % spec.p) mask |= elems[i].support;
    SupportLayout lay = make_layout(mask, spec);
    std::vector<std::uint64_t> acc(lay.size, 0);
    for (std::size_t i = 0; i < elems.size(); ++i) {
        Residue c = coeffs[i] % spec.p;
        if (!c) continue;
        std::vector<std::uint8_t> em = detail::embed(elems[i], mask, spec);
        for (std::size_t j = 0; j < em.size(); ++j) acc[j] += std::uint64_t(em[j]) * c;
    }
    FieldElement r;
    r.support = mask;
    r.coeffs.resize(lay.size);
    for (std::uint64_t i = 0; i < lay.size; ++i)
        r.coeffs[i] = static_cast<std::uint8_t>(acc[i] % spec.p);
    detail::normalize(r, spec);
    return r;
}

}  // namespace rsrepair
