#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "rsrepair/tower.hpp"

namespace rsrepair {

/// F_p matrix whose columns are set elements written in the reduced monomial
/// basis of K over F_{[h]}: monomials beta^u * prod_{j in failed} alpha_j^{e_j}.
/// Columns are bit-packed for p = 2. All span/dimension claims are decided
/// here; F_p-rank equals rank over any extension field.
struct MonomialMatrix {
    Residue p = 2;
    std::vector<std::uint32_t> failed;  // sorted node indices of the index space
    std::uint32_t space_mask = 0;
    std::uint64_t dim = 0;   // D * prod_{j in failed} p_j
    std::size_t ncols = 0;
    std::size_t words = 0;                // per column when p == 2
    std::vector<std::uint64_t> bits;      // column-major, p == 2
    std::vector<std::uint8_t> gen;        // column-major, p != 2
    std::vector<FieldElement> elements;   // source elements, column order
};

namespace detail {

inline std::uint32_t failed_space_mask(const std::vector<std::uint32_t>& failed,
                                       const TowerSpec& spec) {
    std::uint32_t mask = 1;  // beta axis
    std::uint32_t prev = 0;
    for (auto j : failed) {
        if (j < 1 || j > spec.n) throw std::invalid_argument("failed set: index outside [1,n]");
        if (j <= prev) throw std::invalid_argument("failed set: must be strictly increasing");
        prev = j;
        mask |= 1u << j;
    }
    return mask;
}

inline std::size_t first_nonzero(const std::vector<std::uint8_t>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) return i;
    return SIZE_MAX;
}

inline std::size_t first_nonzero_bits(const std::uint64_t* w, std::size_t words) {
    for (std::size_t i = 0; i < words; ++i)
        if (w[i]) return i * 64 + std::countr_zero(w[i]);
    return SIZE_MAX;
}

/// Incremental F_p echelon basis keyed by pivot position.
class Echelon {
public:
    Echelon(std::uint64_t dim, Residue p)
        : p_(p), words_((dim + 63) / 64), pivot_of_(dim, SIZE_MAX) {}

    std::uint64_t rank() const { return rows_bits_.size() + rows_gen_.size(); }

    /// Reduce a packed candidate in place; returns its pivot or SIZE_MAX.
    std::size_t reduce_bits(std::vector<std::uint64_t>& cand) const {
        std::size_t b = first_nonzero_bits(cand.data(), words_);
        while (b != SIZE_MAX && pivot_of_[b] != SIZE_MAX) {
            const std::uint64_t* row = rows_bits_[pivot_of_[b]].data();
            for (std::size_t w = b / 64; w < words_; ++w) cand[w] ^= row[w];
            b = first_nonzero_bits(cand.data(), words_);
        }
        return b;
    }

    std::size_t reduce_gen(std::vector<std::uint8_t>& cand) const {
        std::size_t b = first_nonzero(cand);
        while (b != SIZE_MAX && pivot_of_[b] != SIZE_MAX) {
            const auto& row = rows_gen_[pivot_of_[b]];
            Residue c = cand[b];  // row is normalized to pivot coefficient 1
            for (std::size_t i = b; i < cand.size(); ++i)
                cand[i] = static_cast<std::uint8_t>(fp_sub(cand[i], fp_mul(c, row[i], p_), p_));
            b = first_nonzero(cand);
        }
        return b;
    }

    /// Insert a candidate; returns true if it was independent.
    bool add_bits(std::vector<std::uint64_t> cand) {
        std::size_t b = reduce_bits(cand);
        if (b == SIZE_MAX) return false;
        pivot_of_[b] = rows_bits_.size();
        rows_bits_.push_back(std::move(cand));
        return true;
    }

    bool add_gen(std::vector<std::uint8_t> cand) {
        std::size_t b = reduce_gen(cand);
        if (b == SIZE_MAX) return false;
        Residue inv_piv = fp_inv(cand[b], p_);
        for (auto& x : cand) x = static_cast<std::uint8_t>(fp_mul(x, inv_piv, p_));
        pivot_of_[b] = rows_gen_.size();
        rows_gen_.push_back(std::move(cand));
        return true;
    }

private:
    Residue p_;
    std::size_t words_;
    std::vector<std::size_t> pivot_of_;
    std::vector<std::vector<std::uint64_t>> rows_bits_;
    std::vector<std::vector<std::uint8_t>> rows_gen_;
};

inline std::vector<std::uint64_t> pack_column(const std::vector<std::uint8_t>& digits) {
    std::vector<std::uint64_t> out((digits.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < digits.size(); ++i)
        if (digits[i] & 1) out[i / 64] |= 1ull << (i % 64);
    return out;
}

}  // namespace detail

/// Express a set of field elements as columns over the reduced monomial
/// basis determined by failed_set. Every element must be supported on beta
/// and failed-index generators only; anything else signals a bug in set
/// construction and is rejected. Columns are sorted by (leading monomial,
/// full coordinate vector) to pin a canonical order.
inline MonomialMatrix project(const std::vector<FieldElement>& elements,
                              const std::vector<std::uint32_t>& failed_set,
                              const TowerSpec& spec) {
    MonomialMatrix m;
    m.p = spec.p;
    m.failed = failed_set;
    m.space_mask = detail::failed_space_mask(failed_set, spec);
    m.dim = spec.mask_dim(m.space_mask);
    m.ncols = elements.size();
    m.words = (m.dim + 63) / 64;

    std::vector<std::vector<std::uint8_t>> cols(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i].support & ~m.space_mask)
            throw std::invalid_argument("project: element support outside the index space");
        cols[i] = flatten(elements[i], m.space_mask, spec);
    }
    std::vector<std::size_t> order(elements.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> lead(elements.size());
    for (std::size_t i = 0; i < cols.size(); ++i) lead[i] = detail::first_nonzero(cols[i]);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (lead[a] != lead[b]) return lead[a] < lead[b];
        return cols[a] < cols[b];
    });

    m.elements.reserve(elements.size());
    if (spec.p == 2) {
        m.bits.assign(m.ncols * m.words, 0);
        for (std::size_t c = 0; c < order.size(); ++c) {
            auto packed = detail::pack_column(cols[order[c]]);
            std::copy(packed.begin(), packed.end(), m.bits.begin() + c * m.words);
            m.elements.push_back(elements[order[c]]);
        }
    } else {
        m.gen.assign(m.ncols * m.dim, 0);
        for (std::size_t c = 0; c < order.size(); ++c) {
            std::copy(cols[order[c]].begin(), cols[order[c]].end(), m.gen.begin() + c * m.dim);
            m.elements.push_back(elements[order[c]]);
        }
    }
    return m;
}

namespace detail {

inline void check_same_space(const std::vector<const MonomialMatrix*>& ms) {
    for (std::size_t i = 1; i < ms.size(); ++i)
        if (ms[i]->space_mask != ms[0]->space_mask || ms[i]->p != ms[0]->p)
            throw std::invalid_argument("monomial matrices live in different index spaces");
}

/// Greedy scan over concatenated columns; calls keep(matrix, column) for
/// each column that enlarges the span, in canonical order.
template <typename Keep>
std::uint64_t sweep(const std::vector<const MonomialMatrix*>& ms, Keep&& keep) {
    if (ms.empty()) return 0;
    check_same_space(ms);
    Echelon ech(ms[0]->dim, ms[0]->p);
    for (const auto* m : ms) {
        for (std::size_t c = 0; c < m->ncols; ++c) {
            bool indep;
            if (m->p == 2) {
                std::vector<std::uint64_t> cand(m->bits.begin() + c * m->words,
                                                m->bits.begin() + (c + 1) * m->words);
                indep = ech.add_bits(std::move(cand));
            } else {
                std::vector<std::uint8_t> cand(m->gen.begin() + c * m->dim,
                                               m->gen.begin() + (c + 1) * m->dim);
                indep = ech.add_gen(std::move(cand));
            }
            if (indep) keep(*m, c);
        }
    }
    return ech.rank();
}

}  // namespace detail

/// dim of span(S_1) + ... + span(S_m) = rank of the concatenation.
inline std::uint64_t span_sum_dim(const std::vector<const MonomialMatrix*>& sets) {
    return detail::sweep(sets, [](const MonomialMatrix&, std::size_t) {});
}

inline std::uint64_t rank(const MonomialMatrix& m) { return span_sum_dim({&m}); }

/// dim(span a  intersect  span b) = rank(a) + rank(b) - rank(a||b).
inline std::uint64_t span_intersection_dim(const MonomialMatrix& a, const MonomialMatrix& b) {
    std::uint64_t ra = rank(a), rb = rank(b), rab = span_sum_dim({&a, &b});
    return ra + rb - rab;
}

/// Deterministic maximal independent subset of the concatenated columns,
/// greedy in canonical column order, returned as field elements.
inline std::vector<FieldElement> extract_basis(const std::vector<const MonomialMatrix*>& sets) {
    std::vector<FieldElement> basis;
    detail::sweep(sets, [&](const MonomialMatrix& m, std::size_t c) {
        basis.push_back(m.elements[c]);
    });
    return basis;
}

/// {g1*g2 : g1 in a, g2 in b}, duplicates removed, first occurrence kept.
inline std::vector<FieldElement> set_product(const std::vector<FieldElement>& a,
                                             const std::vector<FieldElement>& b,
                                             const TowerSpec& spec) {
    std::vector<FieldElement> out;
    std::set<std::pair<std::uint32_t, std::vector<std::uint8_t>>> seen;
    for (const auto& x : a)
        for (const auto& y : b) {
            FieldElement prod = mul(x, y, spec);
            if (seen.emplace(prod.support, prod.coeffs).second) out.push_back(std::move(prod));
        }
    return out;
}

/// Expresses vectors over a fixed independent column set, preserving the
/// caller's column order; used to rewrite downloaded trace symbols in terms
/// of the merged basis B.
class SpanSolver {
public:
    SpanSolver(const std::vector<FieldElement>& basis, const std::vector<std::uint32_t>& failed,
               const TowerSpec& spec)
        : p_(spec.p), mask_(detail::failed_space_mask(failed, spec)), spec_(&spec) {
        ncols_ = basis.size();
        for (std::size_t c = 0; c < basis.size(); ++c) {
            if (basis[c].support & ~mask_)
                throw std::invalid_argument("SpanSolver: element outside the index space");
            std::vector<std::uint8_t> digits = flatten(basis[c], mask_, spec);
            bool indep;
            std::vector<Residue> combo(basis.size(), 0);
            combo[c] = 1;
            if (p_ == 2)
                indep = add_bits(detail::pack_column(digits), std::move(combo));
            else
                indep = add_gen(std::move(digits), std::move(combo));
            if (!indep) throw std::invalid_argument("SpanSolver: basis columns are dependent");
        }
    }

    /// Coefficients lambda with x = sum_i lambda_i * basis_i; throws if x is
    /// outside the span.
    std::vector<Residue> express(const FieldElement& x) const {
        std::vector<std::uint8_t> digits = flatten(x, mask_, *spec_);
        std::vector<Residue> lambda(ncols_, 0);
        if (p_ == 2) {
            std::vector<std::uint64_t> cand = detail::pack_column(digits);
            std::size_t b = detail::first_nonzero_bits(cand.data(), cand.size());
            while (b != SIZE_MAX) {
                auto it = pivot_.find(b);
                if (it == pivot_.end()) throw std::domain_error("SpanSolver: not in span");
                const auto& [row, combo] = rows_[it->second];
                for (std::size_t w = b / 64; w < cand.size(); ++w) cand[w] ^= row[w];
                for (std::size_t i = 0; i < ncols_; ++i) lambda[i] ^= combo[i];
                b = detail::first_nonzero_bits(cand.data(), cand.size());
            }
        } else {
            std::vector<std::uint8_t> cand = digits;
            std::size_t b = detail::first_nonzero(cand);
            while (b != SIZE_MAX) {
                auto it = pivot_.find(b);
                if (it == pivot_.end()) throw std::domain_error("SpanSolver: not in span");
                const auto& row = gen_rows_[it->second];
                const auto& combo = gen_combos_[it->second];
                Residue c = cand[b];
                for (std::size_t i = b; i < cand.size(); ++i)
                    cand[i] = static_cast<std::uint8_t>(fp_sub(cand[i], fp_mul(c, row[i], p_), p_));
                for (std::size_t i = 0; i < ncols_; ++i)
                    lambda[i] = fp_add(lambda[i], fp_mul(c, combo[i], p_), p_);
                b = detail::first_nonzero(cand);
            }
        }
        return lambda;
    }

private:
    bool add_bits(std::vector<std::uint64_t> cand, std::vector<Residue> combo) {
        std::size_t b = detail::first_nonzero_bits(cand.data(), cand.size());
        while (b != SIZE_MAX) {
            auto it = pivot_.find(b);
            if (it == pivot_.end()) break;
            const auto& [row, rcombo] = rows_[it->second];
            for (std::size_t w = b / 64; w < cand.size(); ++w) cand[w] ^= row[w];
            for (std::size_t i = 0; i < combo.size(); ++i) combo[i] ^= rcombo[i];
            b = detail::first_nonzero_bits(cand.data(), cand.size());
        }
        if (b == SIZE_MAX) return false;
        pivot_[b] = rows_.size();
        rows_.emplace_back(std::move(cand), std::move(combo));
        return true;
    }

    bool add_gen(std::vector<std::uint8_t> cand, std::vector<Residue> combo) {
        std::size_t b = detail::first_nonzero(cand);
        while (b != SIZE_MAX) {
            auto it = pivot_.find(b);
            if (it == pivot_.end()) break;
            const auto& row = gen_rows_[it->second];
            const auto& rcombo = gen_combos_[it->second];
            Residue c = cand[b];
            for (std::size_t i = b; i < cand.size(); ++i)
                cand[i] = static_cast<std::uint8_t>(fp_sub(cand[i], fp_mul(c, row[i], p_), p_));
            for (std::size_t i = 0; i < combo.size(); ++i)
                combo[i] = fp_sub(combo[i], fp_mul(c, rcombo[i], p_), p_);
            b = detail::first_nonzero(cand);
        }
        if (b == SIZE_MAX) return false;
        Residue inv_piv = fp_inv(cand[b], p_);
        for (auto& x : cand) x = static_cast<std::uint8_t>(fp_mul(x, inv_piv, p_));
        for (auto& x : combo) x = fp_mul(x, inv_piv, p_);
        pivot_[b] = gen_rows_.size();
        gen_rows_.push_back(std::move(cand));
        gen_combos_.push_back(std::move(combo));
        return true;
    }

    Residue p_;
    std::uint32_t mask_;
    const TowerSpec* spec_;
    std::size_t ncols_ = 0;
    std::map<std::size_t, std::size_t> pivot_;
    std::vector<std::pair<std::vector<std::uint64_t>, std::vector<Residue>>> rows_;
    std::vector<std::vector<std::uint8_t>> gen_rows_;
    std::vector<std::vector<Residue>> gen_combos_;
};

}  // namespace rsrepair
