#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rsrepair/grs.hpp"
#include "rsrepair/monomial_space.hpp"
#include "rsrepair/repair_sets.hpp"
#include "rsrepair/tower.hpp"

namespace rsrepair {

/// h*d*l/(h+d-k), the lower bound on the repair bandwidth in base-field
/// symbols. Exact for every constructed code.
inline std::uint64_t cutset_bound(std::uint64_t h, std::uint64_t d, std::uint64_t k,
                                  std::uint64_t l) {
    std::uint64_t denom = h + d - k;
    std::uint64_t num = h * d * l;
    if (num % denom) throw std::logic_error("cutset_bound: non-integral at these parameters");
    return num / denom;
}

/// The downloaded data of one helper: tr_{K/F_[h]}(gamma v_j c_j) for gamma
/// in the download basis B, each subfield element flattened to
/// [F_[h]:F_p] base-field residues in canonical monomial order.
struct HelperPayload {
    std::uint32_t helper = 0;
    std::vector<std::uint8_t> symbols;
};

/// Everything needed to run one (F, R) repair: the download sets, the merged
/// download basis, the per-position reconstruction data, and the exact
/// bandwidth accounting against the cut-set bound.
struct RepairPlan {
    TowerSpec spec;
    CodeSpec code;
    std::vector<std::uint32_t> failed;
    std::vector<std::uint32_t> helpers;
    RepairConstants consts;

    std::uint32_t repair_mask = 0;      // axes of F_[h]
    std::uint64_t repair_degree = 0;    // [F_[h] : F_p]
    std::vector<std::vector<FieldElement>> s_sets;
    std::vector<FieldElement> download_basis;  // B, greedy over S_1..S_h
    std::uint64_t bandwidth_per_helper = 0;    // |B| * repair_degree
    std::uint64_t bandwidth_total = 0;
    std::uint64_t cutset = 0;

    struct Position {
        std::uint32_t node = 0;               // failed node repaired here
        std::vector<FieldElement> t_set;      // T_i
        KPoly h_poly;                         // annihilator h_i
        std::vector<FieldElement> h_at;       // h_i(omega_j), index j-1
        FieldElement vh_inv;                  // (v_i h_i(alpha_i))^{-1}
        std::uint32_t reduced_mask = 0;       // beta + first i failed axes
        std::uint64_t m = 0;                  // [K : F_[i]]
        std::vector<Residue> p_inv;           // coefficient matrix of {gamma alpha^t}, inverted
        std::vector<Residue> gram_inv;        // monomial trace-Gram, inverted
        std::vector<FieldElement> mu;         // reduced monomials, layout order
        std::uint32_t fi_mask = 0;            // axes of F_[i]
        std::vector<FieldElement> lift_monomials;  // prod_{j>i} alpha_{f_j}^{q_j}
        std::vector<Residue> lift_gram_inv;
        std::vector<std::vector<Residue>> lambda;  // [gamma*Q + q] over B
    };
    std::vector<Position> positions;
};

namespace detail {

/// Trace-pairing Gram matrix of the monomial basis of a sub-tower layout;
/// entries are products of per-axis power sums, so they live in F_p.
inline std::vector<Residue> monomial_trace_gram(std::uint32_t mask, const TowerSpec& spec) {
    SupportLayout lay = make_layout(mask, spec);
    const std::size_t m = static_cast<std::size_t>(lay.size);
    std::vector<std::vector<std::uint32_t>> exps(m, std::vector<std::uint32_t>(lay.axes.size()));
    for (std::size_t idx = 0; idx < m; ++idx) {
        std::uint64_t rem = idx;
        for (std::size_t i = 0; i < lay.axes.size(); ++i) {
            exps[idx][i] = static_cast<std::uint32_t>(rem / lay.strides[i]);
            rem %= lay.strides[i];
        }
    }
    std::vector<Residue> gram(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            Residue val = 1 % spec.p;
            for (std::size_t i = 0; i < lay.axes.size(); ++i) {
                const auto& table = spec.power_tables[lay.axes[i]];
                val = fp_mul(val, table[exps[a][i] + exps[b][i]], spec.p);
            }
            gram[a * m + b] = val;
        }
    return gram;
}

/// out[r] = sum_c mat[r*m+c] * v[c] with F_p matrix entries.
inline std::vector<FieldElement> apply_fp_matrix(const std::vector<Residue>& mat, std::size_t m,
                                                 const std::vector<FieldElement>& v,
                                                 const TowerSpec& spec) {
    std::vector<FieldElement> out;
    out.reserve(m);
    for (std::size_t r = 0; r < m; ++r) {
        std::vector<Residue> row(mat.begin() + r * m, mat.begin() + (r + 1) * m);
        out.push_back(fe_lincomb(v, row, spec));
    }
    return out;
}

}  // namespace detail

inline RepairPlan make_plan(const TowerSpec& spec, const CodeSpec& code,
                            std::vector<std::uint32_t> failed,
                            std::vector<std::uint32_t> helpers) {
    std::sort(helpers.begin(), helpers.end());
    std::uint32_t prev = 0;
    for (auto f : failed) {
        if (f < 1 || f > spec.n || f <= prev)
            throw std::invalid_argument("make_plan: failed set must be strictly increasing in [1,n]");
        prev = f;
    }
    prev = 0;
    for (auto r : helpers) {
        if (r < 1 || r > spec.n || r <= prev)
            throw std::invalid_argument("make_plan: helper set must be distinct nodes in [1,n]");
        prev = r;
        if (std::find(failed.begin(), failed.end(), r) != failed.end())
            throw std::invalid_argument("make_plan: failed and helper sets overlap");
    }
    const std::uint32_t h = static_cast<std::uint32_t>(failed.size());
    const std::uint32_t d = static_cast<std::uint32_t>(helpers.size());
    if (h < 1 || h > spec.n - spec.k)
        throw std::invalid_argument("make_plan: need 1 <= |F| <= r");

    RepairPlan plan;
    plan.spec = spec;
    plan.code = code;
    plan.failed = std::move(failed);
    plan.helpers = std::move(helpers);
    plan.consts = constants(spec, h, d, spec.k);

    std::vector<std::uint32_t> retained;
    for (std::uint32_t j = 1; j <= spec.n; ++j)
        if (std::find(plan.failed.begin(), plan.failed.end(), j) == plan.failed.end())
            retained.push_back(j);
    plan.repair_mask = spec.alpha_mask(retained);
    plan.repair_degree = spec.mask_dim(plan.repair_mask);

    // download sets and the merged basis B
    std::vector<MonomialMatrix> projected;
    for (std::uint32_t i = 1; i <= h; ++i) {
        plan.s_sets.push_back(build_S(spec, plan.consts, plan.failed, i));
        projected.push_back(project(plan.s_sets.back(), plan.failed, spec));
    }
    std::vector<const MonomialMatrix*> ptrs;
    for (const auto& m : projected) ptrs.push_back(&m);
    plan.download_basis = extract_basis(ptrs);

    plan.bandwidth_per_helper = plan.download_basis.size() * plan.repair_degree;
    plan.bandwidth_total = plan.bandwidth_per_helper * d;
    plan.cutset = cutset_bound(h, d, spec.k, spec.ext_degree);
    if (plan.bandwidth_total != plan.cutset)
        throw std::logic_error("make_plan: download basis does not meet the cut-set bound");

    SpanSolver solver(plan.download_basis, plan.failed, spec);

    for (std::uint32_t i = 1; i <= h; ++i) {
        RepairPlan::Position pos;
        pos.node = plan.failed[i - 1];
        pos.t_set = build_T(spec, plan.consts, plan.failed, i);
        const std::uint32_t s_i = plan.consts.s[i - 1];

        // annihilator of everything outside R and the first i failed nodes
        std::vector<FieldElement> ann_points;
        for (std::uint32_t j = 1; j <= spec.n; ++j) {
            bool in_r = std::binary_search(plan.helpers.begin(), plan.helpers.end(), j);
            bool in_fi = false;
            for (std::uint32_t m = 0; m < i; ++m) in_fi |= plan.failed[m] == j;
            if (!in_r && !in_fi) ann_points.push_back(code.omega[j - 1]);
        }
        pos.h_poly = annihilator(ann_points, spec);
        pos.h_at.reserve(spec.n);
        for (std::uint32_t j = 1; j <= spec.n; ++j)
            pos.h_at.push_back(kpoly_eval(pos.h_poly, code.omega[j - 1], spec));

        // (v_i h_i(alpha_i))^{-1} = prod over R and earlier failed of (alpha_i - alpha_j)
        pos.vh_inv = fe_one(spec);
        for (auto j : plan.helpers)
            pos.vh_inv = mul(pos.vh_inv,
                             sub(code.omega[pos.node - 1], code.omega[j - 1], spec), spec);
        for (std::uint32_t m = 0; m + 1 < i; ++m)
            pos.vh_inv = mul(
                pos.vh_inv,
                sub(code.omega[pos.node - 1], code.omega[plan.failed[m] - 1], spec), spec);

        pos.reduced_mask = 1;
        for (std::uint32_t m = 0; m < i; ++m) pos.reduced_mask |= 1u << plan.failed[m];
        pos.m = spec.mask_dim(pos.reduced_mask);
        if (pos.m != std::uint64_t(s_i) * pos.t_set.size())
            throw std::logic_error("make_plan: s_i |T_i| != [K:F_[i]]");

        pos.fi_mask = plan.repair_mask;
        for (std::uint32_t j = i; j < h; ++j) pos.fi_mask |= 1u << plan.failed[j];

        // coefficient matrix of {gamma alpha_i^t} over the reduced monomials
        const std::size_t m_dim = static_cast<std::size_t>(pos.m);
        std::vector<Residue> p_rows(m_dim * m_dim);
        const FieldElement& alpha_i = code.omega[pos.node - 1];
        for (std::size_t g = 0; g < pos.t_set.size(); ++g) {
            FieldElement cur = pos.t_set[g];
            for (std::uint32_t t = 0; t < s_i; ++t) {
                auto digits = flatten(cur, pos.reduced_mask, spec);
                std::size_t row = g * s_i + t;
                for (std::size_t c = 0; c < m_dim; ++c) p_rows[row * m_dim + c] = digits[c];
                if (t + 1 < s_i) cur = mul(cur, alpha_i, spec);
            }
        }
        try {
            pos.p_inv = fp_invert(m_dim, p_rows, spec.p);
            pos.gram_inv = fp_invert(m_dim, detail::monomial_trace_gram(pos.reduced_mask, spec),
                                     spec.p);
        } catch (const std::domain_error&) {
            throw std::logic_error("make_plan: singular reconstruction basis (construction bug)");
        }

        SupportLayout red_lay = make_layout(pos.reduced_mask, spec);
        pos.mu.reserve(m_dim);
        for (std::size_t idx = 0; idx < m_dim; ++idx) {
            std::vector<std::uint8_t> digits(m_dim, 0);
            digits[idx] = 1;
            pos.mu.push_back(unflatten(digits, pos.reduced_mask, spec));
        }

        // basis monomials of F_[i] over F_[h]: products over later failed axes
        std::vector<std::uint32_t> lift_radix;
        std::uint32_t lift_mask = 0;
        for (std::uint32_t j = i; j < h; ++j) {
            lift_radix.push_back(spec.primes[plan.failed[j] - 1]);
            lift_mask |= 1u << plan.failed[j];
        }
        detail::for_each_tuple(lift_radix, [&](const std::vector<std::uint32_t>& q) {
            std::vector<std::uint32_t> exps(spec.n, 0);
            for (std::size_t mq = 0; mq < q.size(); ++mq) exps[plan.failed[i + mq] - 1] = q[mq];
            pos.lift_monomials.push_back(monomial(0, exps, spec));
        });
        try {
            pos.lift_gram_inv = fp_invert(pos.lift_monomials.size(),
                                          detail::monomial_trace_gram(lift_mask, spec), spec.p);
        } catch (const std::domain_error&) {
            throw std::logic_error("make_plan: degenerate trace form (construction bug)");
        }

        const std::size_t q_count = pos.lift_monomials.size();
        pos.lambda.reserve(pos.t_set.size() * q_count);
        for (const auto& gamma : pos.t_set)
            for (std::size_t q = 0; q < q_count; ++q)
                pos.lambda.push_back(solver.express(mul(gamma, pos.lift_monomials[q], spec)));

        plan.positions.push_back(std::move(pos));
    }
    return plan;
}

/// The symbols one helper sends: tr_{K/F_[h]}(gamma v_j c_j) over the plan's
/// download basis, flattened to base-field residues.
inline HelperPayload helper_payload(const RepairPlan& plan, std::uint32_t j,
                                    const FieldElement& c_j) {
    if (!std::binary_search(plan.helpers.begin(), plan.helpers.end(), j))
        throw std::invalid_argument("helper_payload: node is not a helper");
    const TowerSpec& spec = plan.spec;
    HelperPayload out;
    out.helper = j;
    out.symbols.reserve(plan.bandwidth_per_helper);
    FieldElement w = mul(plan.code.v[j - 1], c_j, spec);
    for (const auto& gamma : plan.download_basis) {
        FieldElement tr = subfield_trace(mul(gamma, w, spec), spec.full_mask(),
                                         plan.repair_mask, spec);
        auto digits = flatten(tr, plan.repair_mask, spec);
        out.symbols.insert(out.symbols.end(), digits.begin(), digits.end());
    }
    return out;
}

/// Sequentially recovers the failed coordinates from the helper payloads;
/// exact for any true codeword. Returns the values in failed-set order.
inline std::vector<FieldElement> reconstruct(const RepairPlan& plan,
                                             const std::vector<HelperPayload>& payloads) {
    const TowerSpec& spec = plan.spec;
    const std::uint32_t h = static_cast<std::uint32_t>(plan.failed.size());
    if (payloads.size() != plan.helpers.size())
        throw std::invalid_argument("reconstruct: need exactly one payload per helper");

    // payload symbols back to subfield elements, in helper order
    const std::size_t b_count = plan.download_basis.size();
    SupportLayout rep_lay = make_layout(plan.repair_mask, spec);
    std::vector<std::vector<FieldElement>> bvals(plan.helpers.size());
    std::vector<bool> seen(plan.helpers.size(), false);
    for (const auto& pl : payloads) {
        auto it = std::lower_bound(plan.helpers.begin(), plan.helpers.end(), pl.helper);
        if (it == plan.helpers.end() || *it != pl.helper)
            throw std::invalid_argument("reconstruct: payload from a non-helper");
        std::size_t hidx = static_cast<std::size_t>(it - plan.helpers.begin());
        if (seen[hidx]) throw std::invalid_argument("reconstruct: duplicate payload");
        seen[hidx] = true;
        if (pl.symbols.size() != plan.bandwidth_per_helper)
            throw std::invalid_argument("reconstruct: payload shape mismatch");
        bvals[hidx].reserve(b_count);
        for (std::size_t g = 0; g < b_count; ++g) {
            std::vector<std::uint8_t> digits(
                pl.symbols.begin() + g * rep_lay.size,
                pl.symbols.begin() + (g + 1) * rep_lay.size);
            bvals[hidx].push_back(unflatten(digits, plan.repair_mask, spec));
        }
    }

    std::vector<FieldElement> recovered(h);
    for (std::uint32_t i = 1; i <= h; ++i) {
        const auto& pos = plan.positions[i - 1];
        const std::uint32_t s_i = plan.consts.s[i - 1];
        const std::size_t m_dim = static_cast<std::size_t>(pos.m);
        const std::size_t q_count = pos.lift_monomials.size();

        // helper-side scalars alpha_j^t h_i(alpha_j), in F_[i]
        std::vector<std::vector<FieldElement>> a_jt(plan.helpers.size());
        for (std::size_t hidx = 0; hidx < plan.helpers.size(); ++hidx) {
            std::uint32_t j = plan.helpers[hidx];
            FieldElement cur = pos.h_at[j - 1];
            for (std::uint32_t t = 0; t < s_i; ++t) {
                a_jt[hidx].push_back(cur);
                if (t + 1 < s_i) cur = mul(cur, plan.code.omega[j - 1], spec);
            }
        }
        // already-recovered terms v_j alpha_j^t h_i(alpha_j) c_j, traced later
        std::vector<std::vector<FieldElement>> zc(i - 1);
        for (std::uint32_t e = 0; e + 1 < i; ++e) {
            std::uint32_t j = plan.failed[e];
            FieldElement base = mul(plan.code.v[j - 1],
                                    mul(pos.h_at[j - 1], recovered[e], spec), spec);
            FieldElement cur = base;
            for (std::uint32_t t = 0; t < s_i; ++t) {
                zc[e].push_back(cur);
                if (t + 1 < s_i) cur = mul(cur, plan.code.omega[j - 1], spec);
            }
        }

        std::vector<FieldElement> y(m_dim);
        for (std::size_t g = 0; g < pos.t_set.size(); ++g) {
            const FieldElement& gamma = pos.t_set[g];
            // x_{gamma,j} = tr_{K/F_[i]}(gamma v_j c_j), lifted from the payload
            std::vector<FieldElement> x(plan.helpers.size());
            for (std::size_t hidx = 0; hidx < plan.helpers.size(); ++hidx) {
                std::vector<FieldElement> tau;
                tau.reserve(q_count);
                for (std::size_t q = 0; q < q_count; ++q)
                    tau.push_back(
                        fe_lincomb(bvals[hidx], pos.lambda[g * q_count + q], spec));
                std::vector<FieldElement> xi =
                    detail::apply_fp_matrix(pos.lift_gram_inv, q_count, tau, spec);
                FieldElement acc = fe_zero();
                for (std::size_t q = 0; q < q_count; ++q)
                    acc = add(acc, mul(pos.lift_monomials[q], xi[q], spec), spec);
                x[hidx] = std::move(acc);
            }
            for (std::uint32_t t = 0; t < s_i; ++t) {
                FieldElement acc = fe_zero();
                for (std::size_t hidx = 0; hidx < plan.helpers.size(); ++hidx)
                    acc = add(acc, mul(x[hidx], a_jt[hidx][t], spec), spec);
                for (std::uint32_t e = 0; e + 1 < i; ++e)
                    acc = add(acc,
                              subfield_trace(mul(gamma, zc[e][t], spec), spec.full_mask(),
                                             pos.fi_mask, spec),
                              spec);
                y[g * s_i + t] = neg(acc, spec);
            }
        }

        std::vector<FieldElement> tau = detail::apply_fp_matrix(pos.p_inv, m_dim, y, spec);
        std::vector<FieldElement> coords =
            detail::apply_fp_matrix(pos.gram_inv, m_dim, tau, spec);
        FieldElement w = fe_zero();
        for (std::size_t idx = 0; idx < m_dim; ++idx)
            w = add(w, mul(pos.mu[idx], coords[idx], spec), spec);
        recovered[i - 1] = mul(w, pos.vh_inv, spec);
    }
    return recovered;
}

}  // namespace rsrepair
