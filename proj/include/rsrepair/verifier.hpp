#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rsrepair/grs.hpp"
#include "rsrepair/monomial_space.hpp"
#include "rsrepair/repair_engine.hpp"
#include "rsrepair/repair_sets.hpp"

namespace rsrepair {

/// One machine-checked statement: an expected value from a closed formula
/// and a computed value from independent rank/algebra. Passing means exact
/// equality.
struct CheckReport {
    std::string name;
    std::string instance;
    std::int64_t expected = 0;
    std::int64_t computed = 0;
    bool pass = false;
};

namespace detail {

inline CheckReport report(std::string name, std::string instance, std::int64_t expected,
                          std::int64_t computed) {
    CheckReport r;
    r.name = std::move(name);
    r.instance = std::move(instance);
    r.expected = expected;
    r.computed = computed;
    r.pass = expected == computed;
    return r;
}

inline std::string describe(const TowerSpec& spec, const std::vector<std::uint32_t>& failed,
                            std::uint32_t d) {
    std::ostringstream os;
    os << (spec.mode == TowerMode::universal ? "universal r=" : "two-erasure d0=")
       << spec.mode_param << " n=" << spec.n << " k=" << spec.k << " d=" << d << " failed={";
    for (std::size_t i = 0; i < failed.size(); ++i) os << (i ? "," : "") << failed[i];
    os << "}";
    return os.str();
}

inline std::uint64_t failed_primes_product(const TowerSpec& spec,
                                           const std::vector<std::uint32_t>& failed,
                                           std::uint32_t upto) {
    std::uint64_t prod = 1;
    for (std::uint32_t j = 0; j < upto; ++j) prod *= spec.primes[failed[j] - 1];
    return prod;
}

}  // namespace detail

/// Intersection-dimension check for a two-erasure instance, plus the witness
/// that W_{i1} (.) W_{i2} is a full-size independent family inside both spans.
inline std::vector<CheckReport> check_intersection_dim(const TowerSpec& spec,
                                                 const std::vector<std::uint32_t>& failed_pair,
                                                 std::uint32_t d) {
    if (spec.mode != TowerMode::two_erasure)
        throw std::invalid_argument("check_intersection_dim: requires a two-erasure instance");
    RepairConstants c = constants(spec, 2, d, spec.k);
    std::string inst = detail::describe(spec, failed_pair, d);
    std::int64_t pq = static_cast<std::int64_t>(detail::failed_primes_product(spec, failed_pair, 2));

    auto s1 = build_S(spec, c, failed_pair, 1);
    auto s2 = build_S(spec, c, failed_pair, 2);
    MonomialMatrix m1 = project(s1, failed_pair, spec);
    MonomialMatrix m2 = project(s2, failed_pair, spec);

    std::vector<CheckReport> out;
    out.push_back(detail::report("ints.intersection_dim", inst, pq,
                                 static_cast<std::int64_t>(span_intersection_dim(m1, m2))));

    auto ww = set_product(build_W(spec, c, failed_pair, 1), build_W(spec, c, failed_pair, 2), spec);
    out.push_back(detail::report("ints.witness_size", inst, pq,
                                 static_cast<std::int64_t>(ww.size())));
    MonomialMatrix mw = project(ww, failed_pair, spec);
    out.push_back(detail::report("ints.witness_rank", inst, pq,
                                 static_cast<std::int64_t>(rank(mw))));
    // witness lies inside both spans: adding it does not enlarge either
    out.push_back(detail::report("ints.witness_in_span_S1", inst,
                                 static_cast<std::int64_t>(rank(m1)),
                                 static_cast<std::int64_t>(span_sum_dim({&m1, &mw}))));
    out.push_back(detail::report("ints.witness_in_span_S2", inst,
                                 static_cast<std::int64_t>(rank(m2)),
                                 static_cast<std::int64_t>(span_sum_dim({&m2, &mw}))));
    return out;
}

/// Span-sum dimensions of S_1..S_i against (i/(d+i-k)) D prod p_j for each
/// i up to upto_i.
inline std::vector<CheckReport> check_span_sums(const TowerSpec& spec,
                                                const std::vector<std::uint32_t>& failed,
                                                std::uint32_t d, std::uint32_t upto_i) {
    if (spec.mode != TowerMode::universal)
        throw std::invalid_argument("check_span_sums: requires a universal instance");
    const std::uint32_t h = static_cast<std::uint32_t>(failed.size());
    RepairConstants c = constants(spec, h, d, spec.k);
    if (upto_i < 1 || upto_i > h) throw std::invalid_argument("check_span_sums: bad position");
    std::string inst = detail::describe(spec, failed, d);

    std::vector<std::vector<FieldElement>> sets;
    std::vector<MonomialMatrix> mats;
    for (std::uint32_t i = 1; i <= upto_i; ++i) {
        sets.push_back(build_S(spec, c, failed, i));
        mats.push_back(project(sets.back(), failed, spec));
    }
    std::uint64_t space = spec.beta_degree * detail::failed_primes_product(spec, failed, h);
    std::vector<CheckReport> out;
    std::vector<const MonomialMatrix*> ptrs;
    for (std::uint32_t i = 1; i <= upto_i; ++i) {
        ptrs.push_back(&mats[i - 1]);
        std::uint64_t expected = i * space / (d + i - spec.k);
        out.push_back(detail::report("ish.span_sum_dim_i" + std::to_string(i), inst,
                                     static_cast<std::int64_t>(expected),
                                     static_cast<std::int64_t>(span_sum_dim(ptrs))));
    }
    return out;
}

/// Full-rank check of the reconstruction basis {gamma alpha_i^t} at one
/// position: rank must equal [K:F_[i]] = D prod_{j<=i} p_j.
inline std::vector<CheckReport> check_reconstruction_rank(const TowerSpec& spec,
                                                   const std::vector<std::uint32_t>& failed,
                                                   std::uint32_t d, std::uint32_t i) {
    const std::uint32_t h = static_cast<std::uint32_t>(failed.size());
    RepairConstants c = constants(spec, h, d, spec.k);
    if (i < 1 || i > h) throw std::invalid_argument("check_reconstruction_rank: bad position");
    std::string inst = detail::describe(spec, failed, d) + " i=" + std::to_string(i);

    auto t_set = build_T(spec, c, failed, i);
    std::int64_t expected = static_cast<std::int64_t>(
        spec.beta_degree * detail::failed_primes_product(spec, failed, i));

    std::vector<CheckReport> out;
    out.push_back(detail::report("props.size_check", inst, expected,
                                 static_cast<std::int64_t>(std::uint64_t(c.s[i - 1]) *
                                                           t_set.size())));
    std::vector<FieldElement> basis;
    basis.reserve(t_set.size() * c.s[i - 1]);
    const FieldElement& alpha_i = fe_alpha(failed[i - 1], spec);
    for (const auto& gamma : t_set) {
        FieldElement cur = gamma;
        for (std::uint32_t t = 0; t < c.s[i - 1]; ++t) {
            basis.push_back(cur);
            if (t + 1 < c.s[i - 1]) cur = mul(cur, alpha_i, spec);
        }
    }
    std::vector<std::uint32_t> sub_failed(failed.begin(), failed.begin() + i);
    MonomialMatrix m = project(basis, sub_failed, spec);
    out.push_back(detail::report("props.basis_rank", inst, expected,
                                 static_cast<std::int64_t>(rank(m))));
    return out;
}

/// Download-basis conditions for every i: B_i independent of the announced size,
/// span(B_i) contains every span(S_j) for j <= i, and G_i is supported on
/// the permitted beta exponents over the first i failed axes.
inline std::vector<CheckReport> check_download_basis(const TowerSpec& spec,
                                             const std::vector<std::uint32_t>& failed,
                                             std::uint32_t d) {
    if (spec.mode != TowerMode::universal)
        throw std::invalid_argument("check_download_basis: requires a universal instance");
    const std::uint32_t h = static_cast<std::uint32_t>(failed.size());
    RepairConstants c = constants(spec, h, d, spec.k);
    std::string inst = detail::describe(spec, failed, d);

    std::vector<CheckReport> out;
    std::vector<std::vector<FieldElement>> s_sets;
    std::vector<MonomialMatrix> s_mats;
    for (std::uint32_t j = 1; j <= h; ++j) {
        s_sets.push_back(build_S(spec, c, failed, j));
        s_mats.push_back(project(s_sets.back(), failed, spec));
    }
    std::uint64_t space = spec.beta_degree * detail::failed_primes_product(spec, failed, h);

    for (std::uint32_t i = 1; i <= h; ++i) {
        std::string inst_i = inst + " i=" + std::to_string(i);
        auto [b, g] = build_BG(spec, c, failed, i);
        std::int64_t b_expected = static_cast<std::int64_t>(i * space / (d + i - spec.k));
        out.push_back(detail::report("claim1.b_size_i" + std::to_string(i), inst_i, b_expected,
                                     static_cast<std::int64_t>(b.size())));
        MonomialMatrix mb = project(b, failed, spec);
        out.push_back(detail::report("claim1.b_rank_i" + std::to_string(i), inst_i, b_expected,
                                     static_cast<std::int64_t>(rank(mb))));
        std::int64_t mb_rank = static_cast<std::int64_t>(rank(mb));
        for (std::uint32_t j = 1; j <= i; ++j)
            out.push_back(detail::report(
                "claim1.b_contains_s" + std::to_string(j) + "_i" + std::to_string(i), inst_i,
                mb_rank, static_cast<std::int64_t>(span_sum_dim({&mb, &s_mats[j - 1]}))));

        // |G_i| = (i/(d+i-k)) prod_{j<=i} s_j p_j, with prod s_j = t_{i+1}
        std::uint64_t g_expected =
            i * (c.t[i] * detail::failed_primes_product(spec, failed, i)) / (d + i - spec.k);
        out.push_back(detail::report("claim1.g_size_i" + std::to_string(i), inst_i,
                                     static_cast<std::int64_t>(g_expected),
                                     static_cast<std::int64_t>(g.size())));
        std::uint32_t reduced_mask = 1;
        for (std::uint32_t m = 0; m < i; ++m) reduced_mask |= 1u << failed[m];
        SupportLayout lay = make_layout(reduced_mask, spec);
        std::int64_t violations = 0;
        for (const auto& elem : g) {
            auto digits = flatten(elem, reduced_mask, spec);
            for (std::uint64_t idx = 0; idx < lay.size; ++idx) {
                std::uint32_t beta_exp = static_cast<std::uint32_t>(idx / lay.strides[0]);
                if (digits[idx] && beta_exp >= c.t[i]) ++violations;
            }
        }
        out.push_back(detail::report("claim1.g_support_i" + std::to_string(i), inst_i, 0,
                                     violations));
    }
    return out;
}

/// Exact vanishing of the dual codewords and their traced forms on random
/// codewords. Computed values count violations; all must be zero.
inline std::vector<CheckReport> check_duality(const TowerSpec& spec, const CodeSpec& code,
                                              const std::vector<std::uint32_t>& failed,
                                              const std::vector<std::uint32_t>& helpers,
                                              std::uint32_t trials, std::uint64_t seed) {
    const std::uint32_t h = static_cast<std::uint32_t>(failed.size());
    const std::uint32_t d = static_cast<std::uint32_t>(helpers.size());
    RepairConstants c = constants(spec, h, d, spec.k);
    std::string inst = detail::describe(spec, failed, d);
    std::mt19937_64 rng(seed);

    std::uint32_t repair_mask = 0;
    for (std::uint32_t j = 1; j <= spec.n; ++j)
        if (std::find(failed.begin(), failed.end(), j) == failed.end()) repair_mask |= 1u << j;

    // annihilators and the per-position T/S sets
    std::vector<KPoly> h_polys;
    std::vector<std::vector<FieldElement>> t_sets, s_sets;
    std::vector<std::uint32_t> fi_masks;
    for (std::uint32_t i = 1; i <= h; ++i) {
        std::vector<FieldElement> pts;
        for (std::uint32_t j = 1; j <= spec.n; ++j) {
            bool in_r = std::find(helpers.begin(), helpers.end(), j) != helpers.end();
            bool in_fi = false;
            for (std::uint32_t m = 0; m < i; ++m) in_fi |= failed[m] == j;
            if (!in_r && !in_fi) pts.push_back(code.omega[j - 1]);
        }
        h_polys.push_back(annihilator(pts, spec));
        t_sets.push_back(build_T(spec, c, failed, i));
        s_sets.push_back(build_S(spec, c, failed, i));
        std::uint32_t fi = repair_mask;
        for (std::uint32_t j = i; j < h; ++j) fi |= 1u << failed[j];
        fi_masks.push_back(fi);
    }

    std::int64_t plain_bad = 0, traced_t_bad = 0, traced_s_bad = 0;
    SupportLayout full = make_layout(spec.full_mask(), spec);
    for (std::uint32_t trial = 0; trial < trials; ++trial) {
        std::vector<FieldElement> msg;
        for (std::uint32_t i = 0; i < code.k; ++i) {
            std::vector<std::uint8_t> digits(full.size);
            for (auto& dg : digits) dg = static_cast<std::uint8_t>(rng() % spec.p);
            msg.push_back(unflatten(digits, spec.full_mask(), spec));
        }
        auto cw = encode(msg, code, spec);

        // bare dual codewords x^t, deg < n-k
        for (std::uint32_t t = 0; t + 1 <= code.n - code.k; ++t)
            if (!inner_product(dual_codeword(t, annihilator({}, spec), code, spec), cw, spec)
                     .is_zero())
                ++plain_bad;

        for (std::uint32_t i = 1; i <= h; ++i) {
            for (std::uint32_t t = 0; t < c.s[i - 1]; ++t) {
                auto dual = dual_codeword(t, h_polys[i - 1], code, spec);
                FieldElement ip = inner_product(dual, cw, spec);
                if (!ip.is_zero()) ++plain_bad;

                std::vector<FieldElement> dc;  // dual_j * c_j, shared across gammas
                dc.reserve(code.n);
                for (std::uint32_t j = 0; j < code.n; ++j) dc.push_back(mul(dual[j], cw[j], spec));

                // traced identity over T_i down to F_[i], summed per node
                for (const auto& gamma : t_sets[i - 1]) {
                    FieldElement acc = fe_zero();
                    for (std::uint32_t j = 0; j < code.n; ++j)
                        acc = add(acc,
                                  subfield_trace(mul(gamma, dc[j], spec), spec.full_mask(),
                                                 fi_masks[i - 1], spec),
                                  spec);
                    if (!acc.is_zero()) ++traced_t_bad;
                }
                // traced identity over a sample of S_i down to F_[h]
                for (std::uint32_t rep = 0; rep < 4; ++rep) {
                    const auto& gamma = s_sets[i - 1][rng() % s_sets[i - 1].size()];
                    FieldElement acc = fe_zero();
                    for (std::uint32_t j = 0; j < code.n; ++j)
                        acc = add(acc,
                                  subfield_trace(mul(gamma, dc[j], spec), spec.full_mask(),
                                                 repair_mask, spec),
                                  spec);
                    if (!acc.is_zero()) ++traced_s_bad;
                }
            }
        }
    }
    std::vector<CheckReport> out;
    out.push_back(detail::report("duality.plain_inner_products", inst, 0, plain_bad));
    out.push_back(detail::report("duality.traced_over_T", inst, 0, traced_t_bad));
    out.push_back(detail::report("duality.traced_over_S", inst, 0, traced_s_bad));
    return out;
}

}  // namespace rsrepair
