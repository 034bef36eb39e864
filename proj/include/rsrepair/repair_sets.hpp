#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rsrepair/monomial_space.hpp"
#include "rsrepair/tower.hpp"

namespace rsrepair {

/// The combinatorial constants of the repair scheme: s_i = d+i-k for
/// i = 1..h, the partial products t_1 = 1, t_i = s_1*...*s_{i-1}, and the
/// closing s_{h+1} = D / t_{h+1}. Index identity: {sum u_i t_i} sweeps
/// {0..D-1} when every u_i runs over [0, s_i).
struct RepairConstants {
    std::uint32_t h = 0;
    std::uint32_t d = 0;
    std::uint32_t k = 0;
    std::vector<std::uint32_t> s;  // s[i-1] = s_i, i = 1..h+1
    std::vector<std::uint64_t> t;  // t[i-1] = t_i, i = 1..h+1
};

inline RepairConstants constants(const TowerSpec& spec, std::uint32_t h, std::uint32_t d,
                                 std::uint32_t k) {
    if (k != spec.k) throw std::invalid_argument("constants: k does not match the tower");
    if (h < 1 || d < k || d > spec.n - h)
        throw std::invalid_argument("constants: need 1 <= h and k <= d <= n-h");
    if (spec.mode == TowerMode::universal) {
        if (h > spec.mode_param) throw std::invalid_argument("constants: h exceeds r");
    } else {
        // the two-erasure construction supports h = 2 at the built d, and
        // single erasures from d or d+1 helpers
        std::uint32_t d0 = spec.mode_param;
        bool ok = (h == 2 && d == d0) || (h == 1 && (d == d0 || d == d0 + 1));
        if (!ok) throw std::invalid_argument("constants: (h,d) unsupported by two-erasure tower");
    }
    RepairConstants c;
    c.h = h;
    c.d = d;
    c.k = k;
    c.s.resize(h + 1);
    c.t.resize(h + 1);
    c.t[0] = 1;
    for (std::uint32_t i = 1; i <= h; ++i) {
        c.s[i - 1] = d + i - k;
        if (i < h + 1) c.t[i] = c.t[i - 1] * c.s[i - 1];
    }
    if (spec.beta_degree % c.t[h] != 0)
        throw std::logic_error("constants: t_{h+1} does not divide the beta degree");
    c.s[h] = static_cast<std::uint32_t>(spec.beta_degree / c.t[h]);

    // exact-cover identity, verified by enumeration
    std::vector<bool> hit(spec.beta_degree, false);
    std::vector<std::uint32_t> u(h + 1, 0);
    for (;;) {
        std::uint64_t sum = 0;
        for (std::uint32_t i = 0; i <= h; ++i) sum += std::uint64_t(u[i]) * c.t[i];
        if (sum >= spec.beta_degree || hit[sum])
            throw std::logic_error("constants: index identity violated");
        hit[sum] = true;
        std::uint32_t i = h + 1;
        while (i-- > 0) {
            if (++u[i] < c.s[i]) break;
            u[i] = 0;
            if (i == 0) {
                for (std::uint32_t j = 0; j < spec.beta_degree; ++j)
                    if (!hit[j]) throw std::logic_error("constants: index identity violated");
                return c;
            }
        }
    }
}

namespace detail {

/// Iterate exponent tuples in lexicographic order, first index major.
template <typename F>
void for_each_tuple(const std::vector<std::uint32_t>& radix, F&& f) {
    std::vector<std::uint32_t> digits(radix.size(), 0);
    for (;;) {
        f(digits);
        std::size_t i = radix.size();
        while (i-- > 0) {
            if (++digits[i] < radix[i]) break;
            digits[i] = 0;
            if (i == 0) return;
        }
        if (radix.empty()) return;
    }
}

inline void check_position(const RepairConstants& c, const std::vector<std::uint32_t>& failed,
                           std::uint32_t pos) {
    if (failed.size() != c.h) throw std::invalid_argument("failed set size != h");
    if (pos < 1 || pos > c.h) throw std::invalid_argument("repair position outside [1,h]");
}

}  // namespace detail

/// W_pos = W^(1) union W^(2): the per-generator download seed set of size
/// p_i built from beta^{u t_i} alpha_i^{u + q s_i} ladders plus the single
/// summed element at exponent p_i - 1.
inline std::vector<FieldElement> build_W(const TowerSpec& spec, const RepairConstants& c,
                                         const std::vector<std::uint32_t>& failed,
                                         std::uint32_t pos) {
    detail::check_position(c, failed, pos);
    const std::uint32_t node = failed[pos - 1];
    const std::uint32_t pi = spec.primes.at(node - 1);
    const std::uint32_t si = c.s[pos - 1];
    const std::uint64_t ti = c.t[pos - 1];
    if ((pi - 1) % si != 0) throw std::logic_error("build_W: s_i does not divide p_i - 1");

    std::vector<FieldElement> w;
    w.reserve(pi);
    std::vector<std::uint32_t> exps(spec.n, 0);
    for (std::uint32_t u = 0; u < si; ++u)
        for (std::uint32_t q = 0; q < (pi - 1) / si; ++q) {
            exps[node - 1] = u + q * si;
            w.push_back(monomial(static_cast<std::uint32_t>(u * ti), exps, spec));
        }
    FieldElement top = fe_zero();
    exps[node - 1] = pi - 1;
    for (std::uint32_t u = 0; u < si; ++u)
        top = add(top, monomial(static_cast<std::uint32_t>(u * ti), exps, spec), spec);
    w.push_back(std::move(top));
    return w;
}

namespace detail {

/// Common product form of T_pos and S_pos: W_pos translated by
/// beta^{sum_{j != pos} u_j t_j} * prod alpha_{f_j}^{q_j}, where the q
/// indices run below pos for T and over all other positions for S.
inline std::vector<FieldElement> translated_W(const TowerSpec& spec, const RepairConstants& c,
                                              const std::vector<std::uint32_t>& failed,
                                              std::uint32_t pos, bool upper_q) {
    std::vector<FieldElement> w = build_W(spec, c, failed, pos);

    std::vector<std::uint32_t> u_radix;  // over j in [h+1] \ {pos}
    std::vector<std::uint32_t> u_tpos;   // matching t_j
    for (std::uint32_t j = 1; j <= c.h + 1; ++j) {
        if (j == pos) continue;
        u_radix.push_back(c.s[j - 1]);
        u_tpos.push_back(static_cast<std::uint32_t>(c.t[j - 1]));
    }
    std::vector<std::uint32_t> q_radix;
    std::vector<std::uint32_t> q_node;
    for (std::uint32_t j = 1; j <= c.h; ++j) {
        if (j == pos || (!upper_q && j > pos)) continue;
        q_radix.push_back(spec.primes.at(failed[j - 1] - 1));
        q_node.push_back(failed[j - 1]);
    }

    std::vector<FieldElement> out;
    detail::for_each_tuple(u_radix, [&](const std::vector<std::uint32_t>& u) {
        std::uint32_t beta_exp = 0;
        for (std::size_t i = 0; i < u.size(); ++i) beta_exp += u[i] * u_tpos[i];
        detail::for_each_tuple(q_radix, [&](const std::vector<std::uint32_t>& q) {
            std::vector<std::uint32_t> exps(spec.n, 0);
            for (std::size_t i = 0; i < q.size(); ++i) exps[q_node[i] - 1] = q[i];
            FieldElement shift = monomial(beta_exp, exps, spec);
            for (const auto& elem : w) out.push_back(mul(elem, shift, spec));
        });
    });
    return out;
}

}  // namespace detail

/// T_pos: recovers the pos-th coordinate over F_{[pos]}.
inline std::vector<FieldElement> build_T(const TowerSpec& spec, const RepairConstants& c,
                                         const std::vector<std::uint32_t>& failed,
                                         std::uint32_t pos) {
    return detail::translated_W(spec, c, failed, pos, false);
}

/// S_pos: the symbols downloaded for repairing the pos-th node,
/// |S_pos| = (D / s_pos) * prod_{j in failed} p_j.
inline std::vector<FieldElement> build_S(const TowerSpec& spec, const RepairConstants& c,
                                         const std::vector<std::uint32_t>& failed,
                                         std::uint32_t pos) {
    return detail::translated_W(spec, c, failed, pos, true);
}

/// The recursive bases of the span accounting: G_1 = W_1, then G_i is a
/// deterministic basis of span(G_[i]) + span(W_[i]); B_i is G_i swept over
/// the remaining beta and alpha exponent ranges. Returns (B_upto, G_upto).
inline std::pair<std::vector<FieldElement>, std::vector<FieldElement>> build_BG(
    const TowerSpec& spec, const RepairConstants& c, const std::vector<std::uint32_t>& failed,
    std::uint32_t upto) {
    detail::check_position(c, failed, upto);
    std::vector<FieldElement> g = build_W(spec, c, failed, 1);
    for (std::uint32_t i = 2; i <= upto; ++i) {
        const std::uint32_t node = failed[i - 1];
        const std::uint32_t pi = spec.primes.at(node - 1);
        // G_[i]: G_{i-1} * beta^{u_i t_i} alpha_i^{q_i}
        std::vector<FieldElement> g_up;
        g_up.reserve(g.size() * c.s[i - 1] * pi);
        for (std::uint32_t u = 0; u < c.s[i - 1]; ++u)
            for (std::uint32_t q = 0; q < pi; ++q) {
                std::vector<std::uint32_t> exps(spec.n, 0);
                exps[node - 1] = q;
                FieldElement shift =
                    monomial(static_cast<std::uint32_t>(u * c.t[i - 1]), exps, spec);
                for (const auto& elem : g) g_up.push_back(mul(elem, shift, spec));
            }
        // W_[i]: W_i * beta^{sum_{j<i} u_j t_j} prod_{j<i} alpha_j^{q_j}
        std::vector<FieldElement> w_i = build_W(spec, c, failed, i);
        std::vector<std::uint32_t> u_radix(c.s.begin(), c.s.begin() + (i - 1));
        std::vector<std::uint32_t> q_radix;
        for (std::uint32_t j = 1; j < i; ++j) q_radix.push_back(spec.primes.at(failed[j - 1] - 1));
        std::vector<FieldElement> w_up;
        detail::for_each_tuple(u_radix, [&](const std::vector<std::uint32_t>& u) {
            std::uint32_t beta_exp = 0;
            for (std::size_t m = 0; m < u.size(); ++m)
                beta_exp += u[m] * static_cast<std::uint32_t>(c.t[m]);
            detail::for_each_tuple(q_radix, [&](const std::vector<std::uint32_t>& q) {
                std::vector<std::uint32_t> exps(spec.n, 0);
                for (std::size_t m = 0; m < q.size(); ++m) exps[failed[m] - 1] = q[m];
                FieldElement shift = monomial(beta_exp, exps, spec);
                for (const auto& elem : w_i) w_up.push_back(mul(elem, shift, spec));
            });
        });

        std::vector<std::uint32_t> sub_failed(failed.begin(), failed.begin() + i);
        MonomialMatrix mg = project(g_up, sub_failed, spec);
        MonomialMatrix mw = project(w_up, sub_failed, spec);
        g = extract_basis({&mg, &mw});
    }
    // B_upto by the product form over positions j > upto
    std::vector<std::uint32_t> u_radix(c.s.begin() + upto, c.s.end());
    std::vector<std::uint32_t> t_tail;
    for (std::uint32_t j = upto + 1; j <= c.h + 1; ++j)
        t_tail.push_back(static_cast<std::uint32_t>(c.t[j - 1]));
    std::vector<std::uint32_t> q_radix;
    std::vector<std::uint32_t> q_node;
    for (std::uint32_t j = upto + 1; j <= c.h; ++j) {
        q_radix.push_back(spec.primes.at(failed[j - 1] - 1));
        q_node.push_back(failed[j - 1]);
    }
    std::vector<FieldElement> b;
    detail::for_each_tuple(u_radix, [&](const std::vector<std::uint32_t>& u) {
        std::uint32_t beta_exp = 0;
        for (std::size_t m = 0; m < u.size(); ++m) beta_exp += u[m] * t_tail[m];
        detail::for_each_tuple(q_radix, [&](const std::vector<std::uint32_t>& q) {
            std::vector<std::uint32_t> exps(spec.n, 0);
            for (std::size_t m = 0; m < q.size(); ++m) exps[q_node[m] - 1] = q[m];
            FieldElement shift = monomial(beta_exp, exps, spec);
            for (const auto& elem : g) b.push_back(mul(elem, shift, spec));
        });
    });
    return {std::move(b), std::move(g)};
}

}  // namespace rsrepair
