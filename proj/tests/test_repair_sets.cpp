#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "rsrepair/repair_sets.hpp"

using namespace rsrepair;

namespace {

std::multiset<std::pair<std::uint32_t, std::vector<std::uint8_t>>> as_set(
    const std::vector<FieldElement>& v) {
    std::multiset<std::pair<std::uint32_t, std::vector<std::uint8_t>>> out;
    for (const auto& e : v) out.emplace(e.support, e.coeffs);
    return out;
}

}  // namespace

TEST_CASE("constants examples") {
    TowerSpec u3 = build_tower(2, TowerMode::universal, 3, 4, 1);
    RepairConstants a = constants(u3, 2, 2, 1);
    CHECK(a.s == std::vector<std::uint32_t>{2, 3, 1});
    CHECK(a.t == std::vector<std::uint64_t>{1, 2, 6});

    TowerSpec u2 = build_tower(2, TowerMode::universal, 2, 3, 1);
    RepairConstants b = constants(u2, 1, 2, 1);
    CHECK(b.s == std::vector<std::uint32_t>{2, 1});
    CHECK(b.t == std::vector<std::uint64_t>{1, 2});

    TowerSpec te = build_tower(2, TowerMode::two_erasure, 2, 4, 2);
    RepairConstants c = constants(te, 2, 2, 2);
    CHECK(c.s == std::vector<std::uint32_t>{1, 2, 1});
    CHECK(c.t == std::vector<std::uint64_t>{1, 1, 2});

    // single-erasure repair of the two-erasure code from d or d+1 helpers
    CHECK(constants(te, 1, 2, 2).s == std::vector<std::uint32_t>{1, 2});
    CHECK(constants(te, 1, 3, 2).s == std::vector<std::uint32_t>{2, 1});

    CHECK_THROWS_AS(constants(u3, 4, 2, 1), std::invalid_argument);   // h > r
    CHECK_THROWS_AS(constants(u3, 2, 3, 1), std::invalid_argument);   // d > n-h
    CHECK_THROWS_AS(constants(u3, 1, 0, 1), std::invalid_argument);   // d < k
    CHECK_THROWS_AS(constants(te, 2, 1, 2), std::invalid_argument);   // d != built d
    CHECK_THROWS_AS(constants(u3, 2, 2, 2), std::invalid_argument);   // wrong k
}

TEST_CASE("W sets") {
    TowerSpec spec = build_tower(2, TowerMode::two_erasure, 2, 4, 2);  // s_1=1, s_2=2
    RepairConstants c = constants(spec, 2, 2, 2);
    std::vector<std::uint32_t> failed{1, 2};

    // s_i = 1: the full power basis {1, alpha, ..., alpha^{p-1}}
    auto w1 = build_W(spec, c, failed, 1);
    REQUIRE(w1.size() == spec.primes[0]);
    for (std::uint32_t e = 0; e < spec.primes[0]; ++e) {
        std::vector<std::uint32_t> exps(spec.n, 0);
        exps[0] = e;
        CHECK(std::count(w1.begin(), w1.end(), monomial(0, exps, spec)) == 1);
    }

    // p_i = 7, s_i = 2, t_i = 1
    TowerSpec te = build_tower(2, TowerMode::two_erasure, 2, 4, 1);
    RepairConstants c2 = constants(te, 2, 2, 1);
    auto w = build_W(te, c2, {1, 2}, 1);
    CHECK(w.size() == 7);
    std::size_t singles = 0;
    for (const auto& e : w) {
        std::size_t nnz = 0;
        for (auto x : e.coeffs) nnz += x != 0;
        if (nnz == 1) ++singles;
    }
    CHECK(singles == 6);  // |W^(1)| = 6, one summed element
}

TEST_CASE("T and S sizes and the covering relation") {
    TowerSpec spec = build_tower(2, TowerMode::two_erasure, 2, 4, 1);
    RepairConstants c = constants(spec, 2, 2, 1);
    std::vector<std::uint32_t> failed{1, 2};

    auto s1 = build_S(spec, c, failed, 1);
    auto s2 = build_S(spec, c, failed, 2);
    CHECK(s1.size() == 273);
    CHECK(s2.size() == 182);

    // s_i |T_i| = D * prod_{j <= i} p_j
    for (std::uint32_t i = 1; i <= 2; ++i) {
        auto t = build_T(spec, c, failed, i);
        std::uint64_t expect = spec.beta_degree;
        for (std::uint32_t j = 1; j <= i; ++j) expect *= spec.primes[failed[j - 1] - 1];
        CHECK(std::uint64_t(c.s[i - 1]) * t.size() == expect);
    }

    // S_i = union of T_i * prod_{j > i} alpha_j^{q_j}
    for (std::uint32_t i = 1; i <= 2; ++i) {
        auto t = build_T(spec, c, failed, i);
        std::vector<FieldElement> rebuilt;
        std::vector<std::uint32_t> radix;
        for (std::uint32_t j = i + 1; j <= 2; ++j) radix.push_back(spec.primes[failed[j - 1] - 1]);
        detail::for_each_tuple(radix, [&](const std::vector<std::uint32_t>& q) {
            std::vector<std::uint32_t> exps(spec.n, 0);
            for (std::size_t m = 0; m < q.size(); ++m) exps[failed[i + m] - 1] = q[m];
            FieldElement shift = monomial(0, exps, spec);
            for (const auto& e : t) rebuilt.push_back(mul(e, shift, spec));
        });
        auto s = build_S(spec, c, failed, i);
        CHECK(as_set(rebuilt) == as_set(s));
    }
}

TEST_CASE("build_W rejects a mis-built tower") {
    // hand-built spec whose prime violates the congruence: 11 != 1 mod 6,
    // so s_2 = 3 does not divide p_2 - 1 = 10
    TowerSpec bad = build_tower(2, TowerMode::universal, 3, 4, 1);
    bad.primes[1] = 11;
    bad.min_polys[1] = find_irreducible(2, 11);
    bad.power_tables[2] = power_sums(bad.min_polys[1], 20);
    RepairConstants c;
    c.h = 2;
    c.d = 2;
    c.k = 1;
    c.s = {2, 3, 1};
    c.t = {1, 2, 6};
    CHECK_THROWS_AS(build_W(bad, c, {1, 2}, 2), std::logic_error);
}

TEST_CASE("h = 1 collapses S to T") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 2, 3, 1);
    RepairConstants c = constants(spec, 1, 2, 1);
    auto t = build_T(spec, c, {2}, 1);
    auto s = build_S(spec, c, {2}, 1);
    CHECK(t == s);
}

TEST_CASE("B and G recursion") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 3, 4, 1);
    RepairConstants c = constants(spec, 2, 2, 1);
    std::vector<std::uint32_t> failed{1, 2};

    auto [b1, g1] = build_BG(spec, c, failed, 1);
    CHECK(as_set(g1) == as_set(build_W(spec, c, failed, 1)));
    CHECK(b1 == build_S(spec, c, failed, 1));  // same elements, same order

    auto [b2, g2] = build_BG(spec, c, failed, 2);
    CHECK(g2.size() == 364);  // (2/3) * (s_1 p_1)(s_2 p_2) = (2/3) * 14 * 39
    CHECK(b2.size() == 364);
    // |B_i| = (D / t_{i+1}) * prod_{j > i, j failed} p_j * |G_i|
    CHECK(b2.size() == (spec.beta_degree / c.t[2]) * g2.size());

    // B_2 is independent and spans span(S_1) + span(S_2)
    MonomialMatrix mb = project(b2, failed, spec);
    CHECK(rank(mb) == b2.size());
    auto s1 = build_S(spec, c, failed, 1);
    auto s2 = build_S(spec, c, failed, 2);
    MonomialMatrix m1 = project(s1, failed, spec);
    MonomialMatrix m2 = project(s2, failed, spec);
    CHECK(span_sum_dim({&mb, &m1, &m2}) == rank(mb));
}

TEST_CASE("every set element lives on beta and failed axes only") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 3, 4, 1);
    RepairConstants c = constants(spec, 2, 2, 1);
    std::vector<std::uint32_t> failed{2, 4};
    std::uint32_t allowed = 1u | 1u << 2 | 1u << 4;
    for (std::uint32_t i = 1; i <= 2; ++i) {
        for (const auto& e : build_W(spec, c, failed, i)) CHECK((e.support & ~allowed) == 0);
        for (const auto& e : build_T(spec, c, failed, i)) CHECK((e.support & ~allowed) == 0);
        for (const auto& e : build_S(spec, c, failed, i)) CHECK((e.support & ~allowed) == 0);
    }
    auto [b, g] = build_BG(spec, c, failed, 2);
    for (const auto& e : b) CHECK((e.support & ~allowed) == 0);
    for (const auto& e : g) CHECK((e.support & ~allowed) == 0);

    // S_i columns are independent
    auto s1 = build_S(spec, c, failed, 1);
    MonomialMatrix m1 = project(s1, failed, spec);
    CHECK(rank(m1) == s1.size());
}
