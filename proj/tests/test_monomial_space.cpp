#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rsrepair/monomial_space.hpp"
#include "rsrepair/repair_sets.hpp"

using namespace rsrepair;

TEST_CASE("project basics") {
    TowerSpec spec = build_tower(2, TowerMode::two_erasure, 2, 4, 1);  // primes 7,13,19,31
    MonomialMatrix unit = project({fe_one(spec)}, {1, 2}, spec);
    CHECK(unit.ncols == 1);
    CHECK(unit.dim == spec.beta_degree * 7 * 13);
    CHECK(unit.bits[0] == 1);  // single unit at index (u=0, e=0)

    // support violation: alpha_3 is not in the index space
    CHECK_THROWS_AS(project({fe_alpha(3, spec)}, {1, 2}, spec), std::invalid_argument);
    CHECK_THROWS_AS(project({fe_one(spec)}, {2, 1}, spec), std::invalid_argument);
}

TEST_CASE("projected W^(2) column carries s_i ones") {
    TowerSpec spec = build_tower(2, TowerMode::two_erasure, 2, 4, 1);  // s_1=2, s_2=3
    RepairConstants c = constants(spec, 2, 2, 1);
    auto w1 = build_W(spec, c, {1, 2}, 1);
    REQUIRE(w1.size() == 7);
    MonomialMatrix m = project({w1.back()}, {1, 2}, spec);
    std::size_t ones = 0;
    for (std::size_t w = 0; w < m.words; ++w) ones += std::popcount(m.bits[w]);
    CHECK(ones == c.s[0]);
}

TEST_CASE("rank basics") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 2, 3, 1);
    std::vector<FieldElement> monos;
    for (std::uint32_t u = 0; u < 2; ++u)
        for (std::uint32_t e = 0; e < 3; ++e) monos.push_back(monomial(u, {e, 0, 0}, spec));
    MonomialMatrix m = project(monos, {1}, spec);
    CHECK(rank(m) == monos.size());

    monos.push_back(monos.front());  // duplicate column
    MonomialMatrix m2 = project(monos, {1}, spec);
    CHECK(rank(m2) == monos.size() - 1);
}

TEST_CASE("S-set ranks and span dimensions match the closed formulas") {
    TowerSpec spec = build_tower(2, TowerMode::two_erasure, 2, 4, 1);
    RepairConstants c = constants(spec, 2, 2, 1);
    std::vector<std::uint32_t> failed{1, 2};
    auto s1 = build_S(spec, c, failed, 1);
    auto s2 = build_S(spec, c, failed, 2);
    CHECK(s1.size() == 273);  // s_2 * p_1 * p_2 = 3 * 91
    CHECK(s2.size() == 182);  // s_1 * p_1 * p_2 = 2 * 91

    MonomialMatrix m1 = project(s1, failed, spec);
    MonomialMatrix m2 = project(s2, failed, spec);
    CHECK(m1.ncols == s1.size());
    CHECK(rank(m1) == 273);
    CHECK(rank(m2) == 182);
    CHECK(span_sum_dim({&m1, &m2}) == 364);          // 2 s_1 p_1 p_2
    CHECK(span_intersection_dim(m1, m2) == 91);      // p_1 p_2
    CHECK(span_sum_dim({&m1}) == rank(m1));

    MonomialMatrix wrong = project({fe_one(spec)}, {1, 3}, spec);
    CHECK_THROWS_AS(span_sum_dim({&m1, &wrong}), std::invalid_argument);
}

TEST_CASE("extract_basis") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 3, 4, 1);  // primes 7,13,19,31
    RepairConstants c = constants(spec, 2, 2, 1);
    std::vector<std::uint32_t> failed{1, 2};
    auto s1 = build_S(spec, c, failed, 1);
    auto s2 = build_S(spec, c, failed, 2);
    MonomialMatrix m1 = project(s1, failed, spec);
    MonomialMatrix m2 = project(s2, failed, spec);

    auto basis1 = extract_basis({&m1});
    CHECK(basis1.size() == rank(m1));

    auto merged = extract_basis({&m1, &m2});
    CHECK(merged.size() == span_sum_dim({&m1, &m2}));
    CHECK(merged.size() == 364);  // (2/3) * 6 * 7 * 13
}

TEST_CASE("set products") {
    TowerSpec spec = build_tower(2, TowerMode::two_erasure, 2, 4, 1);
    RepairConstants c = constants(spec, 2, 2, 1);
    std::vector<std::uint32_t> failed{1, 2};
    auto w1 = build_W(spec, c, failed, 1);
    auto w2 = build_W(spec, c, failed, 2);

    auto scaled = set_product({fe_one(spec)}, w2, spec);
    CHECK(scaled == w2);

    auto ww = set_product(w1, w2, spec);
    CHECK(ww.size() == std::size_t(7) * 13);  // |W1| * |W2| = p_1 p_2
    MonomialMatrix m = project(ww, failed, spec);
    CHECK(rank(m) == ww.size());  // elements are F_p-independent
}

TEST_CASE("rank is subadditive and intersections are nonnegative") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 2, 3, 1);
    std::mt19937_64 rng(22);
    std::uint32_t space = 0b0011;
    SupportLayout lay = make_layout(space, spec);
    for (int trial = 0; trial < 15; ++trial) {
        auto draw = [&](std::size_t count) {
            std::vector<FieldElement> v;
            for (std::size_t i = 0; i < count; ++i) {
                std::vector<std::uint8_t> digits(lay.size);
                for (auto& d : digits) d = static_cast<std::uint8_t>(rng() % spec.p);
                v.push_back(unflatten(digits, space, spec));
            }
            return v;
        };
        MonomialMatrix a = project(draw(1 + rng() % 5), {1}, spec);
        MonomialMatrix b = project(draw(1 + rng() % 5), {1}, spec);
        std::uint64_t ra = rank(a), rb = rank(b), rab = span_sum_dim({&a, &b});
        CHECK(rab <= ra + rb);
        CHECK(rab >= std::max(ra, rb));
        CHECK(span_intersection_dim(a, b) == ra + rb - rab);
    }
}

TEST_CASE("F_p rank agrees with full-field independence on a tiny tower") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 1, 2, 1);  // D=1, primes 2,3
    std::mt19937_64 rng(21);
    std::vector<std::uint32_t> failed{1};
    std::uint32_t space = 0b0011;  // beta, alpha_1
    std::uint32_t helper_mask = spec.alpha_mask({2});
    SupportLayout lay = make_layout(space, spec);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<FieldElement> elems;
        std::size_t count = 1 + rng() % 4;
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<std::uint8_t> digits(lay.size);
            for (auto& d : digits) d = static_cast<std::uint8_t>(rng() % spec.p);
            elems.push_back(unflatten(digits, space, spec));
        }
        MonomialMatrix m = project(elems, failed, spec);
        std::uint64_t fp_rank = rank(m);

        // independence over F_{[h]} = F_p(alpha_2): expand each element by a
        // subfield basis and compare F_p ranks in the full tower
        std::uint64_t sub_deg = spec.mask_dim(helper_mask);
        SupportLayout sl = make_layout(helper_mask, spec);
        detail::Echelon ech(spec.ext_degree, spec.p);
        std::uint64_t full_rank = 0;
        for (const auto& e : elems) {
            for (std::uint64_t b = 0; b < sl.size; ++b) {
                std::vector<std::uint8_t> digits(sl.size, 0);
                digits[b] = 1;
                FieldElement prod = mul(e, unflatten(digits, helper_mask, spec), spec);
                if (ech.add_bits(detail::pack_column(flatten(prod, spec.full_mask(), spec))))
                    ++full_rank;
            }
        }
        bool indep_full = full_rank == elems.size() * sub_deg;
        bool indep_fp = fp_rank == elems.size();
        CHECK(indep_full == indep_fp);
    }
}
