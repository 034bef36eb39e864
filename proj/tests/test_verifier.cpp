#include <catch2/catch_amalgamated.hpp>

#include "rsrepair/verifier.hpp"

using namespace rsrepair;

namespace {

bool all_pass(const std::vector<CheckReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return !reports.empty();
}

}  // namespace

TEST_CASE("intersection dimensions across all failed pairs") {
    TowerSpec spec = build_tower(2, TowerMode::two_erasure, 2, 4, 1);  // primes 7,13,19,31
    std::vector<std::int64_t> expected{91, 133, 217, 247, 403, 589};
    std::size_t at = 0;
    for (std::uint32_t a = 1; a <= 4; ++a)
        for (std::uint32_t b = a + 1; b <= 4; ++b) {
            auto reports = check_intersection_dim(spec, {a, b}, 2);
            REQUIRE(all_pass(reports));
            CHECK(reports[0].computed == expected[at]);
            ++at;
        }
}

TEST_CASE("intersection check rejects universal instances") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 2, 3, 1);
    CHECK_THROWS_AS(check_intersection_dim(spec, {1, 2}, 1), std::invalid_argument);
}

TEST_CASE("span sums at r=3") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 3, 4, 1);
    auto reports = check_span_sums(spec, {1, 2}, 2, 2);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].computed == 273);
    CHECK(reports[1].computed == 364);
    CHECK(all_pass(reports));
}

TEST_CASE("reconstruction bases reach full rank") {
    TowerSpec u2 = build_tower(2, TowerMode::universal, 2, 3, 1);
    auto r1 = check_reconstruction_rank(u2, {1}, 2, 1);
    REQUIRE(all_pass(r1));
    CHECK(r1[1].computed == 6);  // D p_1 = 2*3

    TowerSpec u3 = build_tower(2, TowerMode::universal, 3, 4, 1);
    auto r2 = check_reconstruction_rank(u3, {1, 2}, 2, 2);
    REQUIRE(all_pass(r2));
    CHECK(r2[1].computed == 546);  // 6*7*13
}

TEST_CASE("download-basis conditions hold at the r=3 instance") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 3, 4, 1);
    auto reports = check_download_basis(spec, {1, 2}, 2);
    REQUIRE(all_pass(reports));
    for (const auto& r : reports)
        if (r.name == "claim1.b_size_i2") CHECK(r.computed == 364);
}

TEST_CASE("duality checks vanish exactly") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 2, 4, 2);
    CodeSpec code = make_code(spec);
    auto reports = check_duality(spec, code, {1, 2}, {3, 4}, 10, 99);
    REQUIRE(all_pass(reports));
    for (const auto& r : reports) CHECK(r.computed == 0);
}
