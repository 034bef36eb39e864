#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rsrepair/harness.hpp"

using namespace rsrepair;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("spec json round trip") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 2, 3, 1);
    json j = spec_to_json(spec);
    CHECK(j["subpacketization"] == 210);
    CHECK(j["primes"] == json({3, 5, 7}));
    TowerSpec back = tower_from_json(j);
    CHECK(back.ext_degree == spec.ext_degree);
    CHECK(back.min_polys == spec.min_polys);

    TowerSpec te = build_tower(2, TowerMode::two_erasure, 2, 4, 2);
    json jt = spec_to_json(te);
    CHECK(jt["subpacketization"] == 2310);
    CHECK(jt["d"] == 2);
    CHECK(tower_from_json(jt).primes == te.primes);

    // edited files are rejected
    json bad = j;
    bad["primes"] = json({3, 5, 11});
    CHECK_THROWS_AS(tower_from_json(bad), std::runtime_error);
}

TEST_CASE("run_repair passes and meters the cut-set value") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 2, 3, 1);
    RepairOutcome out = run_repair(spec, {2}, {1, 3}, 3, 7);
    CHECK(out.pass);
    CHECK(out.metered_total == 210);
    CHECK(out.transcript["verdict"] == "pass");
    CHECK(out.transcript["bandwidth_per_helper"] == 105);
    CHECK(out.transcript["trials_detail"].size() == 3);

    CHECK_THROWS_AS(run_repair(spec, {1}, {1, 3}, 1, 7), std::invalid_argument);
}

TEST_CASE("bandwidth table rows and ratios") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 2, 4, 2);
    auto rows = bandwidth_table(spec);
    REQUIRE(rows.size() == 3);  // (1,2), (1,3), (2,2)
    CHECK(rows[0].h == 1);
    CHECK(rows[0].d == 2);
    CHECK(rows[1].d == 3);
    CHECK(rows[1].per_helper == 1155);  // l/2
    CHECK(rows[2].h == 2);
    for (const auto& r : rows) {
        CHECK(r.optimal);
        CHECK(r.total == r.cutset);
    }
    std::string csv = table_csv(rows);
    CHECK(csv.find("1,2,") != std::string::npos);
    CHECK(csv.find("naive_k_nodes") != std::string::npos);

    TowerSpec small = build_tower(2, TowerMode::universal, 2, 3, 1);
    auto rows2 = bandwidth_table(small);
    REQUIRE(rows2.size() == 3);  // (1,1), (1,2), (2,1)
    CHECK(rows2[0].d == 1);
    CHECK(rows2[2].h == 2);
}

TEST_CASE("run_checks drives the verifier by mode") {
    TowerSpec te = build_tower(2, TowerMode::two_erasure, 2, 4, 1);
    auto ints = run_checks(te, CheckSelection::ints, 2, 5);
    bool found91 = false, found589 = false;
    for (const auto& r : ints) {
        CHECK(r.pass);
        if (r.name == "ints.intersection_dim") {
            found91 |= r.computed == 91;
            found589 |= r.computed == 589;
        }
    }
    CHECK(found91);
    CHECK(found589);

    CHECK_THROWS_AS(run_checks(te, CheckSelection::ish, 2, 5), std::invalid_argument);
    TowerSpec uni = build_tower(2, TowerMode::universal, 2, 3, 1);
    CHECK_THROWS_AS(run_checks(uni, CheckSelection::ints, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(parse_selection("bogus"), std::invalid_argument);

    auto props = run_checks(uni, CheckSelection::props, 2, 5);
    CHECK(!props.empty());
    for (const auto& r : props) CHECK(r.pass);
}

TEST_CASE("identical seeds produce byte-identical artifacts") {
    TowerSpec spec = build_tower(2, TowerMode::universal, 2, 3, 1);
    std::string a = run_repair(spec, {1}, {2, 3}, 2, 42).transcript.dump(2);
    std::string b = run_repair(spec, {1}, {2, 3}, 2, 42).transcript.dump(2);
    CHECK(a == b);
    std::string c = run_repair(spec, {1}, {2, 3}, 2, 43).transcript.dump(2);
    CHECK(a != c);

    CHECK(spec_to_json(spec).dump(2) == spec_to_json(build_tower(2, TowerMode::universal, 2, 3, 1)).dump(2));
}

TEST_CASE("cli binary end to end") {
    std::string dir = "/tmp/rsrepair_cli_test";
    REQUIRE(std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) == 0);
    std::string cli = RSREPAIR_CLI_PATH;
    std::string spec = dir + "/spec.json";

    REQUIRE(std::system((cli + " build --mode universal --n 3 --k 1 --out " + spec).c_str()) == 0);
    std::string spec_text = slurp(spec);
    CHECK(spec_text.find("\"subpacketization\": 210") != std::string::npos);

    std::string tr1 = dir + "/t1.json", tr2 = dir + "/t2.json";
    REQUIRE(std::system((cli + " repair " + spec +
                         " --failed 2 --helpers 1,3 --trials 2 --seed 9 --out " + tr1 +
                         " > /dev/null")
                            .c_str()) == 0);
    REQUIRE(std::system((cli + " repair " + spec +
                         " --failed 2 --helpers 1,3 --trials 2 --seed 9 --out " + tr2 +
                         " > /dev/null")
                            .c_str()) == 0);
    CHECK(slurp(tr1) == slurp(tr2));

    std::string csv = dir + "/table.csv";
    REQUIRE(std::system((cli + " table " + spec + " --out " + csv).c_str()) == 0);
    CHECK(slurp(csv).find("h,d,") == 0);
    REQUIRE(std::system((cli + " table " + spec + " --out " + csv + ".again").c_str()) == 0);
    CHECK(slurp(csv) == slurp(csv + ".again"));

    REQUIRE(std::system((cli + " verify " + spec + " props --out " + dir +
                         "/report.json > /dev/null")
                            .c_str()) == 0);
    CHECK(slurp(dir + "/report.json").find("\"all_pass\": true") != std::string::npos);
    REQUIRE(std::system((cli + " verify " + spec + " props --out " + dir +
                         "/report2.json > /dev/null")
                            .c_str()) == 0);
    CHECK(slurp(dir + "/report.json") == slurp(dir + "/report2.json"));

    // usage errors
    CHECK(std::system((cli + " verify " + spec + " bogus 2>/dev/null").c_str()) != 0);
    CHECK(std::system((cli + " repair " + spec +
                       " --failed 1 --helpers 1,3 2>/dev/null")
                          .c_str()) != 0);
    CHECK(std::system((cli + " build --mode universal --n 3 --k 3 2>/dev/null").c_str()) != 0);
}
