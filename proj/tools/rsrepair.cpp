// Command-line front end: builds code specs, runs repair experiments on the
// in-process cluster, emits bandwidth tables, and drives the verifier.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rsrepair/harness.hpp"

using namespace rsrepair;

namespace {

int cmd_build(const std::string& mode, std::uint32_t p, std::uint32_t r, std::uint32_t d,
              std::uint32_t n, std::uint32_t k, const std::string& out) {
    TowerMode m;
    std::uint32_t param;
    if (mode == "universal") {
        m = TowerMode::universal;
        param = r ? r : n - k;  // r defaults to n - k
    } else if (mode == "two-erasure") {
        m = TowerMode::two_erasure;
        param = d;
    } else {
        std::cerr << "error: --mode must be universal or two-erasure\n";
        return 2;
    }
    TowerSpec spec;
    try {
        spec = build_tower(p, m, param, n, k);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::string text = spec_to_json(spec).dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text_file(out, text);
        std::cout << "wrote " << out << " (l = " << spec.ext_degree << ")\n";
    }
    return 0;
}

int cmd_repair(const std::string& spec_path, std::vector<std::uint32_t> failed,
               std::vector<std::uint32_t> helpers, std::uint32_t trials,
               std::uint64_t seed, const std::string& out) {
    TowerSpec spec = load_spec_file(spec_path);
    std::sort(failed.begin(), failed.end());
    std::sort(helpers.begin(), helpers.end());
    RepairOutcome outcome;
    try {
        outcome = run_repair(spec, failed, helpers, trials, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    if (!out.empty()) write_text_file(out, outcome.transcript.dump(2) + "\n");
    std::cout << "verdict: " << (outcome.pass ? "pass" : "fail")
              << "  downloaded " << outcome.metered_total << " symbols/trial"
              << "  cut-set " << outcome.transcript["cutset_bound"].get<std::uint64_t>() << '\n';
    return outcome.pass ? 0 : 1;
}

int cmd_table(const std::string& spec_path, const std::string& out) {
    TowerSpec spec = load_spec_file(spec_path);
    std::string csv = table_csv(bandwidth_table(spec));
    if (out.empty())
        std::cout << csv;
    else
        write_text_file(out, csv);
    return 0;
}

int cmd_verify(const std::string& spec_path, const std::string& which, std::uint32_t trials,
               std::uint64_t seed, const std::string& out) {
    TowerSpec spec = load_spec_file(spec_path);
    CheckSelection sel;
    try {
        sel = parse_selection(which);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::vector<CheckReport> reports;
    try {
        reports = run_checks(spec, sel, trials, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::cout << render_report_table(reports);
    if (!out.empty()) write_text_file(out, reports_to_json(spec, which, reports).dump(2) + "\n");
    for (const auto& r : reports)
        if (!r.pass) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reed-Solomon repair over composite field towers"};
    app.require_subcommand(1);

    std::uint32_t p = 2, r = 0, d = 0, n = 0, k = 0, trials = 10;
    std::uint64_t seed = 1;
    std::string mode = "universal", out, spec_path, which = "all";
    std::vector<std::uint32_t> failed, helpers;

    auto* build = app.add_subcommand("build", "construct a code spec file");
    build->add_option("--p", p, "base prime (default 2)");
    build->add_option("--mode", mode, "universal | two-erasure")->required();
    build->add_option("--r", r, "number of parities (universal; defaults to n-k)");
    build->add_option("--d", d, "helper count the two-erasure tower is built for");
    build->add_option("--n", n, "code length")->required();
    build->add_option("--k", k, "code dimension")->required();
    build->add_option("--out", out, "output spec path (stdout if omitted)");

    auto* repair = app.add_subcommand("repair", "repair failed nodes on a simulated cluster");
    repair->add_option("spec", spec_path, "spec file from build")->required();
    repair->add_option("--failed", failed, "failed node ids")->required()->delimiter(',');
    repair->add_option("--helpers", helpers, "helper node ids")->required()->delimiter(',');
    repair->add_option("--trials", trials, "random codewords to run (default 10)");
    repair->add_option("--seed", seed, "PRNG seed (default 1)");
    repair->add_option("--out", out, "transcript path");

    auto* table = app.add_subcommand("table", "bandwidth vs cut-set for every legal (h,d)");
    table->add_option("spec", spec_path, "spec file from build")->required();
    table->add_option("--out", out, "CSV path (stdout if omitted)");

    auto* verify = app.add_subcommand("verify", "machine-check the span and duality claims");
    verify->add_option("spec", spec_path, "spec file from build")->required();
    verify->add_option("which", which,
                       "all | ints (intersection dims) | ish (span sums) | props "
                       "(reconstruction rank) | claim1 (download basis) | duality");
    verify->add_option("--trials", trials, "duality trials (default 10)");
    verify->add_option("--seed", seed, "PRNG seed (default 1)");
    verify->add_option("--out", out, "JSON report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(mode, p, r, d, n, k, out);
        if (repair->parsed()) return cmd_repair(spec_path, failed, helpers, trials, seed, out);
        if (table->parsed()) return cmd_table(spec_path, out);
        if (verify->parsed()) return cmd_verify(spec_path, which, trials, seed, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
