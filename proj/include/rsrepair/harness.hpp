#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsrepair/repair_engine.hpp"
#include "rsrepair/verifier.hpp"

namespace rsrepair {

using nlohmann::json;

/// Message coefficients are drawn with mt19937_64(seed): one generator call
/// per base-field digit, reduced mod p, filling the canonical monomial order
/// (u major, then e_1..e_n). Identical seeds reproduce byte-identical files.
inline FieldElement random_element(const TowerSpec& spec, std::mt19937_64& rng) {
    SupportLayout lay = make_layout(spec.full_mask(), spec);
    std::vector<std::uint8_t> digits(lay.size);
    for (auto& d : digits) d = static_cast<std::uint8_t>(rng() % spec.p);
    return unflatten(digits, spec.full_mask(), spec);
}

inline const char* mode_name(TowerMode mode) {
    return mode == TowerMode::universal ? "universal" : "two-erasure";
}

inline json spec_to_json(const TowerSpec& spec) {
    json j;
    j["format"] = "rs-tower-spec/1";
    j["p"] = spec.p;
    j["mode"] = mode_name(spec.mode);
    j[spec.mode == TowerMode::universal ? "r" : "d"] = spec.mode_param;
    j["n"] = spec.n;
    j["k"] = spec.k;
    j["beta_degree"] = spec.beta_degree;
    j["primes"] = spec.primes;
    json polys = json::array();
    for (const auto& f : spec.min_polys) polys.push_back(f.coeffs);
    j["min_polys"] = polys;
    j["beta_poly"] = spec.beta_poly.coeffs;
    j["subpacketization"] = spec.ext_degree;
    return j;
}

/// Rebuild the tower deterministically from the file parameters and verify
/// the stored polynomials and primes agree; edited files are rejected.
inline TowerSpec tower_from_json(const json& j) {
    if (!j.contains("format") || j["format"] != "rs-tower-spec/1")
        throw std::runtime_error("spec file: unknown format");
    TowerMode mode;
    std::uint32_t param;
    std::string mode_str = j.at("mode");
    if (mode_str == "universal") {
        mode = TowerMode::universal;
        param = j.at("r");
    } else if (mode_str == "two-erasure") {
        mode = TowerMode::two_erasure;
        param = j.at("d");
    } else {
        throw std::runtime_error("spec file: unknown mode " + mode_str);
    }
    TowerSpec spec = build_tower(j.at("p"), mode, param, j.at("n"), j.at("k"));
    if (j.at("beta_degree") != spec.beta_degree ||
        j.at("primes").get<std::vector<std::uint32_t>>() != spec.primes ||
        j.at("beta_poly").get<std::vector<Residue>>() != spec.beta_poly.coeffs ||
        j.at("subpacketization") != spec.ext_degree)
        throw std::runtime_error("spec file: inconsistent with the deterministic construction");
    auto polys = j.at("min_polys");
    if (polys.size() != spec.min_polys.size())
        throw std::runtime_error("spec file: inconsistent with the deterministic construction");
    for (std::size_t i = 0; i < polys.size(); ++i)
        if (polys[i].get<std::vector<Residue>>() != spec.min_polys[i].coeffs)
            throw std::runtime_error("spec file: inconsistent with the deterministic construction");
    return spec;
}

inline TowerSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    json j;
    in >> j;
    return tower_from_json(j);
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

// ---------------------------------------------------------------------------
// repair experiments on the simulated cluster
// ---------------------------------------------------------------------------

struct RepairOutcome {
    bool pass = false;
    std::uint64_t metered_total = 0;  // base-field symbols per trial
    json transcript;
};

/// Runs `trials` random codewords through erase / helper-payload / collect /
/// reconstruct. The meter counts every base-field symbol that crosses a node
/// boundary; the verdict requires exact recovery and meter == cut-set bound.
inline RepairOutcome run_repair(const TowerSpec& spec, const std::vector<std::uint32_t>& failed,
                                const std::vector<std::uint32_t>& helpers, std::uint32_t trials,
                                std::uint64_t seed) {
    CodeSpec code = make_code(spec);
    RepairPlan plan = make_plan(spec, code, failed, helpers);
    std::mt19937_64 rng(seed);

    RepairOutcome outcome;
    json detail = json::array();
    bool all_ok = true;
    std::uint64_t metered = 0;
    for (std::uint32_t trial = 0; trial < trials; ++trial) {
        std::vector<FieldElement> message;
        for (std::uint32_t i = 0; i < code.k; ++i) message.push_back(random_element(spec, rng));
        std::vector<FieldElement> nodes = encode(message, code, spec);

        // erase the failed coordinates; helpers compute independently
        std::vector<FieldElement> ground_truth;
        for (auto f : plan.failed) {
            ground_truth.push_back(nodes[f - 1]);
            nodes[f - 1] = fe_zero();
        }
        std::vector<HelperPayload> payloads;
        std::uint64_t trial_symbols = 0;
        json payload_json = json::object();
        for (auto jn : plan.helpers) {
            payloads.push_back(helper_payload(plan, jn, nodes[jn - 1]));
            trial_symbols += payloads.back().symbols.size();
            payload_json[std::to_string(jn)] =
                to_hex(pack_digits(payloads.back().symbols, spec.p));
        }
        std::vector<FieldElement> recovered = reconstruct(plan, payloads);
        bool exact = recovered.size() == ground_truth.size();
        for (std::size_t i = 0; exact && i < recovered.size(); ++i)
            exact = recovered[i] == ground_truth[i];
        bool metered_ok = trial_symbols == plan.cutset;
        all_ok = all_ok && exact && metered_ok;
        metered = trial_symbols;

        json t;
        t["trial"] = trial;
        t["payloads"] = std::move(payload_json);
        t["recovered_exact"] = exact;
        t["metered_symbols"] = trial_symbols;
        detail.push_back(std::move(t));
    }

    json tr;
    tr["format"] = "rs-repair-transcript/1";
    tr["code"] = {{"p", spec.p},          {"mode", mode_name(spec.mode)},
                  {"n", spec.n},          {"k", spec.k},
                  {"subpacketization", spec.ext_degree}};
    tr["code"][spec.mode == TowerMode::universal ? "r" : "d"] = spec.mode_param;
    tr["failed"] = plan.failed;
    tr["helpers"] = plan.helpers;
    tr["trials"] = trials;
    tr["seed"] = seed;
    tr["cutset_bound"] = plan.cutset;
    tr["bandwidth_per_helper"] = plan.bandwidth_per_helper;
    tr["bandwidth_total"] = plan.bandwidth_total;
    tr["trials_detail"] = std::move(detail);
    tr["verdict"] = all_ok ? "pass" : "fail";

    outcome.pass = all_ok;
    outcome.metered_total = metered;
    outcome.transcript = std::move(tr);
    return outcome;
}

// ---------------------------------------------------------------------------
// bandwidth tables
// ---------------------------------------------------------------------------

struct TableRow {
    std::uint32_t h = 0;
    std::uint32_t d = 0;
    std::uint64_t per_helper = 0;
    std::uint64_t total = 0;
    std::uint64_t cutset = 0;
    bool optimal = false;          // total == cutset exactly
    std::uint64_t naive_k_nodes = 0;       // k full nodes
    std::uint64_t naive_full_helpers = 0;  // d full nodes
};

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> legal_hd_pairs(const TowerSpec& spec) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    if (spec.mode == TowerMode::universal) {
        for (std::uint32_t h = 1; h <= spec.mode_param; ++h)
            for (std::uint32_t d = spec.k; d <= spec.n - h; ++d) out.push_back({h, d});
    } else {
        std::uint32_t d0 = spec.mode_param;
        out.push_back({1, d0});
        if (d0 + 1 <= spec.n - 1) out.push_back({1, d0 + 1});
        out.push_back({2, d0});
    }
    return out;
}

/// Bandwidth rows for every legal (h, d); plan construction only, no
/// codeword arithmetic. The planned bandwidth never depends on which nodes
/// fail, so the canonical choice {1..h} / {h+1..h+d} stands in for all.
inline std::vector<TableRow> bandwidth_table(const TowerSpec& spec) {
    CodeSpec code = make_code(spec);
    std::vector<TableRow> rows;
    for (auto [h, d] : legal_hd_pairs(spec)) {
        std::vector<std::uint32_t> failed, helpers;
        for (std::uint32_t j = 1; j <= h; ++j) failed.push_back(j);
        for (std::uint32_t j = h + 1; j <= h + d; ++j) helpers.push_back(j);
        RepairPlan plan = make_plan(spec, code, failed, helpers);
        TableRow row;
        row.h = h;
        row.d = d;
        row.per_helper = plan.bandwidth_per_helper;
        row.total = plan.bandwidth_total;
        row.cutset = plan.cutset;
        row.optimal = plan.bandwidth_total == plan.cutset;
        row.naive_k_nodes = std::uint64_t(spec.k) * spec.ext_degree;
        row.naive_full_helpers = std::uint64_t(d) * spec.ext_degree;
        rows.push_back(row);
    }
    return rows;
}

inline std::string table_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "h,d,per_helper_symbols,total_symbols,cutset_bound,ratio,naive_k_nodes,naive_full_helpers\n";
    for (const auto& r : rows) {
        os << r.h << ',' << r.d << ',' << r.per_helper << ',' << r.total << ',' << r.cutset << ',';
        if (r.optimal)
            os << 1;
        else
            os << std::setprecision(6) << double(r.total) / double(r.cutset);
        os << ',' << r.naive_k_nodes << ',' << r.naive_full_helpers << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// verifier driver
// ---------------------------------------------------------------------------

enum class CheckSelection { all, ints, ish, props, claim1, duality };

inline CheckSelection parse_selection(const std::string& which) {
    if (which == "all") return CheckSelection::all;
    if (which == "ints") return CheckSelection::ints;
    if (which == "ish") return CheckSelection::ish;
    if (which == "props") return CheckSelection::props;
    if (which == "claim1") return CheckSelection::claim1;
    if (which == "duality") return CheckSelection::duality;
    throw std::invalid_argument("unknown check selection: " + which);
}

namespace detail {

inline std::vector<std::vector<std::uint32_t>> subsets_of_size(std::uint32_t n, std::uint32_t h) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    auto rec = [&](auto&& self, std::uint32_t start) -> void {
        if (cur.size() == h) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t j = start; j <= n; ++j) {
            cur.push_back(j);
            self(self, j + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);
    return out;
}

inline std::vector<std::uint32_t> complement_prefix(const std::vector<std::uint32_t>& failed,
                                                    std::uint32_t n, std::uint32_t d) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t j = 1; j <= n && out.size() < d; ++j)
        if (std::find(failed.begin(), failed.end(), j) == failed.end()) out.push_back(j);
    return out;
}

}  // namespace detail

/// Runs the selected checks over every legal (h, d) pair and every failed
/// subset of the spec. Duality uses one canonical helper set per pair.
inline std::vector<CheckReport> run_checks(const TowerSpec& spec, CheckSelection which,
                                           std::uint32_t trials, std::uint64_t seed) {
    std::vector<CheckReport> out;
    auto want = [&](CheckSelection s) { return which == CheckSelection::all || which == s; };
    const bool universal = spec.mode == TowerMode::universal;
    if (!universal && (which == CheckSelection::ish || which == CheckSelection::claim1))
        throw std::invalid_argument("check requires a universal-mode spec");
    if (universal && which == CheckSelection::ints)
        throw std::invalid_argument("check requires a two-erasure spec");

    CodeSpec code = make_code(spec);
    for (auto [h, d] : legal_hd_pairs(spec)) {
        for (const auto& failed : detail::subsets_of_size(spec.n, h)) {
            if (!universal && h == 2 && want(CheckSelection::ints)) {
                auto r = check_intersection_dim(spec, failed, d);
                out.insert(out.end(), r.begin(), r.end());
            }
            if (universal && want(CheckSelection::ish)) {
                auto r = check_span_sums(spec, failed, d, h);
                out.insert(out.end(), r.begin(), r.end());
            }
            if (want(CheckSelection::props)) {
                for (std::uint32_t i = 1; i <= h; ++i) {
                    auto r = check_reconstruction_rank(spec, failed, d, i);
                    out.insert(out.end(), r.begin(), r.end());
                }
            }
            if (universal && want(CheckSelection::claim1)) {
                auto r = check_download_basis(spec, failed, d);
                out.insert(out.end(), r.begin(), r.end());
            }
        }
        if (want(CheckSelection::duality)) {
            std::vector<std::uint32_t> failed;
            for (std::uint32_t j = 1; j <= h; ++j) failed.push_back(j);
            auto helpers = detail::complement_prefix(failed, spec.n, d);
            auto r = check_duality(spec, code, failed, helpers, trials, seed);
            out.insert(out.end(), r.begin(), r.end());
        }
    }
    return out;
}

inline json reports_to_json(const TowerSpec& spec, const std::string& which,
                            const std::vector<CheckReport>& reports) {
    json j;
    j["format"] = "rs-verify-report/1";
    j["spec"] = spec_to_json(spec);
    j["which"] = which;
    json checks = json::array();
    bool all = true;
    for (const auto& r : reports) {
        checks.push_back({{"name", r.name},
                          {"instance", r.instance},
                          {"expected", r.expected},
                          {"computed", r.computed},
                          {"pass", r.pass}});
        all = all && r.pass;
    }
    j["checks"] = std::move(checks);
    j["all_pass"] = all;
    return j;
}

inline std::string render_report_table(const std::vector<CheckReport>& reports) {
    std::size_t name_w = 4, inst_w = 8;
    for (const auto& r : reports) {
        name_w = std::max(name_w, r.name.size());
        inst_w = std::max(inst_w, r.instance.size());
    }
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(name_w)) << "name" << "  "
       << std::setw(static_cast<int>(inst_w)) << "instance" << "  " << std::right
       << std::setw(10) << "expected" << "  " << std::setw(10) << "computed" << "  result\n";
    for (const auto& r : reports) {
        os << std::left << std::setw(static_cast<int>(name_w)) << r.name << "  "
           << std::setw(static_cast<int>(inst_w)) << r.instance << "  " << std::right
           << std::setw(10) << r.expected << "  " << std::setw(10) << r.computed << "  "
           << (r.pass ? "pass" : "FAIL") << '\n';
    }
    return os.str();
}

}  // namespace rsrepair
