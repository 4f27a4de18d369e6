// wfootrule: estimate, tabulate and test the W-footrule coefficient.
//
// Subcommands:
//   truth     exact / quadrature coefficient values for a copula
//   estimate  rank-based estimates with CI and test from CSV data
//   test      the one-sided countermonotonicity test alone
//   simulate  Monte Carlo replication table
//
// Exit codes: 0 ok, 1 usage error, 2 numerical failure, 3 data error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "wfoot/csv.hpp"
#include "wfoot/errors.hpp"
#include "wfoot/estimation.hpp"
#include "wfoot/montecarlo.hpp"
#include "wfoot/sampling.hpp"
#include "wfoot/truth.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitData = 3;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag.has_value()) return *flag;
    if (const char* env = std::getenv("WFOOTRULE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("WFOOTRULE_SEED is not a valid unsigned integer");
        }
    }
    return wfoot::kDefaultSeed;
}

std::string fixed5(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.5f", x);
    return buf;
}

const char* verdict_name(wfoot::TestVerdict v) {
    switch (v) {
        case wfoot::TestVerdict::Reject: return "reject";
        case wfoot::TestVerdict::FailToReject: return "fail_to_reject";
        case wfoot::TestVerdict::Boundary: return "boundary";
    }
    return "?";
}

json report_to_json(const wfoot::EstimateReport& r) {
    json j;
    j["phi_hat"] = r.phi_hat;
    j["footrule_hat"] = r.footrule_hat;
    j["gini_hat"] = r.gini_hat;
    j["sigma_hat"] = r.sigma_hat;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    if (std::isfinite(r.test_stat)) {
        j["test_stat"] = r.test_stat;
    } else {
        j["test_stat"] = nullptr;
    }
    j["p_value"] = r.p_value;
    j["verdict"] = verdict_name(r.verdict);
    j["n"] = r.n;
    j["alpha"] = r.alpha;
    return j;
}

int run_truth(const std::string& copula, double tol) {
    const wfoot::CopulaSpec spec = wfoot::parse_copula_spec(copula);
    const wfoot::TrueValues tv = wfoot::true_values(spec, tol);
    json j;
    j["phi_w"] = tv.phi_w;
    j["footrule"] = tv.footrule;
    j["gini"] = tv.gini;
    j["method"] = wfoot::to_string(tv.method);
    j["error_bound"] = tv.abs_error_bound;
    std::cout << j.dump(2) << '\n';
    return kExitOk;
}

wfoot::RankedSample load_ranked(const std::string& input, const std::string& cols,
                                const std::string& ties) {
    wfoot::TiePolicy policy;
    if (ties == "midrank") {
        policy = wfoot::TiePolicy::MidRank;
    } else if (ties == "error") {
        policy = wfoot::TiePolicy::Error;
    } else {
        throw std::invalid_argument("--ties must be 'midrank' or 'error'");
    }
    wfoot::BivariateData data = input == "-"
                                    ? wfoot::read_bivariate_csv(std::cin, cols)
                                    : wfoot::read_bivariate_csv_file(input, cols);
    wfoot::RankedSample rs = wfoot::rank_data(data.x, data.y, policy);
    if (rs.has_ties) {
        std::cerr << "warning: tied values were mid-ranked\n";
    }
    return rs;
}

int run_estimate(const std::string& input, const std::string& cols, double alpha,
                 const std::string& ties, bool as_json) {
    const wfoot::RankedSample rs = load_ranked(input, cols, ties);
    const wfoot::EstimateReport r = wfoot::estimate_report(rs, alpha);
    if (as_json) {
        std::cout << report_to_json(r).dump(2) << '\n';
        return kExitOk;
    }
    char level[32];
    std::snprintf(level, sizeof(level), "ci(%.4g%%)", (1.0 - r.alpha) * 100.0);
    std::cout << "n         " << r.n << '\n'
              << "phi_hat   " << fixed5(r.phi_hat) << '\n'
              << "footrule  " << fixed5(r.footrule_hat) << '\n'
              << "gini      " << fixed5(r.gini_hat) << '\n'
              << "sigma_hat " << fixed5(r.sigma_hat) << '\n'
              << level << "  [" << fixed5(r.ci_low) << ", " << fixed5(r.ci_high) << "]\n"
              << "T_n       "
              << (std::isfinite(r.test_stat) ? fixed5(r.test_stat) : std::string("inf"))
              << '\n'
              << "p_value   " << fixed5(r.p_value) << '\n'
              << "verdict   " << verdict_name(r.verdict) << '\n';
    return kExitOk;
}

int run_test(const std::string& input, const std::string& cols, double alpha,
             const std::string& ties, bool as_json) {
    const wfoot::RankedSample rs = load_ranked(input, cols, ties);
    const wfoot::CountermonotonicityTest t = wfoot::countermonotonicity_test(rs, alpha);
    if (as_json) {
        json j;
        if (std::isfinite(t.t_stat)) {
            j["t_stat"] = t.t_stat;
        } else {
            j["t_stat"] = nullptr;
        }
        j["p_value"] = t.p_value;
        j["reject"] = t.reject;
        j["verdict"] = verdict_name(t.verdict);
        j["alpha"] = alpha;
        j["n"] = rs.n;
        std::cout << j.dump(2) << '\n';
        return kExitOk;
    }
    std::cout << "T_n     "
              << (std::isfinite(t.t_stat) ? fixed5(t.t_stat) : std::string("inf")) << '\n'
              << "p_value " << fixed5(t.p_value) << '\n'
              << "verdict " << verdict_name(t.verdict) << '\n';
    return kExitOk;
}

int run_simulate(const std::string& manifest, double scale, int jobs,
                 const std::string& out_path, const std::string& format,
                 const std::optional<std::uint64_t>& seed_flag, bool rates) {
    const std::uint64_t seed = resolve_seed(seed_flag);

    std::vector<wfoot::mc::Scenario> scenarios;
    if (manifest.empty()) {
        scenarios = wfoot::mc::default_table_scenarios(seed, scale);
    } else {
        std::ifstream in(manifest);
        if (!in) throw wfoot::DataError("cannot open manifest '" + manifest + "'");
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        scenarios = wfoot::mc::parse_manifest(text, seed, scale);
    }

    const std::vector<wfoot::mc::McResult> results = wfoot::mc::run_table(scenarios, jobs);
    int failed = 0;
    for (const auto& r : results) {
        if (r.failed()) {
            ++failed;
            std::cerr << "error: scenario " << r.scenario.family_label << " n="
                      << r.scenario.n << " failed: " << r.error << '\n';
        }
    }

    const std::string csv = wfoot::mc::render_csv(results);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw wfoot::DataError("cannot write '" + out_path + "'");
        out << csv;
    }
    if (format == "md") {
        std::cout << wfoot::mc::render_markdown(results);
    } else {
        std::cout << csv;
    }
    if (rates) {
        const auto ratios = wfoot::mc::bias_decay_report(results);
        std::cout << '\n' << wfoot::mc::render_decay_report(ratios);
    }
    return failed == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"W-footrule coefficient: truth values, estimation, simulation"};
    app.require_subcommand(1);

    // truth
    std::string truth_copula;
    double truth_tol = wfoot::kDefaultTruthTol;
    CLI::App* truth = app.add_subcommand("truth", "Coefficient values for a copula");
    truth->add_option("--copula", truth_copula,
                      "Copula spec, e.g. gaussian:rho=-0.9, clayton:theta=5, pi, w, m")
        ->required();
    truth->add_option("--tol", truth_tol, "Quadrature absolute tolerance");

    // estimate
    std::string est_input, est_cols, est_ties = "midrank";
    double est_alpha = 0.05;
    bool est_json = false;
    CLI::App* estimate =
        app.add_subcommand("estimate", "Rank-based estimates from a two-column CSV");
    estimate->add_option("--input", est_input, "CSV file path, or - for stdin")->required();
    estimate->add_option("--cols", est_cols, "Two column names or 1-based indices: x,y");
    estimate->add_option("--alpha", est_alpha, "Confidence/test level (default 0.05)");
    estimate->add_option("--ties", est_ties, "Tie policy: midrank|error");
    estimate->add_flag("--json", est_json, "Emit JSON at full precision");

    // test
    std::string test_input, test_cols, test_ties = "midrank";
    double test_alpha = 0.05;
    bool test_json = false;
    CLI::App* test =
        app.add_subcommand("test", "One-sided test of countermonotonicity (H0: C = W)");
    test->add_option("--input", test_input, "CSV file path, or - for stdin")->required();
    test->add_option("--cols", test_cols, "Two column names or 1-based indices: x,y");
    test->add_option("--alpha", test_alpha, "Asymptotic level (default 0.05)");
    test->add_option("--ties", test_ties, "Tie policy: midrank|error");
    test->add_flag("--json", test_json, "Emit JSON at full precision");

    // simulate
    std::string sim_manifest, sim_out, sim_format = "csv";
    double sim_scale = 1.0;
    int sim_jobs = 0;
    bool sim_rates = false;
    std::optional<std::uint64_t> sim_seed;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo replication table");
    simulate->add_option("--manifest", sim_manifest,
                         "Scenario manifest (TOML); omitted = bundled table1 grid");
    simulate->add_option("--scale", sim_scale, "Multiplies every B (e.g. 0.05)");
    simulate->add_option("--jobs", sim_jobs, "Worker threads (0 = all cores)");
    simulate->add_option("--out", sim_out, "Also write the CSV here");
    simulate->add_option("--format", sim_format, "stdout format: csv|md")
        ->check(CLI::IsMember({"csv", "md"}));
    simulate->add_option("--seed", sim_seed,
                         "Base seed (default WFOOTRULE_SEED or 424242)");
    simulate->add_flag("--rates", sim_rates, "Append bias/SD decay ratios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (truth->parsed()) return run_truth(truth_copula, truth_tol);
        if (estimate->parsed())
            return run_estimate(est_input, est_cols, est_alpha, est_ties, est_json);
        if (test->parsed())
            return run_test(test_input, test_cols, test_alpha, test_ties, test_json);
        if (simulate->parsed())
            return run_simulate(sim_manifest, sim_scale, sim_jobs, sim_out, sim_format,
                                sim_seed, sim_rates);
    } catch (const wfoot::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const wfoot::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
