#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wfoot/copula.hpp"
#include "wfoot/truth.hpp"

namespace wfoot::mc {

struct EstimatorSelection {
    bool phi = true;
    bool footrule = true;
    bool gini = false;
};

// One simulation cell: copula, sample size, replication count, seed.
struct Scenario {
    CopulaSpec spec = CopulaSpec::independence();
    int n = 0;
    int B = 0;
    std::uint64_t seed = 0;
    EstimatorSelection estimators;

    std::string family_label;  // e.g. "gaussian"; derived by make_scenario
    double param = 0.0;

    // Stable stream identifier: replication r of this scenario draws from
    // stream (seed, scenario_id, r) regardless of execution order.
    std::uint32_t scenario_id() const;
};

Scenario make_scenario(const CopulaSpec& spec, int n, int B, std::uint64_t seed,
                       EstimatorSelection estimators = {});

struct EstimatorStats {
    double mean = 0.0;
    double bias = 0.0;
    double sd = 0.0;  // n-1 divisor
};

struct McResult {
    Scenario scenario;
    std::optional<EstimatorStats> phi;
    std::optional<EstimatorStats> footrule;
    std::optional<EstimatorStats> gini;
    TrueValues truth;
    double wall_seconds = 0.0;
    std::string error;  // nonempty if the scenario aborted

    bool failed() const noexcept { return !error.empty(); }
};

struct ReplicateEstimates {
    double phi = 0.0;
    double footrule = 0.0;
    double gini = 0.0;
};

// Deterministic parallel map: calls fn(i) for i in [0, count) on up to
// `jobs` threads (0 = hardware concurrency). fn must only touch state
// owned by index i.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

// Per-replication estimates in replication order; identical output for any
// jobs value. Replication r uses stream (seed, scenario_id, r).
std::vector<ReplicateEstimates> run_replicates(const Scenario& s, int jobs = 0);

// Runs a scenario and aggregates mean / bias / sd per selected estimator.
McResult run_scenario(const Scenario& s, int jobs = 0);

// Runs every scenario; a failing scenario does not abort the table but is
// returned with its error recorded (and rendered with a failure marker).
std::vector<McResult> run_table(std::span<const Scenario> scenarios, int jobs = 0);

// The simulation grid of the bundled table1 manifest: Clayton theta 5, 2;
// Gaussian rho -0.9, -0.7, -0.3, 1; Gumbel theta 5, 3; Frank theta -5, -10;
// n in {100, 200, 500}; B = 10^4. scale multiplies B (min 1).
std::vector<Scenario> default_table_scenarios(std::uint64_t seed, double scale = 1.0);

// Minimal TOML-subset manifest: repeated [[scenario]] blocks with keys
// family, param, n, B. Throws DataError with the line number on bad input.
std::vector<Scenario> parse_manifest(const std::string& text, std::uint64_t seed,
                                     double scale = 1.0);

// CSV with columns: family,param,n,truth_phi,truth_footrule,mean_phi,
// bias_phi,sd_phi,mean_footrule,bias_footrule,sd_footrule,seed.
// Values carry 5 decimals; bias columns print an explicit sign.
std::string render_csv(std::span<const McResult> results);

// Aligned table with the same content, grouped like the CSV.
std::string render_markdown(std::span<const McResult> results);

struct DecayRatios {
    std::string family_label;
    double param = 0.0;
    int n_from = 0;
    int n_to = 0;
    double bias_ratio = 0.0;  // bias(n_from) / bias(n_to)
    double sd_ratio = 0.0;
};

// Consecutive-n bias and SD ratios per (family, param) group; ratios with a
// zero denominator are reported as NaN.
std::vector<DecayRatios> bias_decay_report(std::span<const McResult> results);

std::string render_decay_report(std::span<const DecayRatios> ratios);

}  // namespace wfoot::mc
