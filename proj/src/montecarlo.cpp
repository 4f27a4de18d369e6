#include "wfoot/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "wfoot/errors.hpp"
#include "wfoot/estimation.hpp"
#include "wfoot/rng.hpp"
#include "wfoot/sampling.hpp"

namespace wfoot::mc {

namespace {

std::string family_token(const CopulaSpec& spec) {
    const std::string s = spec.to_string();
    const size_t colon = s.find(':');
    return colon == std::string::npos ? s : s.substr(0, colon);
}

double family_param(const CopulaSpec& spec) {
    switch (spec.family()) {
        case Family::Gaussian:
        case Family::Clayton:
        case Family::Gumbel:
        case Family::Frank:
            return spec.param();
        default:
            return 0.0;
    }
}

std::string format_fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
    return buf;
}

std::string format_signed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%+.*f", decimals, x);
    return buf;
}

std::string format_param(double p) {
    std::ostringstream os;
    os << p;
    return os.str();
}

EstimatorStats aggregate(std::span<const double> values, double truth) {
    EstimatorStats stats;

    // A degenerate estimator (e.g. under M or W) must report sd exactly 0.
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        stats.mean = *lo;
        stats.bias = stats.mean - truth;
        stats.sd = 0.0;
        return stats;
    }

    // Two-pass with compensated summation keeps the aggregate independent
    // of work partitioning.
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    stats.mean = sum / static_cast<double>(values.size());
    stats.bias = stats.mean - truth;
    double ss = 0.0;
    for (double v : values) ss += (v - stats.mean) * (v - stats.mean);
    stats.sd = values.size() > 1
                   ? std::sqrt(ss / static_cast<double>(values.size() - 1))
                   : 0.0;
    return stats;
}

}  // namespace

std::uint32_t Scenario::scenario_id() const {
    const std::string key = spec.to_string() + "#n=" + std::to_string(n);
    return static_cast<std::uint32_t>(fnv1a64(key));
}

Scenario make_scenario(const CopulaSpec& spec, int n, int B, std::uint64_t seed,
                       EstimatorSelection estimators) {
    if (n < 2) throw std::invalid_argument("scenario: n must be >= 2");
    if (B < 1) throw std::invalid_argument("scenario: B must be >= 1");
    Scenario s{spec, n, B, seed, estimators, family_token(spec), family_param(spec)};
    return s;
}

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int t = 0; t < jobs; ++t) {
        workers.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<ReplicateEstimates> run_replicates(const Scenario& s, int jobs) {
    if (!s.spec.samplable()) {
        throw NotSamplableError("run_replicates: scenario copula is not samplable");
    }
    const std::uint32_t scenario_id = s.scenario_id();
    std::vector<ReplicateEstimates> rows(static_cast<std::size_t>(s.B));
    parallel_for(s.B, jobs, [&](int r) {
        try {
            RngStream rng(s.seed, scenario_id, static_cast<std::uint32_t>(r));
            const SampleBatch batch = sample_into(s.spec, s.n, rng);
            const RankedSample rs = rank_batch(batch);
            ReplicateEstimates& row = rows[static_cast<std::size_t>(r)];
            row.phi = phi_hat(rs);
            row.footrule = footrule_hat(rs);
            row.gini = 2.0 / 3.0 * (row.footrule + row.phi);
        } catch (const std::exception& e) {
            throw NumericalError("run_replicates: replication " + std::to_string(r) +
                                     " failed: " + e.what(),
                                 0.0, 0.0);
        }
    });
    return rows;
}

McResult run_scenario(const Scenario& s, int jobs) {
    const auto start = std::chrono::steady_clock::now();

    McResult result;
    result.scenario = s;
    result.truth = true_values(s.spec);

    const std::vector<ReplicateEstimates> rows = run_replicates(s, jobs);
    std::vector<double> values(rows.size());
    if (s.estimators.phi) {
        for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i].phi;
        result.phi = aggregate(values, result.truth.phi_w);
    }
    if (s.estimators.footrule) {
        for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i].footrule;
        result.footrule = aggregate(values, result.truth.footrule);
    }
    if (s.estimators.gini) {
        for (std::size_t i = 0; i < rows.size(); ++i) values[i] = rows[i].gini;
        result.gini = aggregate(values, result.truth.gini);
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<McResult> run_table(std::span<const Scenario> scenarios, int jobs) {
    std::vector<McResult> results;
    results.reserve(scenarios.size());
    for (const Scenario& s : scenarios) {
        try {
            results.push_back(run_scenario(s, jobs));
        } catch (const std::exception& e) {
            McResult failed;
            failed.scenario = s;
            failed.error = e.what();
            results.push_back(std::move(failed));
        }
    }
    return results;
}

std::vector<Scenario> default_table_scenarios(std::uint64_t seed, double scale) {
    const std::vector<CopulaSpec> specs = {
        CopulaSpec::clayton(5.0),    CopulaSpec::clayton(2.0),
        CopulaSpec::gaussian(-0.9),  CopulaSpec::gaussian(-0.7),
        CopulaSpec::gaussian(-0.3),  CopulaSpec::gaussian(1.0),
        CopulaSpec::gumbel(5.0),     CopulaSpec::gumbel(3.0),
        CopulaSpec::frank(-5.0),     CopulaSpec::frank(-10.0),
    };
    const int sizes[] = {100, 200, 500};
    const int b = std::max(1, static_cast<int>(std::llround(10000.0 * scale)));

    std::vector<Scenario> out;
    for (const CopulaSpec& spec : specs) {
        for (int n : sizes) out.push_back(make_scenario(spec, n, b, seed));
    }
    return out;
}

namespace {

struct ManifestBlock {
    std::string family;
    double param = 0.0;
    bool has_param = false;
    int n = 0;
    int B = 0;
    int line = 0;
};

std::string strip(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

CopulaSpec spec_from_family(const std::string& family, double param, bool has_param,
                            int line) {
    try {
        if (family == "pi" || family == "independence") return CopulaSpec::independence();
        if (family == "w") return CopulaSpec::lower_bound_w();
        if (family == "m") return CopulaSpec::upper_bound_m();
        if (family == "twosegment") return CopulaSpec::two_segment();
        if (!has_param) {
            throw std::invalid_argument("family '" + family + "' requires param");
        }
        if (family == "gaussian") return CopulaSpec::gaussian(param);
        if (family == "clayton") return CopulaSpec::clayton(param);
        if (family == "gumbel") return CopulaSpec::gumbel(param);
        if (family == "frank") return CopulaSpec::frank(param);
        throw std::invalid_argument("unknown family '" + family + "'");
    } catch (const std::invalid_argument& e) {
        throw DataError("manifest line " + std::to_string(line) + ": " + e.what());
    }
}

}  // namespace

std::vector<Scenario> parse_manifest(const std::string& text, std::uint64_t seed,
                                     double scale) {
    std::vector<ManifestBlock> blocks;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;

        if (line == "[[scenario]]") {
            blocks.push_back(ManifestBlock{});
            blocks.back().line = line_no;
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos || blocks.empty()) {
            throw DataError("manifest line " + std::to_string(line_no) +
                            ": expected [[scenario]] or key = value");
        }
        const std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        ManifestBlock& block = blocks.back();
        try {
            if (key == "family") {
                block.family = value;
                std::transform(block.family.begin(), block.family.end(),
                               block.family.begin(), ::tolower);
            } else if (key == "param") {
                block.param = std::stod(value);
                block.has_param = true;
            } else if (key == "n") {
                block.n = std::stoi(value);
            } else if (key == "B" || key == "b") {
                block.B = std::stoi(value);
            } else {
                throw DataError("manifest line " + std::to_string(line_no) +
                                ": unknown key '" + key + "'");
            }
        } catch (const DataError&) {
            throw;
        } catch (const std::exception&) {
            throw DataError("manifest line " + std::to_string(line_no) +
                            ": bad value for '" + key + "'");
        }
    }

    std::vector<Scenario> scenarios;
    for (const ManifestBlock& block : blocks) {
        if (block.family.empty()) {
            throw DataError("manifest line " + std::to_string(block.line) +
                            ": scenario without family");
        }
        const CopulaSpec spec =
            spec_from_family(block.family, block.param, block.has_param, block.line);
        const int b = std::max(1, static_cast<int>(std::llround(block.B * scale)));
        try {
            scenarios.push_back(make_scenario(spec, block.n, b, seed));
        } catch (const std::invalid_argument& e) {
            throw DataError("manifest line " + std::to_string(block.line) + ": " + e.what());
        }
    }
    return scenarios;
}

std::string render_csv(std::span<const McResult> results) {
    std::ostringstream os;
    os << "family,param,n,truth_phi,truth_footrule,mean_phi,bias_phi,sd_phi,"
          "mean_footrule,bias_footrule,sd_footrule,seed\n";
    for (const McResult& r : results) {
        if (r.failed()) {
            os << r.scenario.family_label << ',' << format_param(r.scenario.param) << ','
               << r.scenario.n << ",,,,,,,,," << r.scenario.seed << '\n';
            continue;
        }
        const EstimatorStats phi = r.phi.value_or(EstimatorStats{});
        const EstimatorStats foot = r.footrule.value_or(EstimatorStats{});
        os << r.scenario.family_label << ',' << format_param(r.scenario.param) << ','
           << r.scenario.n << ',' << format_fixed(r.truth.phi_w, 5) << ','
           << format_fixed(r.truth.footrule, 5) << ',' << format_fixed(phi.mean, 5) << ','
           << format_signed(phi.bias, 5) << ',' << format_fixed(phi.sd, 5) << ','
           << format_fixed(foot.mean, 5) << ',' << format_signed(foot.bias, 5) << ','
           << format_fixed(foot.sd, 5) << ',' << r.scenario.seed << '\n';
    }
    return os.str();
}

std::string render_markdown(std::span<const McResult> results) {
    const char* headers[] = {"copula", "param",    "n",       "true_phi", "true_foot",
                             "mean_phi", "bias_phi", "sd_phi", "mean_foot", "bias_foot",
                             "sd_foot"};
    std::vector<std::vector<std::string>> rows;
    for (const McResult& r : results) {
        if (r.failed()) {
            rows.push_back({r.scenario.family_label, format_param(r.scenario.param),
                            std::to_string(r.scenario.n), "FAILED", r.error, "", "", "", "",
                            "", ""});
            continue;
        }
        const EstimatorStats phi = r.phi.value_or(EstimatorStats{});
        const EstimatorStats foot = r.footrule.value_or(EstimatorStats{});
        rows.push_back({r.scenario.family_label, format_param(r.scenario.param),
                        std::to_string(r.scenario.n), format_fixed(r.truth.phi_w, 5),
                        format_fixed(r.truth.footrule, 5), format_fixed(phi.mean, 5),
                        format_signed(phi.bias, 5), format_fixed(phi.sd, 5),
                        format_fixed(foot.mean, 5), format_signed(foot.bias, 5),
                        format_fixed(foot.sd, 5)});
    }
    constexpr int kCols = 11;
    std::array<size_t, kCols> width{};
    for (int c = 0; c < kCols; ++c) width[c] = std::string(headers[c]).size();
    for (const auto& row : rows) {
        for (int c = 0; c < kCols; ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream os;
    auto emit_row = [&](const std::vector<std::string>& cells) {
        os << '|';
        for (int c = 0; c < kCols; ++c) {
            os << ' ' << cells[c] << std::string(width[c] - cells[c].size(), ' ') << " |";
        }
        os << '\n';
    };
    std::vector<std::string> head(headers, headers + kCols);
    emit_row(head);
    os << '|';
    for (int c = 0; c < kCols; ++c) os << std::string(width[c] + 2, '-') << '|';
    os << '\n';
    for (const auto& row : rows) emit_row(row);
    return os.str();
}

std::vector<DecayRatios> bias_decay_report(std::span<const McResult> results) {
    std::map<std::pair<std::string, double>, std::vector<const McResult*>> groups;
    for (const McResult& r : results) {
        if (r.failed()) continue;
        groups[{r.scenario.family_label, r.scenario.param}].push_back(&r);
    }
    std::vector<DecayRatios> out;
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end(),
                  [](const McResult* a, const McResult* b) {
                      return a->scenario.n < b->scenario.n;
                  });
        for (std::size_t i = 0; i + 1 < members.size(); ++i) {
            const EstimatorStats from = members[i]->phi.value_or(EstimatorStats{});
            const EstimatorStats to = members[i + 1]->phi.value_or(EstimatorStats{});
            DecayRatios d;
            d.family_label = key.first;
            d.param = key.second;
            d.n_from = members[i]->scenario.n;
            d.n_to = members[i + 1]->scenario.n;
            d.bias_ratio = (from.bias == 0.0 && to.bias == 0.0)
                               ? 1.0
                               : to.bias / from.bias;
            d.sd_ratio = (from.sd == 0.0 && to.sd == 0.0) ? 1.0 : to.sd / from.sd;
            out.push_back(d);
        }
    }
    return out;
}

std::string render_decay_report(std::span<const DecayRatios> ratios) {
    std::ostringstream os;
    os << "family,param,n_from,n_to,bias_ratio,sd_ratio\n";
    for (const DecayRatios& d : ratios) {
        os << d.family_label << ',' << format_param(d.param) << ',' << d.n_from << ','
           << d.n_to << ',' << format_fixed(d.bias_ratio, 3) << ','
           << format_fixed(d.sd_ratio, 3) << '\n';
    }
    return os.str();
}

}  // namespace wfoot::mc
