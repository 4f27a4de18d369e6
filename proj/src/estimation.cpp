#include "wfoot/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "wfoot/errors.hpp"
#include "wfoot/normal.hpp"

namespace wfoot {

namespace {

std::vector<double> rank_column(std::span<const double> values, TiePolicy policy,
                                bool& saw_ties) {
    const int n = static_cast<int>(values.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&values](int a, int b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        if (j > i) {
            if (policy == TiePolicy::Error) {
                throw DataError("rank_data: tied values under the Error tie policy");
            }
            saw_ties = true;
        }
        const double mid = 0.5 * ((i + 1) + (j + 1));  // average of 1-based positions
        for (int k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

// Ranks scaled by 2 are integers even under mid-ranking.
std::int64_t twice(double rank) { return std::llround(2.0 * rank); }

}  // namespace

RankedSample rank_data(std::span<const double> xs, std::span<const double> ys,
                       TiePolicy policy) {
    if (xs.size() != ys.size()) {
        throw DataError("rank_data: column lengths differ");
    }
    if (xs.size() < 2) {
        throw DataError("rank_data: need at least 2 observations");
    }
    for (double x : xs) {
        if (!std::isfinite(x)) throw DataError("rank_data: non-finite value in x column");
    }
    for (double y : ys) {
        if (!std::isfinite(y)) throw DataError("rank_data: non-finite value in y column");
    }

    RankedSample rs;
    rs.n = static_cast<int>(xs.size());
    bool ties = false;
    rs.rank_x = rank_column(xs, policy, ties);
    rs.rank_y = rank_column(ys, policy, ties);
    rs.has_ties = ties;

    rs.pseudo_u.resize(rs.n);
    rs.pseudo_v.resize(rs.n);
    const double scale = 1.0 / (rs.n + 1);
    for (int i = 0; i < rs.n; ++i) {
        rs.pseudo_u[i] = rs.rank_x[i] * scale;
        rs.pseudo_v[i] = rs.rank_y[i] * scale;
    }
    return rs;
}

RankedSample rank_batch(const SampleBatch& batch) {
    std::vector<double> xs(batch.pairs.size());
    std::vector<double> ys(batch.pairs.size());
    for (std::size_t i = 0; i < batch.pairs.size(); ++i) {
        xs[i] = batch.pairs[i].first;
        ys[i] = batch.pairs[i].second;
    }
    return rank_data(xs, ys, TiePolicy::MidRank);
}

double phi_hat(const RankedSample& rs) {
    const std::int64_t two_np1 = 2 * static_cast<std::int64_t>(rs.n + 1);
    std::int64_t sum2 = 0;
    for (int i = 0; i < rs.n; ++i) {
        const std::int64_t k = two_np1 - twice(rs.rank_x[i]) - twice(rs.rank_y[i]);
        if (k > 0) sum2 += k;
    }
    const double denom = static_cast<double>(rs.n) * (rs.n + 1);
    return 3.0 * static_cast<double>(sum2) / denom - 1.0;
}

double footrule_hat(const RankedSample& rs, FootruleNorm norm) {
    std::int64_t sum2 = 0;
    for (int i = 0; i < rs.n; ++i) {
        sum2 += std::llabs(twice(rs.rank_x[i]) - twice(rs.rank_y[i]));
    }
    const double n = rs.n;
    const double denom = (norm == FootruleNorm::PseudoObs) ? n * (n + 1) : n * n - 1.0;
    return 1.0 - 1.5 * static_cast<double>(sum2) / denom;
}

double gini_hat(const RankedSample& rs) {
    return 2.0 / 3.0 * (footrule_hat(rs) + phi_hat(rs));
}

double empirical_copula(const RankedSample& rs, const UnitSquarePoint& p) {
    int count = 0;
    for (int i = 0; i < rs.n; ++i) {
        if (rs.pseudo_u[i] <= p.u && rs.pseudo_v[i] <= p.v) ++count;
    }
    return static_cast<double>(count) / rs.n;
}

double partial_derivative_hat(const RankedSample& rs, PartialVar which,
                              const UnitSquarePoint& p, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("partial_derivative_hat: h must be > 0");
    const double at = (which == PartialVar::d1) ? p.u : p.v;
    const double hi = std::min(at + h, 1.0);
    const double lo = std::max(at - h, 0.0);
    double upper, lower;
    if (which == PartialVar::d1) {
        upper = empirical_copula(rs, UnitSquarePoint(hi, p.v));
        lower = empirical_copula(rs, UnitSquarePoint(lo, p.v));
    } else {
        upper = empirical_copula(rs, UnitSquarePoint(p.u, hi));
        lower = empirical_copula(rs, UnitSquarePoint(p.u, lo));
    }
    const double slope = (upper - lower) / (hi - lo);
    return std::clamp(slope, 0.0, 1.0);
}

EmpiricalInfluence::EmpiricalInfluence(const RankedSample& rs, double h, int grid_cells)
    : h_(h > 0.0 ? h : default_bandwidth(rs.n)), grid_cells_(grid_cells) {
    if (grid_cells_ < 2) throw std::invalid_argument("EmpiricalInfluence: grid too small");
    cum1_.assign(grid_cells_ + 1, 0.0);
    cum2_.assign(grid_cells_ + 1, 0.0);
    const double cell = 1.0 / grid_cells_;
    for (int k = 0; k < grid_cells_; ++k) {
        const double s = (k + 0.5) * cell;
        const UnitSquarePoint anti(s, 1.0 - s);
        const double g1 = partial_derivative_hat(rs, PartialVar::d1, anti, h_);
        const double g2 = partial_derivative_hat(rs, PartialVar::d2, anti, h_);
        cum1_[k + 1] = cum1_[k] + g1 * cell;
        cum2_[k + 1] = cum2_[k] + g2 * cell;
    }
}

namespace {

double interp_cumulative(const std::vector<double>& cum, int cells, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return cum[cells];
    const double scaled = x * cells;
    const int k = std::min(static_cast<int>(scaled), cells - 1);
    const double frac = scaled - k;
    return cum[k] + frac * (cum[k + 1] - cum[k]);
}

}  // namespace

double EmpiricalInfluence::integral_from(double u) const {
    return cum1_[grid_cells_] - interp_cumulative(cum1_, grid_cells_, u);
}

double EmpiricalInfluence::integral_to(double t) const {
    return interp_cumulative(cum2_, grid_cells_, t);
}

double EmpiricalInfluence::j_hat(double u, double v) const {
    const double plus = std::max(1.0 - u - v, 0.0);
    return plus - integral_from(u) - integral_to(1.0 - v);
}

double influence_hat(const RankedSample& rs, const UnitSquarePoint& p) {
    EmpiricalInfluence inf(rs, 0.0, kDefaultInfluenceGrid);
    return inf.j_hat(p.u, p.v);
}

InfluenceGrid influence_grid(const RankedSample& rs, int lattice_points, double h,
                             int grid_cells) {
    if (lattice_points < 2) throw std::invalid_argument("influence_grid: lattice too small");
    EmpiricalInfluence inf(rs, h, grid_cells);
    InfluenceGrid grid;
    grid.lattice_points = lattice_points;
    grid.bandwidth = inf.bandwidth();
    grid.values.resize(static_cast<std::size_t>(lattice_points) * lattice_points);
    for (int j = 0; j < lattice_points; ++j) {
        const double v = grid.v_at(j);
        for (int i = 0; i < lattice_points; ++i) {
            grid.values[static_cast<std::size_t>(j) * lattice_points + i] =
                inf.j_hat(grid.u_at(i), v);
        }
    }
    return grid;
}

double sigma_hat(const RankedSample& rs, double h, int grid_cells) {
    EmpiricalInfluence inf(rs, h, grid_cells);
    std::vector<double> js(rs.n);
    double mean = 0.0;
    for (int i = 0; i < rs.n; ++i) {
        js[i] = inf.j_hat(rs.pseudo_u[i], rs.pseudo_v[i]);
        mean += js[i];
    }
    mean /= rs.n;
    double ss = 0.0;
    for (double j : js) ss += (j - mean) * (j - mean);
    return 6.0 * std::sqrt(ss / (rs.n - 1));
}

ConfidenceInterval confidence_interval(const RankedSample& rs, double alpha, double sigma) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("confidence_interval: alpha must lie in (0,1)");
    }
    if (sigma < 0.0) sigma = sigma_hat(rs);
    const double center = phi_hat(rs);
    const double z = num::norm_upper_quantile(alpha / 2.0);
    const double half = z * sigma / std::sqrt(static_cast<double>(rs.n));
    return {std::max(-1.0, center - half), std::min(0.5, center + half)};
}

CountermonotonicityTest countermonotonicity_test(const RankedSample& rs, double alpha,
                                                 double sigma) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("countermonotonicity_test: alpha must lie in (0,1)");
    }
    if (sigma < 0.0) sigma = sigma_hat(rs);
    const double phi = phi_hat(rs);

    CountermonotonicityTest out;
    if (phi <= -1.0) {
        // phi_hat == -1 exactly iff the ranks are countermonotone: the data
        // sit on the null boundary and H0 is not rejected by convention.
        out.t_stat = 0.0;
        out.p_value = 1.0;
        out.reject = false;
        out.verdict = TestVerdict::Boundary;
        return out;
    }
    if (sigma == 0.0) {
        out.t_stat = std::numeric_limits<double>::infinity();
        out.p_value = 0.0;
        out.reject = true;
        out.verdict = TestVerdict::Reject;
        return out;
    }

    out.t_stat = std::sqrt(static_cast<double>(rs.n)) * (phi + 1.0) / sigma;
    out.p_value = std::clamp(1.0 - num::norm_cdf(out.t_stat), 0.0, 1.0);
    out.reject = out.t_stat > num::norm_upper_quantile(alpha);
    out.verdict = out.reject ? TestVerdict::Reject : TestVerdict::FailToReject;
    return out;
}

double perturbation_bound_check(const RankedSample& rs, int index,
                                const UnitSquarePoint& replacement) {
    if (index < 0 || index >= rs.n) {
        throw std::invalid_argument("perturbation_bound_check: index out of range");
    }
    const double before = phi_hat(rs);
    std::vector<double> xs = rs.pseudo_u;
    std::vector<double> ys = rs.pseudo_v;
    xs[index] = replacement.u;
    ys[index] = replacement.v;
    const RankedSample perturbed = rank_data(xs, ys, TiePolicy::MidRank);
    return std::fabs(phi_hat(perturbed) - before);
}

EstimateReport estimate_report(const RankedSample& rs, double alpha) {
    EstimateReport report;
    report.n = rs.n;
    report.alpha = alpha;
    report.phi_hat = phi_hat(rs);
    report.footrule_hat = footrule_hat(rs);
    report.gini_hat = gini_hat(rs);
    report.sigma_hat = sigma_hat(rs);
    const ConfidenceInterval ci = confidence_interval(rs, alpha, report.sigma_hat);
    report.ci_low = ci.low;
    report.ci_high = ci.high;
    const CountermonotonicityTest test = countermonotonicity_test(rs, alpha, report.sigma_hat);
    report.test_stat = test.t_stat;
    report.p_value = test.p_value;
    report.verdict = test.verdict;
    return report;
}

}  // namespace wfoot
