#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wfoot/copula.hpp"
#include "wfoot/sampling.hpp"

namespace wfoot {

enum class TiePolicy { Error, MidRank };

// How footrule_hat is normalised. PseudoObs divides by n(n+1), matching the
// pseudo-observation convention of phi_hat; Classical divides by n^2-1.
enum class FootruleNorm { PseudoObs, Classical };

// Paired ranks and pseudo-observations of a bivariate sample. Under the
// MidRank policy tied blocks receive average ranks (multiples of 1/2) and
// has_ties is set. Immutable once built.
struct RankedSample {
    int n = 0;
    std::vector<double> rank_x;   // in {1..n} or mid-ranks
    std::vector<double> rank_y;
    std::vector<double> pseudo_u;  // rank / (n+1), in (0,1)
    std::vector<double> pseudo_v;
    bool has_ties = false;
};

RankedSample rank_data(std::span<const double> xs, std::span<const double> ys,
                       TiePolicy policy = TiePolicy::MidRank);

// Ranks a copula-scale batch; the estimators only see ranks, so sampling on
// the copula scale loses nothing.
RankedSample rank_batch(const SampleBatch& batch);

// The rank estimator of the anti-diagonal coefficient:
//   6 / (n(n+1)) * sum (n+1-R_i-S_i)^+  - 1.
// The sum is accumulated exactly in integers (half-integer ranks included)
// before a single floating division.
double phi_hat(const RankedSample& rs);

// 1 - 3 * sum |R_i - S_i| / n(n+1)  (PseudoObs), or / (n^2-1) (Classical).
double footrule_hat(const RankedSample& rs, FootruleNorm norm = FootruleNorm::PseudoObs);

// (2/3) * (footrule_hat + phi_hat).
double gini_hat(const RankedSample& rs);

// Empirical copula C_n(u,v) = (1/n) sum 1(U_i <= u, V_i <= v).
double empirical_copula(const RankedSample& rs, const UnitSquarePoint& p);

enum class PartialVar { d1, d2 };

inline double default_bandwidth(int n) {
    const double h = 1.0 / std::sqrt(static_cast<double>(n));
    return std::min(0.25, std::max(1.0 / n, h));
}

// Finite-difference estimate of dC/du (d1) or dC/dv (d2) at p, step h;
// the difference is one-sided within h of the boundary. Clipped to [0,1].
double partial_derivative_hat(const RankedSample& rs, PartialVar which,
                              const UnitSquarePoint& p, double h);

inline constexpr int kDefaultInfluenceGrid = 512;

// Precomputes the two anti-diagonal integrals of the estimated partial
// derivatives on a G-cell grid (midpoint evaluation, cumulative sums,
// linear interpolation), then evaluates
//   j(u,v) = (1-u-v)^+ - Int_u^1 dC1(s,1-s) ds - Int_0^{1-v} dC2(s,1-s) ds.
class EmpiricalInfluence {
public:
    EmpiricalInfluence(const RankedSample& rs, double h, int grid_cells);

    double j_hat(double u, double v) const;
    double bandwidth() const noexcept { return h_; }
    int grid_cells() const noexcept { return grid_cells_; }

private:
    double integral_from(double u) const;  // Int_u^1 g1
    double integral_to(double t) const;    // Int_0^t g2

    double h_;
    int grid_cells_;
    std::vector<double> cum1_;  // cumulative Int_0^x g1 at cell boundaries
    std::vector<double> cum2_;
};

// Convenience single-point evaluation with default bandwidth and grid.
double influence_hat(const RankedSample& rs, const UnitSquarePoint& p);

// j-values on a regular lattice of lattice_points x lattice_points points
// covering [0,1]^2; row-major with u varying fastest.
struct InfluenceGrid {
    int lattice_points = 0;
    double bandwidth = 0.0;
    std::vector<double> values;
    double u_at(int i) const { return static_cast<double>(i) / (lattice_points - 1); }
    double v_at(int j) const { return static_cast<double>(j) / (lattice_points - 1); }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * lattice_points + i]; }
};

InfluenceGrid influence_grid(const RankedSample& rs, int lattice_points,
                             double h = 0.0, int grid_cells = kDefaultInfluenceGrid);

// Plug-in estimate of the asymptotic standard deviation:
//   sigma^2 = 36/(n-1) * sum (j_i - mean j)^2,   j_i = j_hat(U_i, V_i).
// h <= 0 selects the default bandwidth n^(-1/2) clipped to [1/n, 1/4].
double sigma_hat(const RankedSample& rs, double h = 0.0,
                 int grid_cells = kDefaultInfluenceGrid);

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

// phi_hat +/- z_{alpha/2} sigma_hat / sqrt(n), intersected with [-1, 1/2].
ConfidenceInterval confidence_interval(const RankedSample& rs, double alpha,
                                       double sigma = -1.0);

enum class TestVerdict { Reject, FailToReject, Boundary };

// One-sided test of H0: C = W based on T_n = sqrt(n)(phi_hat + 1)/sigma_hat.
// Exactly countermonotone data (sigma = 0, phi_hat = -1) yields the
// Boundary verdict instead of a division by zero.
struct CountermonotonicityTest {
    double t_stat = 0.0;
    double p_value = 1.0;
    bool reject = false;
    TestVerdict verdict = TestVerdict::FailToReject;
};

CountermonotonicityTest countermonotonicity_test(const RankedSample& rs, double alpha,
                                                 double sigma = -1.0);

// Replaces observation `index` by the given point on the copula scale,
// re-ranks, and returns |phi_hat(new) - phi_hat(old)|. The robustness
// guarantee bounds the result by 12/n.
double perturbation_bound_check(const RankedSample& rs, int index,
                                const UnitSquarePoint& replacement);

// Everything the CLI reports for one data set.
struct EstimateReport {
    double phi_hat = 0.0;
    double footrule_hat = 0.0;
    double gini_hat = 0.0;
    double sigma_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double test_stat = 0.0;
    double p_value = 1.0;
    TestVerdict verdict = TestVerdict::FailToReject;
    int n = 0;
    double alpha = 0.05;
};

EstimateReport estimate_report(const RankedSample& rs, double alpha = 0.05);

}  // namespace wfoot
