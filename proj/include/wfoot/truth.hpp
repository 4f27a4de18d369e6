#pragma once

#include <cstdint>
#include <string>

#include "wfoot/copula.hpp"

namespace wfoot {

enum class TruthMethod { ClosedForm, Quadrature, MonteCarloOracle };

struct ValueWithBound {
    double value = 0.0;
    double error_bound = 0.0;
};

// Population values of the three coefficients for one copula, with the
// evaluation method and a conservative absolute error bound.
struct TrueValues {
    double phi_w = 0.0;      // in [-1, 1/2]
    double footrule = 0.0;   // in [-1/2, 1]
    double gini = 0.0;       // in [-1, 1]
    TruthMethod method = TruthMethod::Quadrature;
    double abs_error_bound = 0.0;
};

inline constexpr double kDefaultTruthTol = 1e-9;

// The anti-diagonal coefficient: 6 * Int_0^1 C(u,1-u) du - 1. Exact for
// Pi/W/M/TwoSegment, closed form for Gaussian, adaptive quadrature
// otherwise. Throws NumericalError if the tolerance cannot be met.
ValueWithBound phi_true(const CopulaSpec& spec, double tol = kDefaultTruthTol);

// The diagonal coefficient: 6 * Int_0^1 C(u,u) du - 2.
ValueWithBound footrule_true(const CopulaSpec& spec, double tol = kDefaultTruthTol);

// 4 * Int_0^1 [C(u,u) + C(u,1-u)] du - 2; agrees with
// (2/3) * (footrule + phi) up to the stated bounds.
ValueWithBound gini_true(const CopulaSpec& spec, double tol = kDefaultTruthTol);

// All three coefficients at once, with consistency of the decomposition
// checked against the combined error bounds.
TrueValues true_values(const CopulaSpec& spec, double tol = kDefaultTruthTol);

// Quadrature evaluation of the two base integrals regardless of family;
// used to cross-check the closed forms.
ValueWithBound phi_by_quadrature(const CopulaSpec& spec, double tol = kDefaultTruthTol);
ValueWithBound footrule_by_quadrature(const CopulaSpec& spec, double tol = kDefaultTruthTol);

struct OracleEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int n_mc = 0;
};

// Monte Carlo evaluation of 3 * E|1-U-V| - 1 from n_mc sampled pairs.
// Independent of the quadrature path; requires a samplable spec.
OracleEstimate phi_oracle_l1(const CopulaSpec& spec, int n_mc, std::uint64_t seed);

std::string to_string(TruthMethod method);

}  // namespace wfoot
