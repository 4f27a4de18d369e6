#include "wfoot/truth.hpp"

#include <cmath>
#include <functional>

#include "wfoot/errors.hpp"
#include "wfoot/quadrature.hpp"
#include "wfoot/sampling.hpp"

namespace wfoot {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool exact_family(Family f) {
    return f == Family::Independence || f == Family::LowerBoundW ||
           f == Family::UpperBoundM || f == Family::TwoSegment;
}

// Int_0^1 f(u) du, split at 1/2 where the benchmark integrands have kinks.
ValueWithBound integrate_unit(const std::function<double(double)>& f, double tol,
                              double scale) {
    // scale is the factor applied afterwards (6 or 4); budget the
    // per-half tolerance so the scaled bound stays below tol.
    const double half_tol = tol / (2.0 * scale);
    double err_lo = 0.0, err_hi = 0.0;
    const double lo = num::integrate_or_throw(f, 0.0, 0.5, half_tol, &err_lo);
    const double hi = num::integrate_or_throw(f, 0.5, 1.0, half_tol, &err_hi);
    return {lo + hi, err_lo + err_hi};
}

double check_tol(double tol) {
    if (!(tol >= 1e-12)) {
        throw std::invalid_argument("truth: tolerance must be >= 1e-12");
    }
    return tol;
}

}  // namespace

ValueWithBound phi_by_quadrature(const CopulaSpec& spec, double tol) {
    check_tol(tol);
    auto integrand = [&spec](double u) { return cdf(spec, u, 1.0 - u); };
    ValueWithBound integral = integrate_unit(integrand, tol, 6.0);
    return {6.0 * integral.value - 1.0, 6.0 * integral.error_bound};
}

ValueWithBound footrule_by_quadrature(const CopulaSpec& spec, double tol) {
    check_tol(tol);
    auto integrand = [&spec](double u) { return cdf(spec, u, u); };
    ValueWithBound integral = integrate_unit(integrand, tol, 6.0);
    return {6.0 * integral.value - 2.0, 6.0 * integral.error_bound};
}

ValueWithBound phi_true(const CopulaSpec& spec, double tol) {
    check_tol(tol);
    switch (spec.family()) {
        case Family::Independence: return {0.0, 0.0};
        case Family::LowerBoundW: return {-1.0, 0.0};
        case Family::UpperBoundM: return {0.5, 0.0};
        case Family::TwoSegment: return {0.5, 0.0};
        case Family::Gaussian: {
            const double rho = spec.param();
            if (rho == 1.0) return {0.5, 0.0};    // M
            if (rho == -1.0) return {-1.0, 0.0};  // W
            return {0.5 + 3.0 / kPi * std::asin((rho - 1.0) / 2.0), 0.0};
        }
        default:
            return phi_by_quadrature(spec, tol);
    }
}

ValueWithBound footrule_true(const CopulaSpec& spec, double tol) {
    check_tol(tol);
    switch (spec.family()) {
        case Family::Independence: return {0.0, 0.0};
        case Family::LowerBoundW: return {-0.5, 0.0};
        case Family::UpperBoundM: return {1.0, 0.0};
        case Family::TwoSegment: return {0.625, 0.0};  // 6 * 7/16 - 2
        case Family::Gaussian: {
            // Same orthant-probability construction as the anti-diagonal
            // closed form, along the main diagonal: correlation (rho+1)/2.
            const double rho = spec.param();
            if (rho == 1.0) return {1.0, 0.0};
            if (rho == -1.0) return {-0.5, 0.0};
            return {-0.5 + 3.0 / kPi * std::asin((rho + 1.0) / 2.0), 0.0};
        }
        default:
            return footrule_by_quadrature(spec, tol);
    }
}

ValueWithBound gini_true(const CopulaSpec& spec, double tol) {
    check_tol(tol);
    if (exact_family(spec.family()) || spec.family() == Family::Gaussian) {
        const ValueWithBound phi = phi_true(spec, tol);
        const ValueWithBound foot = footrule_true(spec, tol);
        return {2.0 / 3.0 * (foot.value + phi.value),
                2.0 / 3.0 * (foot.error_bound + phi.error_bound)};
    }
    auto integrand = [&spec](double u) { return cdf(spec, u, u) + cdf(spec, u, 1.0 - u); };
    ValueWithBound integral = integrate_unit(integrand, tol, 4.0);
    return {4.0 * integral.value - 2.0, 4.0 * integral.error_bound};
}

TrueValues true_values(const CopulaSpec& spec, double tol) {
    const ValueWithBound phi = phi_true(spec, tol);
    const ValueWithBound foot = footrule_true(spec, tol);
    const ValueWithBound gini = gini_true(spec, tol);

    TrueValues tv;
    tv.phi_w = phi.value;
    tv.footrule = foot.value;
    tv.gini = gini.value;
    tv.abs_error_bound = std::max({phi.error_bound, foot.error_bound, gini.error_bound});
    tv.method = (exact_family(spec.family()) || spec.family() == Family::Gaussian)
                    ? TruthMethod::ClosedForm
                    : TruthMethod::Quadrature;

    const double slack = 2.0 * tv.abs_error_bound + 1e-13;
    if (std::fabs(tv.gini - 2.0 / 3.0 * (tv.footrule + tv.phi_w)) > slack) {
        throw NumericalError("true_values: gini decomposition check failed", tv.gini, slack);
    }
    if (tv.phi_w < -1.0 - slack || tv.phi_w > 0.5 + slack) {
        throw NumericalError("true_values: phi outside [-1, 1/2]", tv.phi_w, slack);
    }
    return tv;
}

OracleEstimate phi_oracle_l1(const CopulaSpec& spec, int n_mc, std::uint64_t seed) {
    if (n_mc < 2) throw std::invalid_argument("phi_oracle_l1: n_mc must be >= 2");
    SampleBatch batch = sample(spec, n_mc, seed);

    double mean = 0.0;
    double m2 = 0.0;
    int count = 0;
    for (const auto& [u, v] : batch.pairs) {
        const double z = std::fabs(1.0 - u - v);
        ++count;
        const double delta = z - mean;
        mean += delta / count;
        m2 += delta * (z - mean);
    }
    const double var = m2 / (count - 1);
    OracleEstimate est;
    est.value = 3.0 * mean - 1.0;
    est.std_error = 3.0 * std::sqrt(var / count);
    est.n_mc = n_mc;
    return est;
}

std::string to_string(TruthMethod method) {
    switch (method) {
        case TruthMethod::ClosedForm: return "closed_form";
        case TruthMethod::Quadrature: return "quadrature";
        case TruthMethod::MonteCarloOracle: return "mc_oracle";
    }
    return "?";
}

}  // namespace wfoot
