#pragma once

#include <functional>

namespace wfoot::num {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error of value
    bool converged = false;
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a,b] to absolute
// tolerance abs_tol. Bisects the worst interval until the summed error
// estimate is below abs_tol or max_intervals is reached.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_intervals = 4000);

// integrate(), but throws NumericalError on non-convergence.
double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double* error_out = nullptr,
                          int max_intervals = 4000);

}  // namespace wfoot::num
