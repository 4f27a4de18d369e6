#pragma once

#include <stdexcept>
#include <string>

namespace wfoot {

// Bad or inconsistent input data (length mismatch, ties under the Error
// policy, malformed CSV). CLI maps this to exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to reach its requested accuracy. Carries the
// best estimate obtained and the error bound actually achieved.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double best_estimate, double achieved_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), achieved_bound_(achieved_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double achieved_bound() const noexcept { return achieved_bound_; }

private:
    double best_estimate_;
    double achieved_bound_;
};

// Requested a random sample from a copula that has no sampler.
class NotSamplableError : public std::invalid_argument {
public:
    explicit NotSamplableError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace wfoot
