#include "wfoot/sampling.hpp"

#include <cmath>

#include "wfoot/errors.hpp"
#include "wfoot/normal.hpp"

namespace wfoot {

namespace detail {

double gamma_variate(RngStream& rng, double shape) {
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a+1) * U^(1/a).
        const double u = rng.next_unit();
        return gamma_variate(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, vcube;
        do {
            x = rng.next_normal();
            vcube = 1.0 + c * x;
        } while (vcube <= 0.0);
        vcube = vcube * vcube * vcube;
        const double u = rng.next_unit();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * vcube;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - vcube + std::log(vcube))) return d * vcube;
    }
}

double positive_stable_variate(RngStream& rng, double alpha) {
    if (alpha == 1.0) return 1.0;
    const double pi = 3.14159265358979323846;
    const double u = pi * rng.next_unit();
    const double w = rng.next_exponential();
    const double factor = std::sin((1.0 - alpha) * u) / w;
    return std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha) *
           std::pow(factor, (1.0 - alpha) / alpha);
}

}  // namespace detail

namespace {

std::pair<double, double> sample_gaussian(double rho, RngStream& rng) {
    const double z1 = rng.next_normal();
    const double z2 = rng.next_normal();
    const double y = rho * z1 + std::sqrt(1.0 - rho * rho) * z2;
    return {num::norm_cdf(z1), num::norm_cdf(y)};
}

// Marshall-Olkin frailty: W ~ Gamma(1/theta), U = (1 + E/W)^(-1/theta).
std::pair<double, double> sample_clayton(double theta, RngStream& rng) {
    const double w = detail::gamma_variate(rng, 1.0 / theta);
    const double e1 = rng.next_exponential();
    const double e2 = rng.next_exponential();
    return {std::pow(1.0 + e1 / w, -1.0 / theta), std::pow(1.0 + e2 / w, -1.0 / theta)};
}

// Positive-stable frailty: S with LT exp(-s^(1/theta)), U = exp(-(E/S)^(1/theta)).
std::pair<double, double> sample_gumbel(double theta, RngStream& rng) {
    const double s = detail::positive_stable_variate(rng, 1.0 / theta);
    const double e1 = rng.next_exponential();
    const double e2 = rng.next_exponential();
    return {std::exp(-std::pow(e1 / s, 1.0 / theta)),
            std::exp(-std::pow(e2 / s, 1.0 / theta))};
}

// Conditional inversion; the conditional CDF of V given U = u inverts in
// closed form.
std::pair<double, double> sample_frank(double theta, RngStream& rng) {
    const double u = rng.next_unit();
    const double p = rng.next_unit();
    const double a = std::expm1(-theta);
    const double x = std::expm1(-theta * u);
    const double y = p * a / (1.0 + (1.0 - p) * x);
    const double v = -std::log1p(y) / theta;
    return {u, v};
}

// Uniform mass on the segments (0,0)-(1/2,1/2) and (1/2,1)-(1,1/2).
std::pair<double, double> sample_two_segment(RngStream& rng) {
    const double t = 0.5 * rng.next_unit();
    const bool lower = rng.next_unit() < 0.5;
    if (lower) return {t, t};
    return {0.5 + t, 1.0 - t};
}

}  // namespace

std::pair<double, double> sample_pair(const CopulaSpec& spec, RngStream& rng) {
    switch (spec.family()) {
        case Family::Independence:
            return {rng.next_unit(), rng.next_unit()};
        case Family::LowerBoundW: {
            const double u = rng.next_unit();
            return {u, 1.0 - u};
        }
        case Family::UpperBoundM: {
            const double u = rng.next_unit();
            return {u, u};
        }
        case Family::Gaussian: {
            const double rho = spec.param();
            if (rho == 1.0) {
                const double u = rng.next_unit();
                return {u, u};
            }
            if (rho == -1.0) {
                const double u = rng.next_unit();
                return {u, 1.0 - u};
            }
            return sample_gaussian(rho, rng);
        }
        case Family::Clayton:
            return sample_clayton(spec.param(), rng);
        case Family::Gumbel:
            return sample_gumbel(spec.param(), rng);
        case Family::Frank:
            return sample_frank(spec.param(), rng);
        case Family::TwoSegment:
            return sample_two_segment(rng);
        case Family::Transpose: {
            auto [u, v] = sample_pair(spec.inner(), rng);
            return {v, u};
        }
        case Family::Survival: {
            auto [u, v] = sample_pair(spec.inner(), rng);
            return {1.0 - u, 1.0 - v};
        }
        case Family::Mixture: {
            if (!spec.samplable()) break;
            const double coin = rng.next_unit();
            return coin < spec.weight() ? sample_pair(spec.left(), rng)
                                        : sample_pair(spec.right(), rng);
        }
        case Family::Tilde:
            break;
    }
    throw NotSamplableError("sample: no sampler for copula '" + spec.to_string() + "'");
}

SampleBatch sample_into(const CopulaSpec& spec, int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    if (!spec.samplable()) {
        throw NotSamplableError("sample: no sampler for copula '" + spec.to_string() + "'");
    }
    SampleBatch batch;
    batch.spec = spec;
    batch.pairs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) batch.pairs.push_back(sample_pair(spec, rng));
    return batch;
}

SampleBatch sample(const CopulaSpec& spec, int n, std::uint64_t seed) {
    RngStream rng(seed, 0, 0);
    SampleBatch batch = sample_into(spec, n, rng);
    batch.seed = seed;
    return batch;
}

}  // namespace wfoot
