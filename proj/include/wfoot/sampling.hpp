#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wfoot/copula.hpp"
#include "wfoot/rng.hpp"

namespace wfoot {

// Default seed used by the CLI when neither --seed nor WFOOTRULE_SEED is
// given. Fixed so that runs are reproducible out of the box.
inline constexpr std::uint64_t kDefaultSeed = 424242;

struct SampleBatch {
    std::vector<std::pair<double, double>> pairs;  // coordinates in (0,1)
    std::uint64_t seed = 0;
    CopulaSpec spec = CopulaSpec::independence();
};

// Draws one (U,V) pair from the copula. Throws NotSamplableError for
// specs without a sampler (Tilde, and Mixture with a non-samplable side).
std::pair<double, double> sample_pair(const CopulaSpec& spec, RngStream& rng);

// Fills a batch of n i.i.d. pairs from an explicit stream.
SampleBatch sample_into(const CopulaSpec& spec, int n, RngStream& rng);

// Convenience wrapper: n i.i.d. pairs from stream (seed, 0, 0). Identical
// (spec, n, seed) triples produce bit-identical batches.
SampleBatch sample(const CopulaSpec& spec, int n, std::uint64_t seed);

namespace detail {
// Gamma(shape, 1) via Marsaglia-Tsang; consumes a variable number of draws.
double gamma_variate(RngStream& rng, double shape);
// One-sided positive alpha-stable with Laplace transform exp(-s^alpha),
// alpha in (0,1]; Kanter's specialisation of Chambers-Mallows-Stuck.
double positive_stable_variate(RngStream& rng, double alpha);
}  // namespace detail

}  // namespace wfoot
