#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rcdt/rng.hpp"
#include "rcdt/transport.hpp"

namespace rcdt {

/// Transport cost by exhaustive search over all N! assignments between
/// the supports, entirely independent of the sorting-based kernel.
/// Refuses N > 8 (40320 permutations is the intended ceiling).  Throws
/// std::invalid_argument on size mismatch or oversize input.
double assignment_wasserstein_1d(const Distribution1D& a, const Distribution1D& b);

Distribution1D random_distribution_1d(CounterRng& rng, std::size_t n, double lo, double hi);
Distribution2D random_distribution_2d(CounterRng& rng, std::size_t n, double lo, double hi);

/// Random strictly increasing piecewise-linear map with 2 to 5
/// breakpoints in [-12, 12] and slopes in [0.2, 3].
MonotoneMap1D random_monotone_map(CounterRng& rng);

/// Outcome of checking one invariant over many randomized trials.
struct PropertyResult {
    std::string name;
    std::size_t trials = 0;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    /// Seed of the first failing trial; feed it back through the same
    /// check to replay exactly that trial.
    std::optional<std::uint64_t> failure_seed;
};

struct PropertyReport {
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::vector<PropertyResult> properties;

    bool all_passed() const;
    std::string to_json(int indent = 2) const;
};

using Wasserstein1dFn = std::function<double(const Distribution1D&, const Distribution1D&)>;

/// Checks `kernel` against the exhaustive assignment oracle on random
/// small inputs.  The kernel is injectable so the harness itself can be
/// shown to catch a wrong implementation.
PropertyResult check_wasserstein_isometry(std::uint64_t seed, std::size_t trials,
                                          const Wasserstein1dFn& kernel);

/// Runs every registered invariant check with `trials` randomized trials
/// each.  Deterministic in (seed, trials).
PropertyReport run_property_suite(std::uint64_t seed, std::size_t trials);

}  // namespace rcdt
