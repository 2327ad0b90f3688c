#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hirsch/circle_dynamics.hpp"

namespace hirsch {

// Distribution-free critical value sqrt(log(2/alpha) / (2n)): by the
// Dvoretzky-Kiefer-Wolfowitz bound, an exceedance has probability at most
// alpha under the null.
double ks_threshold(std::size_t n, double alpha);

// Kolmogorov-Smirnov statistic of the samples against a continuous CDF.
// The samples are copied and sorted internally.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Prefix sums of the arc weights: one entry per node, starting at 0 and
// pinned to end at exactly 1.
std::vector<double> grid_prefix(const CircleMeasure& mu);

// CDF of the grid measure spread uniformly within each arc: piecewise
// linear through the prefix values. Requires x in [0, 1].
double grid_cdf(const std::vector<double>& prefix, double x);

// Inverse of grid_cdf; feeding uniform draws on [0, 1) gives exact
// inverse-CDF samples of the grid measure. Returns a point in [0, 1).
double grid_inverse_cdf(const std::vector<double>& prefix, double u);

// L1 distance between the empirical CDF of the samples and grid_cdf,
// integrated exactly between the merged breakpoints. On the interval this
// equals the Wasserstein-1 distance. Samples must lie in [0, 1).
double w1_empirical_vs_grid(std::vector<double> samples,
                            const CircleMeasure& mu);

// Wasserstein-1 distance between two grid measures; the coarser one is
// refined first, which leaves the distance unchanged.
double w1_grid_grid(const CircleMeasure& a, const CircleMeasure& b);

// Upper quantile of the W1 distance between the grid measure and an
// n-point sample drawn from it, estimated over the given number of
// repetitions. Repetition b draws from Philox path b of the bootstrap
// stream, so the band is deterministic in the seed.
double bootstrap_w1_quantile(const CircleMeasure& mu, std::size_t n,
                             std::size_t repetitions, double quantile,
                             std::uint64_t seed);

// Pearson statistic of the counts against a flat expectation.
double chi_square_statistic(const std::vector<std::uint64_t>& counts,
                            double expected);

}  // namespace hirsch
