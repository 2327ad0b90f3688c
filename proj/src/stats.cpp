#include "hirsch/stats.hpp"

#include <algorithm>
#include <cmath>

#include "hirsch/error.hpp"
#include "hirsch/rng.hpp"

namespace hirsch {

namespace {

void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

// Exact integral of |d0 + (d1 - d0) t / dx| over [0, dx].
double abs_linear_integral(double d0, double d1, double dx) {
  if (dx <= 0.0) return 0.0;
  if ((d0 >= 0.0 && d1 >= 0.0) || (d0 <= 0.0 && d1 <= 0.0)) {
    return 0.5 * (std::abs(d0) + std::abs(d1)) * dx;
  }
  return 0.5 * dx * (d0 * d0 + d1 * d1) / std::abs(d1 - d0);
}

}  // namespace

double ks_threshold(std::size_t n, double alpha) {
  require(n > 0, Errc::invalid_argument, "sample count must be positive");
  require(alpha > 0.0 && alpha < 1.0, Errc::invalid_argument,
          "alpha must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  require(!samples.empty(), Errc::invalid_argument, "no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    worst = std::max({worst, f - below, above - f});
  }
  return worst;
}

std::vector<double> grid_prefix(const CircleMeasure& mu) {
  const auto& w = mu.weights();
  std::vector<double> prefix(w.size() + 1, 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) prefix[j + 1] = prefix[j] + w[j];
  const double total = prefix.back();
  require(total > 0.0, Errc::invalid_argument, "measure has no mass");
  for (auto& p : prefix) p /= total;
  prefix.back() = 1.0;
  return prefix;
}

double grid_cdf(const std::vector<double>& prefix, double x) {
  require(prefix.size() >= 2, Errc::invalid_argument, "prefix too short");
  require(std::isfinite(x) && x >= 0.0 && x <= 1.0, Errc::invalid_argument,
          "x must lie in [0, 1]");
  const double cells = static_cast<double>(prefix.size() - 1);
  const double s = x * cells;
  const auto j = static_cast<std::size_t>(s);
  if (j >= prefix.size() - 1) return 1.0;
  const double f = s - static_cast<double>(j);
  return prefix[j] + f * (prefix[j + 1] - prefix[j]);
}

double grid_inverse_cdf(const std::vector<double>& prefix, double u) {
  require(prefix.size() >= 2, Errc::invalid_argument, "prefix too short");
  require(std::isfinite(u) && u >= 0.0 && u < 1.0, Errc::invalid_argument,
          "u must lie in [0, 1)");
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
  std::size_t j = static_cast<std::size_t>(it - prefix.begin());
  j = (j == 0) ? 0 : j - 1;
  if (j >= prefix.size() - 1) j = prefix.size() - 2;
  const double w = prefix[j + 1] - prefix[j];
  const double frac = (w > 0.0) ? (u - prefix[j]) / w : 0.0;
  const double cells = static_cast<double>(prefix.size() - 1);
  double x = (static_cast<double>(j) + frac) / cells;
  if (x >= 1.0) x = std::nextafter(1.0, 0.0);
  return x;
}

double w1_empirical_vs_grid(std::vector<double> samples,
                            const CircleMeasure& mu) {
  require(!samples.empty(), Errc::invalid_argument, "no samples");
  for (const double x : samples) {
    require(std::isfinite(x) && x >= 0.0 && x < 1.0, Errc::invalid_argument,
            "samples must lie in [0, 1)");
  }
  std::sort(samples.begin(), samples.end());
  const auto prefix = grid_prefix(mu);
  const auto cells = static_cast<double>(prefix.size() - 1);
  const double n = static_cast<double>(samples.size());

  double integral = 0.0;
  double x_prev = 0.0;
  std::size_t counted = 0;
  std::size_t si = 0;
  std::size_t node = 1;
  while (x_prev < 1.0) {
    const double node_x = static_cast<double>(node) / cells;
    double x_next = node_x;
    bool at_sample = false;
    if (si < samples.size() && samples[si] < node_x) {
      x_next = samples[si];
      at_sample = true;
    }
    const double emp = static_cast<double>(counted) / n;
    const double d0 = grid_cdf(prefix, x_prev) - emp;
    const double d1 = grid_cdf(prefix, x_next) - emp;
    integral += abs_linear_integral(d0, d1, x_next - x_prev);
    if (at_sample) {
      while (si < samples.size() && samples[si] == x_next) {
        ++counted;
        ++si;
      }
    } else {
      ++node;
    }
    x_prev = x_next;
  }
  return integral;
}

double w1_grid_grid(const CircleMeasure& a, const CircleMeasure& b) {
  const int level = std::max(a.level(), b.level());
  const CircleMeasure ar = (a.level() < level) ? a.refined(level) : a;
  const CircleMeasure br = (b.level() < level) ? b.refined(level) : b;
  const auto pa = grid_prefix(ar);
  const auto pb = grid_prefix(br);
  const std::size_t cells = pa.size() - 1;
  const double h = 1.0 / static_cast<double>(cells);
  double integral = 0.0;
  for (std::size_t j = 0; j < cells; ++j) {
    integral += abs_linear_integral(pa[j] - pb[j], pa[j + 1] - pb[j + 1], h);
  }
  return integral;
}

double bootstrap_w1_quantile(const CircleMeasure& mu, std::size_t n,
                             std::size_t repetitions, double quantile,
                             std::uint64_t seed) {
  require(n > 0 && repetitions > 0, Errc::invalid_argument,
          "bootstrap needs positive sizes");
  require(quantile > 0.0 && quantile < 1.0, Errc::invalid_argument,
          "quantile must lie in (0, 1)");
  const auto prefix = grid_prefix(mu);
  std::vector<double> dists(repetitions);
  for (std::size_t b = 0; b < repetitions; ++b) {
    PhiloxRng rng(seed, kStreamBootstrap, b);
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
      samples[i] = grid_inverse_cdf(prefix, 1.0 - rng.uniform01());
    }
    dists[b] = w1_empirical_vs_grid(std::move(samples), mu);
  }
  std::sort(dists.begin(), dists.end());
  const double pos = quantile * static_cast<double>(repetitions);
  auto k = static_cast<std::size_t>(std::ceil(pos));
  k = std::clamp<std::size_t>(k, 1, repetitions);
  return dists[k - 1];
}

double chi_square_statistic(const std::vector<std::uint64_t>& counts,
                            double expected) {
  require(expected > 0.0, Errc::invalid_argument,
          "expected count must be positive");
  double stat = 0.0;
  for (const auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

}  // namespace hirsch
