#include "hirsch/harmonic_measures.hpp"

#include <algorithm>
#include <cmath>

#include "hirsch/error.hpp"
#include "hirsch/stats.hpp"

namespace hirsch {

namespace {

void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

double cylinder_mass(const PantsShape& shape, Chart c, int cells_per_unit) {
  const double len = cylinder_length(shape, c);
  const auto cells = std::max<long long>(
      1, std::llround(len * static_cast<double>(cells_per_unit)));
  const double h = len / static_cast<double>(cells);
  double sum = 0.0;
  for (long long i = 0; i < cells; ++i) {
    const double v = (static_cast<double>(i) + 0.5) * h;
    const ChartPoint p{c, 0.5, v};
    const Metric2 m = metric_at(shape, p);
    sum += harmonic_phi(shape, p) * std::sqrt(m.g_uu * m.g_vv) * h;
  }
  return sum;
}

}  // namespace

double fiber_mass(const PantsShape& shape) {
  return shape.l1() * shape.bottom_len1() + shape.l2() * shape.bottom_len2();
}

double fiber_mass_quadrature(const PantsShape& shape, int cells_per_unit) {
  require(cells_per_unit >= 1, Errc::invalid_argument,
          "need at least one cell per unit length");
  return cylinder_mass(shape, Chart::cylinder1, cells_per_unit) +
         cylinder_mass(shape, Chart::cylinder2, cells_per_unit);
}

HarmonicMeasure::HarmonicMeasure(MetricFamily family, const CircleMeasure& mu)
    : family_(std::move(family)),
      marginal_(CircleMeasure::uniform(1)),
      total_mass_(0.0) {
  const int level = mu.level();
  const std::size_t n = mu.size();
  std::vector<double> tilted(n);
  for (std::size_t j = 0; j < n; ++j) {
    const CircleAngle mid =
        CircleAngle::from_dyadic(2 * j + 1, level + 1);
    tilted[j] = mu.arc_weight(j) * fiber_mass(pants_shape_at(family_, mid));
  }
  double total = 0.0;
  for (const double w : tilted) total += w;
  require(total > 0.0, Errc::invalid_argument, "measure has no mass");
  total_mass_ = total;
  for (auto& w : tilted) w /= total;
  marginal_ = CircleMeasure::from_weights(level, std::move(tilted));
  prefix_ = grid_prefix(marginal_);
}

CircleMeasure HarmonicMeasure::deck_folded_marginal() const {
  const std::size_t n = marginal_.size();
  std::vector<double> folded(n, 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < n / 2; ++j) {
    folded[j] = marginal_.arc_weight(j) + marginal_.arc_weight(j + n / 2);
    total += folded[j];
  }
  for (std::size_t j = 0; j < n / 2; ++j) folded[j] /= total;
  return CircleMeasure::from_weights(marginal_.level(), std::move(folded));
}

FoliatedPoint HarmonicMeasure::sample_point(PhiloxRng& rng) const {
  const double z = grid_inverse_cdf(prefix_, 1.0 - rng.uniform01());
  const CircleAngle fiber = CircleAngle::from_turns(z);
  const PantsShape shape = pants_shape_at(family_, fiber);
  const double m1 = shape.l1() * shape.bottom_len1();
  const double m2 = shape.l2() * shape.bottom_len2();
  const Chart chart = (rng.uniform01() * (m1 + m2) <= m1) ? Chart::cylinder1
                                                          : Chart::cylinder2;
  const double u = 1.0 - rng.uniform01();
  const double len = cylinder_length(shape, chart);
  const double v = (1.0 - rng.uniform01()) * len;
  return {fiber, ChartPoint{chart, u, v}};
}

StationarityReport stationarity_test(const MetricFamily& family,
                                     const CircleMeasure& mu,
                                     const StationarityConfig& cfg) {
  require(cfg.n_paths > 0, Errc::invalid_argument, "need at least one path");
  require(cfg.alpha > 0.0 && cfg.alpha < 1.0, Errc::invalid_argument,
          "alpha must lie in (0, 1)");
  const HarmonicMeasure hm(family, mu);
  const std::size_t n = cfg.n_paths;
  std::vector<double> fiber_coord(n);
  std::vector<double> depth_coord(n);
  parallel_for_paths(n, [&](std::size_t i) {
    PhiloxRng init(cfg.seed, kStreamInitialSample, i);
    const FoliatedPoint start = hm.sample_point(init);
    DiffusionConfig dc;
    dc.dt = cfg.dt;
    dc.t_end = cfg.t_end;
    dc.seed = cfg.seed;
    dc.path_index = i;
    dc.cone_guard = cfg.cone_guard;
    dc.max_events = cfg.max_events;
    const FoliatedPoint end = canonical(evolve_final(family, start, dc));
    fiber_coord[i] = end.fiber.turns();
    const PantsShape shape = pants_shape_at(family, end.fiber);
    const double len = cylinder_length(shape, end.point.chart);
    depth_coord[i] = std::clamp(end.point.v / len, 0.0, 1.0);
  });

  const CircleMeasure folded = hm.deck_folded_marginal();
  const auto prefix = grid_prefix(folded);
  StationarityReport rep;
  rep.n_paths = n;
  rep.t_end = cfg.t_end;
  rep.dt = cfg.dt;
  rep.alpha = cfg.alpha;
  rep.ks_fiber = ks_statistic(
      fiber_coord, [&prefix](double x) { return grid_cdf(prefix, x); });
  rep.ks_fiber_threshold = ks_threshold(n, cfg.alpha);
  rep.w1_fiber = w1_empirical_vs_grid(fiber_coord, folded);
  rep.w1_band = bootstrap_w1_quantile(folded, n, cfg.bootstrap_reps,
                                      1.0 - cfg.alpha, cfg.seed);
  rep.ks_depth = ks_statistic(depth_coord, [](double x) {
    return std::clamp(x, 0.0, 1.0);
  });
  rep.ks_depth_threshold =
      ks_threshold(n, cfg.alpha) + 0.5 * std::sqrt(cfg.dt);
  rep.fiber_ks_pass = rep.ks_fiber <= rep.ks_fiber_threshold;
  rep.fiber_w1_pass = rep.w1_fiber <= rep.w1_band;
  rep.depth_pass = rep.ks_depth <= rep.ks_depth_threshold;
  rep.stationary = rep.fiber_ks_pass && rep.fiber_w1_pass && rep.depth_pass;
  return rep;
}

bool same_family(const MetricFamily& a, const MetricFamily& b) {
  return a.g() == b.g() && a.slit_depth() == b.slit_depth();
}

double distinctness_distance(const HarmonicMeasure& a,
                             const HarmonicMeasure& b) {
  require(same_family(a.family(), b.family()), Errc::family_mismatch,
          "the measures live over different families");
  return w1_grid_grid(a.transverse_marginal(), b.transverse_marginal());
}

}  // namespace hirsch
