#include "hirsch/circle_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace hirsch {

namespace {

constexpr double kIdentityTol = 1e-12;
constexpr int kMaxMeasureLevel = 24;

void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

}  // namespace

CircleAngle CircleAngle::from_turns(double t) {
  require(std::isfinite(t), Errc::invalid_argument,
          "angle in turns must be finite");
  double x = t - std::floor(t);
  if (x >= 1.0) x = 0.0;
  const double y = x * 0x1p64;
  const double hi_f = std::floor(y);
  const auto hi = static_cast<std::uint64_t>(hi_f);
  const double frac = y - hi_f;
  const auto lo = static_cast<std::uint64_t>(frac * 0x1p64);
  return CircleAngle((ticks_t(hi) << 64) | ticks_t(lo));
}

CircleAngle CircleAngle::from_dyadic(std::uint64_t numerator, int level) {
  require(level >= 0 && level <= 64, Errc::invalid_argument,
          "dyadic level must be in [0, 64]");
  if (level == 0) return CircleAngle(0);
  if (level < 64) numerator &= (std::uint64_t(1) << level) - 1;
  return CircleAngle(ticks_t(numerator) << (128 - level));
}

double CircleAngle::turns() const {
  return static_cast<double>(static_cast<std::uint64_t>(ticks_ >> 75)) *
         0x1p-53;
}

std::uint64_t CircleAngle::arc_index(int level) const {
  require(level >= 1 && level <= 64, Errc::invalid_argument,
          "arc level must be in [1, 64]");
  return static_cast<std::uint64_t>(ticks_ >> (128 - level));
}

std::ostream& operator<<(std::ostream& os, CircleAngle a) {
  std::ostringstream tmp;
  tmp << "CircleAngle(" << std::setprecision(17) << a.turns() << " turns)";
  return os << tmp.str();
}

GFunction GFunction::constant2() {
  return GFunction(Kind::constant2, 0.0, 0, {});
}

GFunction GFunction::sine(double amplitude) {
  require(std::isfinite(amplitude) && std::abs(amplitude) < 1.0,
          Errc::invalid_argument, "sine amplitude must satisfy |a| < 1");
  return GFunction(Kind::sine, amplitude, 0, {});
}

GFunction GFunction::tabulated(int level, std::vector<double> node_values) {
  require(level >= 1 && level <= kMaxMeasureLevel, Errc::invalid_argument,
          "table level must be in [1, 24]");
  const std::size_t n = std::size_t(1) << level;
  require(node_values.size() == n, Errc::invalid_argument,
          "table must hold exactly 2^level node values");
  std::vector<double> inv(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = node_values[j];
    require(std::isfinite(v), Errc::invalid_argument,
            "table values must be finite");
    require(v > 1.0, Errc::not_greater_than_one,
            "table values must exceed 1");
    inv[j] = 1.0 / v;
  }
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < half; ++j) {
    const double residual = std::abs(inv[j] + inv[j + half] - 1.0);
    require(residual <= kIdentityTol, Errc::identity_violated,
            "antipodal node pair violates the unit-sum identity");
    inv[j + half] = 1.0 - inv[j];
  }
  return GFunction(Kind::tabulated, 0.0, level, std::move(inv));
}

double GFunction::inv_value(double theta_turns) const {
  switch (kind_) {
    case Kind::constant2:
      return 0.5;
    case Kind::sine: {
      const double x = theta_turns - std::floor(theta_turns);
      return 0.5 * (1.0 + amplitude_ *
                              std::sin(2.0 * std::numbers::pi_v<double> * x));
    }
    case Kind::tabulated: {
      const double x = theta_turns - std::floor(theta_turns);
      const double s = x * static_cast<double>(std::size_t(1) << level_);
      auto i = static_cast<std::size_t>(s);
      const std::size_t mask = inv_.size() - 1;
      i &= mask;
      const double f = s - static_cast<double>(i);
      const double a = inv_[i];
      const double b = inv_[(i + 1) & mask];
      return a + f * (b - a);
    }
  }
  return 0.5;
}

double GFunction::value(double theta_turns) const {
  if (kind_ == Kind::constant2) return 2.0;
  return 1.0 / inv_value(theta_turns);
}

double GFunction::inf_log() const {
  switch (kind_) {
    case Kind::constant2:
      return std::log(2.0);
    case Kind::sine:
      return std::log(2.0) - std::log1p(std::abs(amplitude_));
    case Kind::tabulated: {
      const double max_inv = *std::max_element(inv_.begin(), inv_.end());
      return -std::log(max_inv);
    }
  }
  return 0.0;
}

double GFunction::sine_amplitude() const {
  require(kind_ == Kind::sine, Errc::invalid_argument,
          "amplitude only exists for the sine family");
  return amplitude_;
}

int GFunction::table_level() const {
  require(kind_ == Kind::tabulated, Errc::invalid_argument,
          "table level only exists for tabulated g");
  return level_;
}

const std::vector<double>& GFunction::table_inv_values() const {
  require(kind_ == Kind::tabulated, Errc::invalid_argument,
          "table nodes only exist for tabulated g");
  return inv_;
}

bool operator==(const GFunction& a, const GFunction& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case GFunction::Kind::constant2:
      return true;
    case GFunction::Kind::sine:
      return a.amplitude_ == b.amplitude_;
    case GFunction::Kind::tabulated:
      return a.level_ == b.level_ && a.inv_ == b.inv_;
  }
  return false;
}

GValidation validate_g(const GFunction& g, int grid_level) {
  require(grid_level >= 1 && grid_level <= kMaxMeasureLevel,
          Errc::invalid_argument, "validation grid level must be in [1, 24]");
  const std::size_t half = std::size_t(1) << (grid_level - 1);
  const double h = std::ldexp(1.0, -grid_level);
  GValidation out;
  out.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < half; ++j) {
    const double theta = static_cast<double>(j) * h;
    const double v1 = g.value(theta);
    const double v2 = g.value(theta + 0.5);
    out.min_value = std::min(out.min_value, std::min(v1, v2));
    const double residual =
        std::abs(g.inv_value(theta) + g.inv_value(theta + 0.5) - 1.0);
    out.max_identity_residual = std::max(out.max_identity_residual, residual);
  }
  out.greater_than_one = out.min_value > 1.0;
  out.identity_holds = out.max_identity_residual <= kIdentityTol;
  return out;
}

void ensure_valid(const GFunction& g, int grid_level) {
  const GValidation v = validate_g(g, grid_level);
  require(v.greater_than_one, Errc::not_greater_than_one,
          "g must exceed 1 everywhere on the validation grid");
  require(v.identity_holds, Errc::identity_violated,
          "1/g(t) + 1/g(t + 1/2) must equal 1 within 1e-12");
}

CircleMeasure CircleMeasure::uniform(int level) {
  require(level >= 1 && level <= kMaxMeasureLevel, Errc::invalid_argument,
          "measure level must be in [1, 24]");
  const std::size_t n = std::size_t(1) << level;
  return CircleMeasure(level,
                       std::vector<double>(n, std::ldexp(1.0, -level)));
}

CircleMeasure CircleMeasure::from_weights(int level,
                                          std::vector<double> weights) {
  require(level >= 1 && level <= kMaxMeasureLevel, Errc::invalid_argument,
          "measure level must be in [1, 24]");
  require(weights.size() == (std::size_t(1) << level), Errc::invalid_argument,
          "weight count must equal 2^level");
  double sum = 0.0;
  for (double w : weights) {
    require(std::isfinite(w) && w >= 0.0, Errc::invalid_argument,
            "weights must be finite and nonnegative");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= kIdentityTol, Errc::invalid_argument,
          "weights must sum to 1 within 1e-12");
  return CircleMeasure(level, std::move(weights));
}

double CircleMeasure::total() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return sum;
}

double CircleMeasure::arc_prob(int coarse_level, std::uint64_t j) const {
  require(coarse_level >= 0 && coarse_level <= level_, Errc::invalid_argument,
          "arc level must not exceed the measure level");
  require(j < (std::uint64_t(1) << coarse_level), Errc::invalid_argument,
          "arc index out of range");
  const std::size_t span = std::size_t(1) << (level_ - coarse_level);
  const std::size_t start = static_cast<std::size_t>(j) * span;
  double sum = 0.0;
  for (std::size_t i = 0; i < span; ++i) sum += weights_[start + i];
  return sum;
}

CircleMeasure CircleMeasure::refined(int to_level) const {
  require(to_level >= level_ && to_level <= kMaxMeasureLevel,
          Errc::invalid_argument, "refinement level must be in [level, 24]");
  const int extra = to_level - level_;
  const std::size_t span = std::size_t(1) << extra;
  std::vector<double> out(weights_.size() * span);
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    const double w = std::ldexp(weights_[j], -extra);
    for (std::size_t i = 0; i < span; ++i) out[j * span + i] = w;
  }
  return CircleMeasure(to_level, std::move(out));
}

CircleMeasure CircleMeasure::coarsened(int to_level) const {
  require(to_level >= 1 && to_level <= level_, Errc::invalid_argument,
          "coarsening level must be in [1, level]");
  const std::size_t span = std::size_t(1) << (level_ - to_level);
  std::vector<double> out(std::size_t(1) << to_level);
  for (std::size_t j = 0; j < out.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < span; ++i) sum += weights_[j * span + i];
    out[j] = sum;
  }
  return CircleMeasure(to_level, std::move(out));
}

CircleMeasure CircleMeasure::renormalized() const {
  const double sum = total();
  require(sum > 0.0, Errc::invalid_argument,
          "cannot renormalize a zero measure");
  std::vector<double> out(weights_);
  for (double& w : out) w /= sum;
  return CircleMeasure(level_, std::move(out));
}

double tv_distance(const CircleMeasure& a, const CircleMeasure& b) {
  require(a.level_ == b.level_, Errc::invalid_argument,
          "total variation needs measures on the same grid");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.weights_.size(); ++j) {
    sum += std::abs(a.weights_[j] - b.weights_[j]);
  }
  return 0.5 * sum;
}

CircleMeasure transfer_dual_step(const CircleMeasure& mu, const GFunction& g) {
  const int k = mu.level_;
  const std::size_t n = mu.weights_.size();
  const std::size_t mask = n - 1;
  const double h = std::ldexp(1.0, -(k + 2));
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double mid_lo = static_cast<double>(4 * j + 1) * h;
    const double mid_hi = static_cast<double>(4 * j + 3) * h;
    out[j] = mu.weights_[(2 * j) & mask] * g.inv_value(mid_lo) +
             mu.weights_[(2 * j + 1) & mask] * g.inv_value(mid_hi);
  }
  return CircleMeasure(k, std::move(out));
}

GMeasureResult compute_g_measure(const GFunction& g, int level, double tol,
                                 std::size_t max_iterations) {
  require(std::isfinite(tol) && tol > 0.0, Errc::invalid_argument,
          "tolerance must be positive");
  require(max_iterations >= 1, Errc::invalid_argument,
          "iteration cap must be positive");
  CircleMeasure prev2 = CircleMeasure::uniform(level);
  CircleMeasure prev = prev2;
  GMeasureResult result{prev, 0, 0.0, 0.0, false, false, {}};
  result.tv_trace.reserve(std::min<std::size_t>(max_iterations, 4096));
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    CircleMeasure next = transfer_dual_step(prev, g).renormalized();
    const double tv1 = tv_distance(next, prev);
    const double tv2 = tv_distance(next, prev2);
    result.tv_trace.push_back(tv1);
    result.iterations = it;
    result.final_tv = tv1;
    result.final_lag2_tv = tv2;
    if (tv1 <= tol) {
      result.measure = std::move(next);
      result.converged = true;
      return result;
    }
    if (it >= 4 && tv2 <= tol && tv1 > 10.0 * tol) {
      result.measure = std::move(next);
      result.oscillation_detected = true;
      return result;
    }
    prev2 = std::move(prev);
    prev = std::move(next);
  }
  result.measure = std::move(prev);
  return result;
}

double radon_nikodym_check(const CircleMeasure& mu, const GFunction& g,
                           int arc_level) {
  require(arc_level >= 1, Errc::invalid_argument,
          "arc level must be at least 1");
  require(arc_level <= mu.level() - 2, Errc::arc_too_coarse,
          "measure grid too coarse: need at least four cells per arc");
  const int k = mu.level();
  const std::uint64_t n_arcs = std::uint64_t(1) << arc_level;
  const std::size_t span = std::size_t(1) << (k - arc_level);
  const double cell = std::ldexp(1.0, -k);
  double worst = 0.0;
  for (std::uint64_t b = 0; b < n_arcs; ++b) {
    const double lhs = mu.arc_prob(arc_level, (2 * b) & (n_arcs - 1)) +
                       mu.arc_prob(arc_level, (2 * b + 1) & (n_arcs - 1));
    double rhs = 0.0;
    const std::size_t start = static_cast<std::size_t>(b) * span;
    for (std::size_t i = 0; i < span; ++i) {
      const double mid = (static_cast<double>(start + i) + 0.5) * cell;
      rhs += mu.arc_weight(start + i) * g.value(mid);
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace hirsch
