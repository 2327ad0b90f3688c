#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hirsch/error.hpp"

namespace hirsch {

// Angle on the circle R/Z stored as 128-bit fixed-point ticks, one tick
// being 2^-128 of a turn. Addition, subtraction, the antipode shift and
// the doubling map are exact modulo one for every representable value.
// Halving is exact on the tick lattice; values built from doubles or
// 64-bit words occupy only the top 75 bits, leaving 53 guard bits, so
// halve-then-double round trips stay bit-exact to depth 53.
class CircleAngle {
 public:
  using ticks_t = unsigned __int128;

  constexpr CircleAngle() : ticks_(0) {}

  static constexpr CircleAngle from_ticks(ticks_t t) { return CircleAngle(t); }

  // Reduces t modulo one. Captures the top 128 fractional bits exactly;
  // doubles in [0x1p-75, 1) round-trip without loss. Throws on non-finite
  // input.
  static CircleAngle from_turns(double t);

  // numerator / 2^level of a turn, exact. Requires 0 <= level <= 64.
  static CircleAngle from_dyadic(std::uint64_t numerator, int level);

  // Top 53 bits as a double, always in [0, 1).
  double turns() const;

  ticks_t ticks() const { return ticks_; }

  CircleAngle antipode() const {
    return CircleAngle(ticks_ + (ticks_t(1) << 127));
  }
  CircleAngle doubled() const { return CircleAngle(ticks_ << 1); }

  // The preimage under doubling that lies in [0, 1/2); the other preimage
  // is halved().antipode().
  CircleAngle halved() const { return CircleAngle(ticks_ >> 1); }

  bool in_first_half() const { return (ticks_ >> 127) == 0; }

  // Index of the dyadic arc [j 2^-level, (j+1) 2^-level) containing this
  // angle. Requires 1 <= level <= 64.
  std::uint64_t arc_index(int level) const;

  friend CircleAngle operator+(CircleAngle a, CircleAngle b) {
    return CircleAngle(a.ticks_ + b.ticks_);
  }
  friend CircleAngle operator-(CircleAngle a, CircleAngle b) {
    return CircleAngle(a.ticks_ - b.ticks_);
  }
  friend bool operator==(CircleAngle a, CircleAngle b) {
    return a.ticks_ == b.ticks_;
  }
  friend bool operator!=(CircleAngle a, CircleAngle b) {
    return a.ticks_ != b.ticks_;
  }
  friend bool operator<(CircleAngle a, CircleAngle b) {
    return a.ticks_ < b.ticks_;
  }

 private:
  explicit constexpr CircleAngle(ticks_t t) : ticks_(t) {}
  ticks_t ticks_;
};

std::ostream& operator<<(std::ostream& os, CircleAngle a);

inline CircleAngle doubling_map(CircleAngle a) { return a.doubled(); }
inline CircleAngle antipode(CircleAngle a) { return a.antipode(); }

// Branch weight g on the circle, required to satisfy g > 1 everywhere and
// 1/g(t) + 1/g(t + 1/2) = 1. Three families: the constant 2, the one
// parameter family 2 / (1 + a sin 2 pi t), and tables on dyadic grids.
// Tables interpolate 1/g linearly between nodes, which keeps the pairing
// identity exact between nodes and keeps the range inside the node hull.
class GFunction {
 public:
  enum class Kind { constant2, sine, tabulated };

  static GFunction constant2();

  // g(t) = 2 / (1 + amplitude * sin(2 pi t)); requires |amplitude| < 1.
  static GFunction sine(double amplitude);

  // Node values g(j 2^-level) for j = 0 .. 2^level - 1. Each value must
  // exceed 1 and antipodal pairs must satisfy the unit-sum identity within
  // 1e-12. Stored reciprocal weights are canonicalized so each antipodal
  // pair sums to one exactly, which lets derived quantities meet unit-sum
  // gates without re-tolerancing; node values may shift by at most the
  // admitted 1e-12.
  static GFunction tabulated(int level, std::vector<double> node_values);

  Kind kind() const { return kind_; }

  double value(double theta_turns) const;
  double value(CircleAngle a) const { return value(a.turns()); }

  // The branch weight 1/g itself; preferred where the pairing identity
  // matters, since tables evaluate it without a division.
  double inv_value(double theta_turns) const;
  double inv_value(CircleAngle a) const { return inv_value(a.turns()); }

  // inf over the circle of log g, computed in closed form per family.
  double inf_log() const;

  double sine_amplitude() const;
  int table_level() const;
  const std::vector<double>& table_inv_values() const;

  friend bool operator==(const GFunction& a, const GFunction& b);
  friend bool operator!=(const GFunction& a, const GFunction& b) {
    return !(a == b);
  }

 private:
  GFunction(Kind k, double a, int level, std::vector<double> inv)
      : kind_(k), amplitude_(a), level_(level), inv_(std::move(inv)) {}

  Kind kind_;
  double amplitude_ = 0.0;
  int level_ = 0;
  std::vector<double> inv_;  // reciprocal node values for tables
};

struct GValidation {
  double min_value = 0.0;
  double max_identity_residual = 0.0;
  bool greater_than_one = false;
  bool identity_holds = false;
};

// Scans g on the dyadic grid of the given level, reporting the minimum
// value and the worst pairing-identity residual. Requires 1 <= grid_level
// <= 24.
GValidation validate_g(const GFunction& g, int grid_level);

// Throws NOT_GREATER_THAN_ONE or IDENTITY_VIOLATED (1e-12 gate) when the
// scan fails.
void ensure_valid(const GFunction& g, int grid_level);

// Probability measure on the circle resolved on the dyadic grid of a given
// level: weights[j] is the mass of [j 2^-level, (j+1) 2^-level). Weights
// are nonnegative and sum to one within 1e-12.
class CircleMeasure {
 public:
  static CircleMeasure uniform(int level);
  static CircleMeasure from_weights(int level, std::vector<double> weights);

  int level() const { return level_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double arc_weight(std::size_t j) const { return weights_[j]; }

  // Mass of the dyadic arc j at a level coarser than or equal to this
  // measure's level.
  double arc_prob(int coarse_level, std::uint64_t j) const;

  double total() const;

  // Splits each weight evenly into 2^(to_level - level) children.
  CircleMeasure refined(int to_level) const;
  // Sums weights over the children of each coarser arc.
  CircleMeasure coarsened(int to_level) const;
  CircleMeasure renormalized() const;

  friend double tv_distance(const CircleMeasure& a, const CircleMeasure& b);
  friend CircleMeasure transfer_dual_step(const CircleMeasure& mu,
                                          const GFunction& g);

 private:
  CircleMeasure(int level, std::vector<double> w)
      : level_(level), weights_(std::move(w)) {}

  int level_;
  std::vector<double> weights_;
};

double tv_distance(const CircleMeasure& a, const CircleMeasure& b);

// One application of the measure-side transfer step for the doubling map:
// the new mass of arc j is pulled from the two image arcs 2j and 2j+1
// (mod 2^level) weighted by 1/g at the preimage half-arc midpoints
// (j + 1/4) 2^-level and (j + 3/4) 2^-level. Antipodal pairing of the
// coefficients conserves total mass up to rounding.
CircleMeasure transfer_dual_step(const CircleMeasure& mu, const GFunction& g);

struct GMeasureResult {
  CircleMeasure measure;
  std::size_t iterations = 0;
  double final_tv = 0.0;
  double final_lag2_tv = 0.0;
  bool converged = false;
  bool oscillation_detected = false;
  std::vector<double> tv_trace;
};

// Power iteration of the transfer step from the uniform measure, with
// renormalization after every step. Stops when consecutive iterates are
// within tol in total variation; detects period-two cycling through the
// lag-2 distance and reports it as non-convergence instead of looping to
// the iteration cap.
GMeasureResult compute_g_measure(const GFunction& g, int level,
                                 double tol = 1e-13,
                                 std::size_t max_iterations = 100000);

// Audit of the defining property of the fixed point: over every dyadic arc
// B of the given level, compares the measure of the image arc T(B) with
// the midpoint-rule integral of g over B. Returns the worst absolute
// discrepancy. Requires 1 <= arc_level <= mu.level() - 2 so each B holds
// at least four quadrature cells; coarser measures throw ARC_TOO_COARSE.
double radon_nikodym_check(const CircleMeasure& mu, const GFunction& g,
                           int arc_level);

}  // namespace hirsch
