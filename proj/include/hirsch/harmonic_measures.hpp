#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hirsch/circle_dynamics.hpp"
#include "hirsch/diffusion.hpp"
#include "hirsch/foliation.hpp"
#include "hirsch/pants_geometry.hpp"
#include "hirsch/rng.hpp"

namespace hirsch {

// Mass assigned by phi times the leaf area element to one pants fiber.
// On each cylinder phi e^{v-L} du dv integrates to L e^{-L}, so the closed
// form is L1 e^{-L1} + L2 e^{-L2}.
double fiber_mass(const PantsShape& shape);

// Midpoint-rule evaluation of the same integral on a v-grid with the given
// number of cells per unit length.
double fiber_mass_quadrature(const PantsShape& shape, int cells_per_unit);

// The probability measure proportional to phi . vol x mu on the foliated
// space. Transversally it is the mu arc weights tilted by the fiber mass
// at each arc midpoint; within a fiber the cylinder is picked with weight
// L e^{-L} and (u, v) is uniform on the cylinder, since phi exactly
// cancels the v-dependence of the area element.
class HarmonicMeasure {
 public:
  HarmonicMeasure(MetricFamily family, const CircleMeasure& mu);

  const MetricFamily& family() const { return family_; }
  const CircleMeasure& transverse_marginal() const { return marginal_; }

  // The glued space identifies fiber z in one cylinder with fiber
  // z + 1/2 in the other, so ensemble readouts of evolved walks see
  // fibers only up to that identification. This returns the transverse
  // marginal pushed onto the representative half circle: arc j gains the
  // weight of its antipodal arc and the upper arcs carry zero.
  CircleMeasure deck_folded_marginal() const;

  // Sum over arcs of mu weight times midpoint fiber mass, the normalizing
  // constant before the marginal is rescaled.
  double total_mass() const { return total_mass_; }

  // Inverse-CDF sample; consumes four uniforms from the generator.
  FoliatedPoint sample_point(PhiloxRng& rng) const;

 private:
  MetricFamily family_;
  CircleMeasure marginal_;
  std::vector<double> prefix_;
  double total_mass_;
};

struct StationarityConfig {
  std::size_t n_paths = 100000;
  double t_end = 5.0;
  double dt = 5e-4;
  double alpha = 0.01;
  std::size_t bootstrap_reps = 200;
  std::uint64_t seed = 0;
  double cone_guard = 1e-6;
  std::size_t max_events = 1000000;
};

struct StationarityReport {
  std::size_t n_paths = 0;
  double t_end = 0.0;
  double dt = 0.0;
  double alpha = 0.0;
  double ks_fiber = 0.0;
  double ks_fiber_threshold = 0.0;
  double w1_fiber = 0.0;
  double w1_band = 0.0;
  double ks_depth = 0.0;
  double ks_depth_threshold = 0.0;
  bool fiber_ks_pass = false;
  bool fiber_w1_pass = false;
  bool depth_pass = false;
  bool stationary = false;
};

// Draws n paths from the harmonic measure built on mu, runs each to t_end
// under leafwise Brownian motion, and tests whether the time-t_end cloud
// still matches the measure: KS and W1 on the canonical fiber coordinate
// against the deck folded marginal, and KS of v/L against the uniform law
// it has under the exact measure. The fiber comparison runs on the folded
// half circle because the crossing maps return representatives there and
// only folded readouts are functions of the glued point. The W1 band is a
// bootstrap quantile under the null. The depth threshold carries an extra
// 0.5 sqrt(dt) beyond the KS quantile: the discrete walk distorts the
// depth profile within one step of each boundary and across crossings by
// about 0.35 sqrt(dt) in KS distance, a step-size artifact that the gate
// must not mistake for a wrong measure.
StationarityReport stationarity_test(const MetricFamily& family,
                                     const CircleMeasure& mu,
                                     const StationarityConfig& cfg);

// True when the branch weights and slit depths coincide.
bool same_family(const MetricFamily& a, const MetricFamily& b);

// Wasserstein-1 distance between the transverse marginals of two harmonic
// measures over the same family. The marginal determines the transverse
// measure (the fiber mass tilt is strictly positive), so a positive
// distance certifies the two measures differ. Throws FAMILY_MISMATCH when
// the families disagree, since the comparison would then cross spaces.
double distinctness_distance(const HarmonicMeasure& a,
                             const HarmonicMeasure& b);

}  // namespace hirsch
