#pragma once

#include "hirsch/circle_dynamics.hpp"
#include "hirsch/pants_geometry.hpp"

namespace hirsch {

// Assigns to every fiber angle z the pants with cylinder lengths
// L1 = log g(z), L2 = log g(z + 1/2) and a common slit depth. The branch
// identity on g makes every such shape satisfy the unit-sum gate, and the
// antipodal fiber carries the same pants with the cylinders swapped.
class MetricFamily {
 public:
  // Requires 0 < slit_depth < inf log g so the slit fits every fiber's
  // shorter cylinder; throws INVALID_SHAPE otherwise.
  static MetricFamily create(GFunction g, double slit_depth);

  const GFunction& g() const { return g_; }
  double slit_depth() const { return slit_depth_; }

 private:
  MetricFamily(GFunction g, double slit_depth)
      : g_(std::move(g)), slit_depth_(slit_depth) {}

  GFunction g_;
  double slit_depth_;
};

PantsShape pants_shape_at(const MetricFamily& family, CircleAngle fiber);

// Worst unit-sum residual of the derived shapes over a dyadic fiber grid.
double family_unit_sum_residual(const MetricFamily& family, int grid_level);

// A point of the foliated space: a fiber angle plus chart coordinates in
// that fiber's pants. The deck identification equates (z, p) with
// (z + 1/2, p with the cylinders swapped).
struct FoliatedPoint {
  CircleAngle fiber;
  ChartPoint point;
};

ChartPoint swap_cylinders(const ChartPoint& p);

// Representative with the fiber in [0, 1/2).
FoliatedPoint canonical(const FoliatedPoint& p);

// A point on one of the horocyclic boundary circles, addressed by fiber,
// boundary label and arclength fraction.
struct BoundaryState {
  CircleAngle fiber;
  Boundary boundary;
  CircleAngle theta;
};

inline bool operator==(const BoundaryState& a, const BoundaryState& b) {
  return a.fiber == b.fiber && a.boundary == b.boundary && a.theta == b.theta;
}
inline bool operator!=(const BoundaryState& a, const BoundaryState& b) {
  return !(a == b);
}

// Representative with the fiber in [0, 1/2); top2 states trade places with
// top1 states over the antipodal fiber, bottom states shift theta by a
// half turn.
BoundaryState canonical(const BoundaryState& s);

// Gluing across the bottom circle: the walker reappears on top1 of the
// doubled fiber, with the boundary angle twisted by the departing fiber.
// Exact in tick arithmetic.
BoundaryState cross_to_doubled_fiber(CircleAngle fiber, CircleAngle theta);

// Gluing across a top circle: the walker reappears on the bottom circle of
// the preimage fiber selected by the boundary label, top1 over the
// principal preimage of the fiber and top2 over the principal preimage of
// its antipode, with the twist undone. Exact in tick arithmetic; doubling
// the arrival fiber recovers the departure fiber or its antipode.
BoundaryState cross_to_halved_fiber(CircleAngle fiber, Boundary top,
                                    CircleAngle theta);

// Bitwise check that the pants over antipodal fibers are cylinder swaps of
// each other.
bool shapes_swap_under_antipode(const PantsShape& at_fiber,
                                const PantsShape& at_antipode);

struct SymmetryAudit {
  bool shapes_swap = false;
  bool crossings_match = false;
  int samples = 0;
};

// Checks, at one fiber and a fan of boundary angles, that both crossing
// maps send the two deck representatives of each boundary state to the
// same result, and that the derived shapes swap exactly.
SymmetryAudit quotient_symmetry_audit(const MetricFamily& family,
                                      CircleAngle fiber, int theta_samples);

}  // namespace hirsch
