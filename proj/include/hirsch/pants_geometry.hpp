#pragma once

#include <functional>

#include "hirsch/error.hpp"

namespace hirsch {

// A pair of hyperbolic cylinders glued along a vertical slit. Cylinder i
// carries coordinates u in R/Z, v in [0, L_i] with metric
// e^{2(v - L_i)} du^2 + dv^2 (constant curvature -1). The slit sits at
// u = 0, v in [0, slit_depth] on both cylinders and is cross-glued bank to
// bank, creating a cone point of angle 4 pi at its top end. The v = L_i
// circles (top1, top2) and the joined v = 0 circle (bottom) are horocycles
// of length one; the latter forces e^{-L1} + e^{-L2} = 1.
class PantsShape {
 public:
  // Validates positivity, the unit-sum identity within 1e-12, and
  // 0 < slit_depth < min(L1, L2). Throws INVALID_SHAPE otherwise.
  static PantsShape create(double l1, double l2, double slit_depth);

  // L1 = L2 = log 2.
  static PantsShape symmetric(double slit_depth);

  double l1() const { return l1_; }
  double l2() const { return l2_; }
  double slit_depth() const { return slit_depth_; }

  // e^{-L_i}: the length of cylinder i's share of the bottom circle.
  double bottom_len1() const { return bottom_len1_; }
  double bottom_len2() const { return bottom_len2_; }
  double exp_l1() const { return exp_l1_; }
  double exp_l2() const { return exp_l2_; }

 private:
  PantsShape(double l1, double l2, double eps);

  double l1_, l2_, slit_depth_;
  double bottom_len1_, bottom_len2_;
  double exp_l1_, exp_l2_;
};

enum class Chart { cylinder1, cylinder2, collar };
enum class Boundary { top1, top2, bottom };
enum class SlitBank { right, left };

// Coordinates in one chart. Cylinder charts read (u, v) as above; the
// collar chart reads them as euclidean (x, y) in the punctured disk model.
struct ChartPoint {
  Chart chart;
  double u;
  double v;
};

inline ChartPoint cylinder_point(Chart c, double u, double v) {
  return ChartPoint{c, u, v};
}
inline ChartPoint collar_point(double x, double y) {
  return ChartPoint{Chart::collar, x, y};
}

double cylinder_length(const PantsShape& shape, Chart c);

// Diagonal metric components in the point's chart. Throws SINGULAR_POINT
// at the cone point and at the collar puncture.
struct Metric2 {
  double g_uu;
  double g_vv;
};
Metric2 metric_at(const PantsShape& shape, const ChartPoint& p);

// Total area; the unit-sum identity makes the closed form
// 2 - e^{-L1} - e^{-L2} = 1 for every valid shape.
double area_closed_form(const PantsShape& shape);
double area_quadrature(const PantsShape& shape, int cells_per_side);

double boundary_length(const PantsShape& shape, Boundary b);
double boundary_length_quadrature(const PantsShape& shape, Boundary b,
                                  int cells);

// Gauss-Bonnet balance: area integral of curvature plus boundary geodesic
// curvature plus the cone defect 2 pi - 4 pi must equal 2 pi chi with
// chi = -1. The closed form cancels identically; the quadrature version
// carries the area rule's error.
double gauss_bonnet_residual_closed(const PantsShape& shape);
double gauss_bonnet_residual_quadrature(const PantsShape& shape,
                                        int cells_per_side);

// The leafwise harmonic function: e^{-v} on the cylinders, continuous
// across both gluings; 1 - log r / (2 pi) on the collar chart.
double harmonic_phi(const PantsShape& shape, const ChartPoint& p);

// Discrete Laplace-Beltrami residual, five-point scheme
// e^{2(L - v)} D^2_u + D^2_v + D_v on each cylinder chart, evaluated at
// interior nodes at least four spacings away from the cone point. Returns
// the largest absolute value. The scheme annihilates constants exactly and
// has O(h^2) consistency, so the harmonic residual shrinks fourfold per
// spacing halving.
double laplace_residual(const PantsShape& shape, double spacing,
                        const std::function<double(Chart, double, double)>& f);
double laplace_residual_harmonic(const PantsShape& shape, double spacing);

// Collar model of a cusp neighbourhood: the punctured disk 0 < r < e^{2 pi}
// with conformal scale lambda(r) = 1 / (r (2 pi - log r)), curvature -1,
// and the r = 1 circle of hyperbolic length one.
double collar_scale(double r);
double collar_phi(double r);

// lambda^{-2} times the euclidean five-point Laplacian, the discrete
// Laplace-Beltrami operator of the collar metric.
double collar_laplacian(const std::function<double(double, double)>& f,
                        double x, double y, double spacing);

// Gauss curvature through -lambda^{-2} Delta log lambda with Richardson
// extrapolated differences at 100 log-spaced radii in [0.03, 0.97],
// spacing r / 256. Returns the worst |K + 1|.
double collar_curvature_max_error();

// Same protocol applied to the collar harmonic function; worst |Delta phi|.
double collar_harmonic_max_residual();

// Hyperbolic length of the circle |x| = r by angular midpoint quadrature.
double collar_circle_length(double r, int cells);

// Flattening of the cone model |x|^2 |dx|^2 by the profile rho = 1/|x|^2:
// worst deviation of rho times the conformal factor from one on a radius
// scan.
double smoothing_flatten_residual(int samples);

// Cone angle of the model |x|^2 |dx|^2 at radius r: circumference over
// geodesic radius, which equals 4 pi exactly in the continuum.
double smoothed_cone_angle(double r, int cells);

// Bank-to-bank transport across the slit: same v, other cylinder, other
// bank. Throws AT_CONE_POINT when v equals the slit depth and
// INVALID_ARGUMENT when v lies outside the slit.
struct SlitSide {
  Chart chart;
  SlitBank bank;
};
SlitSide slit_crossing(const PantsShape& shape, Chart from, SlitBank bank,
                       double v);

// Boundary circles parameterized by arclength fraction theta in [0, 1).
// The bottom circle runs through cylinder 1's share first.
ChartPoint boundary_point(const PantsShape& shape, Boundary b, double theta);

struct BoundaryParam {
  Boundary boundary;
  double theta;
};
BoundaryParam boundary_param(const PantsShape& shape, const ChartPoint& p);

}  // namespace hirsch
