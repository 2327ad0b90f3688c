#include "hirsch/pants_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace hirsch {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;
constexpr double kUnitSumTol = 1e-12;

void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

double wrap_unit(double u) {
  double x = u - std::floor(u);
  if (x >= 1.0) x = 0.0;
  return x;
}

// Radii used by the collar audits, log-spaced across the chart.
std::vector<double> collar_audit_radii() {
  constexpr int kCount = 100;
  constexpr double kLo = 0.03;
  constexpr double kHi = 0.97;
  std::vector<double> radii(kCount);
  for (int i = 0; i < kCount; ++i) {
    const double t = static_cast<double>(i) / (kCount - 1);
    radii[i] = kLo * std::pow(kHi / kLo, t);
  }
  return radii;
}

double richardson_collar(const std::function<double(double, double)>& f,
                         double r, double h) {
  const double coarse = collar_laplacian(f, r, 0.0, h);
  const double fine = collar_laplacian(f, r, 0.0, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

PantsShape::PantsShape(double l1, double l2, double eps)
    : l1_(l1),
      l2_(l2),
      slit_depth_(eps),
      bottom_len1_(std::exp(-l1)),
      bottom_len2_(std::exp(-l2)),
      exp_l1_(std::exp(l1)),
      exp_l2_(std::exp(l2)) {}

PantsShape PantsShape::create(double l1, double l2, double slit_depth) {
  require(std::isfinite(l1) && l1 > 0.0 && std::isfinite(l2) && l2 > 0.0,
          Errc::invalid_shape, "cylinder lengths must be positive and finite");
  const double unit_sum = std::exp(-l1) + std::exp(-l2);
  require(std::abs(unit_sum - 1.0) <= kUnitSumTol, Errc::invalid_shape,
          "e^{ -L1 } + e^{ -L2 } must equal 1 within 1e-12");
  require(std::isfinite(slit_depth) && slit_depth > 0.0 &&
              slit_depth < std::min(l1, l2),
          Errc::invalid_shape, "slit depth must lie in (0, min(L1, L2))");
  return PantsShape(l1, l2, slit_depth);
}

PantsShape PantsShape::symmetric(double slit_depth) {
  const double l = std::log(2.0);
  return create(l, l, slit_depth);
}

double cylinder_length(const PantsShape& shape, Chart c) {
  switch (c) {
    case Chart::cylinder1:
      return shape.l1();
    case Chart::cylinder2:
      return shape.l2();
    case Chart::collar:
      break;
  }
  throw Error(Errc::invalid_argument, "the collar chart has no cylinder length");
}

Metric2 metric_at(const PantsShape& shape, const ChartPoint& p) {
  if (p.chart == Chart::collar) {
    const double r = std::hypot(p.u, p.v);
    require(r > 0.0, Errc::singular_point, "metric undefined at the puncture");
    require(r < std::exp(kTwoPi), Errc::invalid_argument,
            "collar chart has radius e^{2 pi}");
    const double lambda = collar_scale(r);
    return {lambda * lambda, lambda * lambda};
  }
  const double len = cylinder_length(shape, p.chart);
  require(std::isfinite(p.v) && p.v >= 0.0 && p.v <= len,
          Errc::invalid_argument, "v must lie in [0, L]");
  const double u = wrap_unit(p.u);
  require(!(u == 0.0 && p.v == shape.slit_depth()), Errc::singular_point,
          "metric undefined at the cone point");
  const double scale = std::exp(2.0 * (p.v - len));
  return {scale, 1.0};
}

double area_closed_form(const PantsShape& shape) {
  return 2.0 - (shape.bottom_len1() + shape.bottom_len2());
}

double area_quadrature(const PantsShape& shape, int cells_per_side) {
  require(cells_per_side >= 2, Errc::invalid_argument,
          "quadrature needs at least 2 cells per side");
  const int n = cells_per_side;
  double total = 0.0;
  for (Chart c : {Chart::cylinder1, Chart::cylinder2}) {
    const double len = cylinder_length(shape, c);
    const double hu = 1.0 / n;
    const double hv = len / n;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = (j + 0.5) * hv;
      const double row = std::exp(v - len) * hv;
      for (int i = 0; i < n; ++i) sum += row * hu;
    }
    total += sum;
  }
  return total;
}

double boundary_length(const PantsShape& shape, Boundary b) {
  switch (b) {
    case Boundary::top1:
    case Boundary::top2:
      return 1.0;
    case Boundary::bottom:
      return shape.bottom_len1() + shape.bottom_len2();
  }
  throw Error(Errc::invalid_argument, "unknown boundary");
}

double boundary_length_quadrature(const PantsShape& shape, Boundary b,
                                  int cells) {
  require(cells >= 1, Errc::invalid_argument, "need at least one cell");
  const double hu = 1.0 / cells;
  auto circle = [&](Chart c, double v) {
    const double len = cylinder_length(shape, c);
    double sum = 0.0;
    for (int i = 0; i < cells; ++i) sum += std::exp(v - len) * hu;
    return sum;
  };
  switch (b) {
    case Boundary::top1:
      return circle(Chart::cylinder1, shape.l1());
    case Boundary::top2:
      return circle(Chart::cylinder2, shape.l2());
    case Boundary::bottom:
      return circle(Chart::cylinder1, 0.0) + circle(Chart::cylinder2, 0.0);
  }
  throw Error(Errc::invalid_argument, "unknown boundary");
}

double gauss_bonnet_residual_closed(const PantsShape& shape) {
  const double area = area_closed_form(shape);
  const double kg = boundary_length(shape, Boundary::top1) +
                    boundary_length(shape, Boundary::top2) -
                    boundary_length(shape, Boundary::bottom);
  const double cone_defect = kTwoPi - 2.0 * kTwoPi;
  return (kg - area) + cone_defect + kTwoPi;
}

double gauss_bonnet_residual_quadrature(const PantsShape& shape,
                                        int cells_per_side) {
  const double area = area_quadrature(shape, cells_per_side);
  const double kg =
      boundary_length_quadrature(shape, Boundary::top1, cells_per_side) +
      boundary_length_quadrature(shape, Boundary::top2, cells_per_side) -
      boundary_length_quadrature(shape, Boundary::bottom, cells_per_side);
  const double cone_defect = kTwoPi - 2.0 * kTwoPi;
  return (kg - area) + cone_defect + kTwoPi;
}

double harmonic_phi(const PantsShape& shape, const ChartPoint& p) {
  if (p.chart == Chart::collar) {
    const double r = std::hypot(p.u, p.v);
    require(r > 0.0, Errc::singular_point,
            "harmonic function diverges at the puncture");
    require(r < std::exp(kTwoPi), Errc::invalid_argument,
            "collar chart has radius e^{2 pi}");
    return collar_phi(r);
  }
  const double len = cylinder_length(shape, p.chart);
  require(std::isfinite(p.v) && p.v >= 0.0 && p.v <= len,
          Errc::invalid_argument, "v must lie in [0, L]");
  return std::exp(-p.v);
}

double laplace_residual(const PantsShape& shape, double spacing,
                        const std::function<double(Chart, double, double)>& f) {
  require(std::isfinite(spacing) && spacing > 0.0 && spacing <= 0.25,
          Errc::invalid_argument, "spacing must lie in (0, 1/4]");
  double worst = 0.0;
  for (Chart c : {Chart::cylinder1, Chart::cylinder2}) {
    const double len = cylinder_length(shape, c);
    const auto m = std::max<long long>(4, std::llround(len / spacing));
    const auto n = std::max<long long>(4, std::llround(1.0 / spacing));
    const double hv = len / static_cast<double>(m);
    const double hu = 1.0 / static_cast<double>(n);
    const double guard = 4.0 * spacing;
    for (long long j = 1; j < m; ++j) {
      const double v = static_cast<double>(j) * hv;
      for (long long i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) * hu;
        const double du = std::min(u, 1.0 - u);
        if (std::hypot(du, v - shape.slit_depth()) < guard) continue;
        const double center = f(c, u, v);
        const double up = f(c, static_cast<double>((i + 1) % n) * hu, v);
        const double um =
            f(c, static_cast<double>((i + n - 1) % n) * hu, v);
        const double vp = f(c, u, v + hv);
        const double vm = f(c, u, v - hv);
        const double val =
            std::exp(2.0 * (len - v)) * (up - 2.0 * center + um) / (hu * hu) +
            (vp - 2.0 * center + vm) / (hv * hv) + (vp - vm) / (2.0 * hv);
        worst = std::max(worst, std::abs(val));
      }
    }
  }
  return worst;
}

double laplace_residual_harmonic(const PantsShape& shape, double spacing) {
  return laplace_residual(
      shape, spacing,
      [](Chart, double, double v) { return std::exp(-v); });
}

double collar_scale(double r) {
  require(std::isfinite(r) && r > 0.0, Errc::singular_point,
          "collar scale undefined at the puncture");
  require(r < std::exp(kTwoPi), Errc::invalid_argument,
          "collar chart has radius e^{2 pi}");
  return 1.0 / (r * (kTwoPi - std::log(r)));
}

double collar_phi(double r) {
  require(std::isfinite(r) && r > 0.0, Errc::singular_point,
          "harmonic function diverges at the puncture");
  require(r < std::exp(kTwoPi), Errc::invalid_argument,
          "collar chart has radius e^{2 pi}");
  return 1.0 - std::log(r) / kTwoPi;
}

double collar_laplacian(const std::function<double(double, double)>& f,
                        double x, double y, double spacing) {
  require(std::isfinite(spacing) && spacing > 0.0, Errc::invalid_argument,
          "spacing must be positive");
  const double r = std::hypot(x, y);
  const double lambda = collar_scale(r);
  const double five_point =
      (f(x + spacing, y) + f(x - spacing, y) + f(x, y + spacing) +
       f(x, y - spacing) - 4.0 * f(x, y)) /
      (spacing * spacing);
  return five_point / (lambda * lambda);
}

double collar_curvature_max_error() {
  const auto log_scale = [](double x, double y) {
    return std::log(collar_scale(std::hypot(x, y)));
  };
  double worst = 0.0;
  for (double r : collar_audit_radii()) {
    const double k = -richardson_collar(log_scale, r, r / 256.0);
    worst = std::max(worst, std::abs(k + 1.0));
  }
  return worst;
}

double collar_harmonic_max_residual() {
  const auto phi = [](double x, double y) {
    return collar_phi(std::hypot(x, y));
  };
  double worst = 0.0;
  for (double r : collar_audit_radii()) {
    worst = std::max(worst, std::abs(richardson_collar(phi, r, r / 256.0)));
  }
  return worst;
}

double collar_circle_length(double r, int cells) {
  require(cells >= 1, Errc::invalid_argument, "need at least one cell");
  const double step = kTwoPi * r / cells;
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double a = kTwoPi * (i + 0.5) / cells;
    sum += collar_scale(std::hypot(r * std::cos(a), r * std::sin(a))) * step;
  }
  return sum;
}

double smoothing_flatten_residual(int samples) {
  require(samples >= 2, Errc::invalid_argument, "need at least two samples");
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const double r = 0.01 * std::pow(1000.0, t);
    const double cone_factor = r * r;
    const double profile = 1.0 / (r * r);
    worst = std::max(worst, std::abs(profile * cone_factor - 1.0));
  }
  return worst;
}

double smoothed_cone_angle(double r, int cells) {
  require(std::isfinite(r) && r > 0.0, Errc::invalid_argument,
          "radius must be positive");
  require(cells >= 1, Errc::invalid_argument, "need at least one cell");
  double circumference = 0.0;
  const double arc = kTwoPi * r / cells;
  for (int i = 0; i < cells; ++i) circumference += r * arc;
  double geodesic_radius = 0.0;
  const double dr = r / cells;
  for (int i = 0; i < cells; ++i) {
    const double s = (i + 0.5) * dr;
    geodesic_radius += s * dr;
  }
  return circumference / geodesic_radius;
}

SlitSide slit_crossing(const PantsShape& shape, Chart from, SlitBank bank,
                       double v) {
  require(from == Chart::cylinder1 || from == Chart::cylinder2,
          Errc::invalid_argument, "the slit joins the cylinder charts");
  require(std::isfinite(v) && v >= 0.0 && v <= shape.slit_depth(),
          Errc::invalid_argument, "the slit spans v in [0, slit depth]");
  require(v < shape.slit_depth(), Errc::at_cone_point,
          "crossing at the slit tip is undefined");
  const Chart other =
      (from == Chart::cylinder1) ? Chart::cylinder2 : Chart::cylinder1;
  const SlitBank other_bank =
      (bank == SlitBank::right) ? SlitBank::left : SlitBank::right;
  return {other, other_bank};
}

ChartPoint boundary_point(const PantsShape& shape, Boundary b, double theta) {
  require(std::isfinite(theta), Errc::invalid_argument,
          "boundary parameter must be finite");
  const double t = wrap_unit(theta);
  switch (b) {
    case Boundary::top1:
      return {Chart::cylinder1, t, shape.l1()};
    case Boundary::top2:
      return {Chart::cylinder2, t, shape.l2()};
    case Boundary::bottom: {
      if (t < shape.bottom_len1()) {
        double u = t * shape.exp_l1();
        if (u >= 1.0) u = std::nextafter(1.0, 0.0);
        return {Chart::cylinder1, u, 0.0};
      }
      double u = (t - shape.bottom_len1()) * shape.exp_l2();
      if (u >= 1.0) u = std::nextafter(1.0, 0.0);
      return {Chart::cylinder2, u, 0.0};
    }
  }
  throw Error(Errc::invalid_argument, "unknown boundary");
}

BoundaryParam boundary_param(const PantsShape& shape, const ChartPoint& p) {
  require(p.chart == Chart::cylinder1 || p.chart == Chart::cylinder2,
          Errc::invalid_argument, "boundary circles lie on the cylinders");
  const double u = wrap_unit(p.u);
  if (p.v == 0.0) {
    if (p.chart == Chart::cylinder1) {
      return {Boundary::bottom, u * shape.bottom_len1()};
    }
    return {Boundary::bottom, shape.bottom_len1() + u * shape.bottom_len2()};
  }
  if (p.chart == Chart::cylinder1 && p.v == shape.l1()) {
    return {Boundary::top1, u};
  }
  if (p.chart == Chart::cylinder2 && p.v == shape.l2()) {
    return {Boundary::top2, u};
  }
  throw Error(Errc::invalid_argument, "point does not lie on a boundary circle");
}

}  // namespace hirsch
