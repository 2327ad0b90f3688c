#include "hirsch/foliation.hpp"

#include <algorithm>
#include <cmath>

namespace hirsch {

namespace {

void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

}  // namespace

MetricFamily MetricFamily::create(GFunction g, double slit_depth) {
  const double bound = g.inf_log();
  require(std::isfinite(slit_depth) && slit_depth > 0.0 && slit_depth < bound,
          Errc::invalid_shape,
          "slit depth must lie in (0, inf log g) to fit every fiber");
  return MetricFamily(std::move(g), slit_depth);
}

PantsShape pants_shape_at(const MetricFamily& family, CircleAngle fiber) {
  const double l1 = std::log(family.g().value(fiber));
  const double l2 = std::log(family.g().value(fiber.antipode()));
  return PantsShape::create(l1, l2, family.slit_depth());
}

double family_unit_sum_residual(const MetricFamily& family, int grid_level) {
  require(grid_level >= 1 && grid_level <= 24, Errc::invalid_argument,
          "fiber grid level must be in [1, 24]");
  const std::uint64_t n = std::uint64_t(1) << grid_level;
  double worst = 0.0;
  for (std::uint64_t j = 0; j < n; ++j) {
    const CircleAngle z = CircleAngle::from_dyadic(j, grid_level);
    const double sum = std::exp(-std::log(family.g().value(z))) +
                       std::exp(-std::log(family.g().value(z.antipode())));
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

ChartPoint swap_cylinders(const ChartPoint& p) {
  switch (p.chart) {
    case Chart::cylinder1:
      return {Chart::cylinder2, p.u, p.v};
    case Chart::cylinder2:
      return {Chart::cylinder1, p.u, p.v};
    case Chart::collar:
      break;
  }
  throw Error(Errc::invalid_argument,
              "the deck map only acts on the cylinder charts");
}

FoliatedPoint canonical(const FoliatedPoint& p) {
  if (p.fiber.in_first_half()) return p;
  return {p.fiber.antipode(), swap_cylinders(p.point)};
}

BoundaryState canonical(const BoundaryState& s) {
  if (s.fiber.in_first_half()) return s;
  switch (s.boundary) {
    case Boundary::top1:
      return {s.fiber.antipode(), Boundary::top2, s.theta};
    case Boundary::top2:
      return {s.fiber.antipode(), Boundary::top1, s.theta};
    case Boundary::bottom:
      return {s.fiber.antipode(), Boundary::bottom, s.theta.antipode()};
  }
  throw Error(Errc::invalid_argument, "unknown boundary");
}

BoundaryState cross_to_doubled_fiber(CircleAngle fiber, CircleAngle theta) {
  return {fiber.doubled(), Boundary::top1, theta + fiber};
}

BoundaryState cross_to_halved_fiber(CircleAngle fiber, Boundary top,
                                    CircleAngle theta) {
  CircleAngle w;
  switch (top) {
    case Boundary::top1:
      w = fiber.halved();
      break;
    case Boundary::top2:
      w = fiber.antipode().halved();
      break;
    case Boundary::bottom:
      throw Error(Errc::invalid_argument,
                  "inward crossings leave through a top circle");
  }
  return {w, Boundary::bottom, theta - w};
}

bool shapes_swap_under_antipode(const PantsShape& at_fiber,
                                const PantsShape& at_antipode) {
  return at_fiber.l1() == at_antipode.l2() &&
         at_fiber.l2() == at_antipode.l1() &&
         at_fiber.slit_depth() == at_antipode.slit_depth();
}

SymmetryAudit quotient_symmetry_audit(const MetricFamily& family,
                                      CircleAngle fiber, int theta_samples) {
  require(theta_samples >= 1, Errc::invalid_argument,
          "need at least one boundary angle");
  SymmetryAudit audit;
  audit.samples = theta_samples;
  audit.shapes_swap = shapes_swap_under_antipode(
      pants_shape_at(family, fiber),
      pants_shape_at(family, fiber.antipode()));
  audit.crossings_match = true;
  for (int k = 0; k < theta_samples; ++k) {
    const CircleAngle theta = CircleAngle::from_turns(
        static_cast<double>(k) / static_cast<double>(theta_samples));
    const BoundaryState out_a = cross_to_doubled_fiber(fiber, theta);
    const BoundaryState out_b =
        cross_to_doubled_fiber(fiber.antipode(), theta.antipode());
    if (canonical(out_a) != canonical(out_b)) audit.crossings_match = false;
    const BoundaryState in_a = cross_to_halved_fiber(fiber, Boundary::top1, theta);
    const BoundaryState in_b =
        cross_to_halved_fiber(fiber.antipode(), Boundary::top2, theta);
    if (canonical(in_a) != canonical(in_b)) audit.crossings_match = false;
    const BoundaryState in_c = cross_to_halved_fiber(fiber, Boundary::top2, theta);
    const BoundaryState in_d =
        cross_to_halved_fiber(fiber.antipode(), Boundary::top1, theta);
    if (canonical(in_c) != canonical(in_d)) audit.crossings_match = false;
  }
  return audit;
}

}  // namespace hirsch
