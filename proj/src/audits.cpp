#include "hirsch/audits.hpp"

#include <cmath>

#include "hirsch/harmonic_measures.hpp"

namespace hirsch {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

AuditResult make_result(std::string check, double residual, double tolerance) {
  const bool pass = residual <= tolerance;
  return {std::move(check), residual, tolerance, pass};
}

double collar_length_error(double r, int cells) {
  const double closed = kTwoPi / (kTwoPi - std::log(r));
  return std::abs(collar_circle_length(r, cells) - closed);
}

const std::vector<CircleAngle>& sample_fibers() {
  static const std::vector<CircleAngle> fibers = {
      CircleAngle::from_dyadic(0, 1),   CircleAngle::from_dyadic(1, 4),
      CircleAngle::from_dyadic(3, 3),   CircleAngle::from_dyadic(7, 4),
      CircleAngle::from_turns(1.0 / 3), CircleAngle::from_turns(0.123456789),
      CircleAngle::from_turns(0.7071067811865476),
      CircleAngle::from_turns(0.9999999),
  };
  return fibers;
}

}  // namespace

std::vector<AuditResult> run_collar_audits() {
  std::vector<AuditResult> out;
  out.push_back(make_result("collar curvature equals -1",
                            collar_curvature_max_error(), 1e-6));
  out.push_back(make_result("collar phi is harmonic",
                            collar_harmonic_max_residual(), 1e-3));
  const double len_err =
      std::max(collar_length_error(1.0, 64), collar_length_error(0.25, 64));
  out.push_back(make_result("collar circle lengths", len_err, 1e-10));
  out.push_back(make_result("smoothing flattens the cone model",
                            smoothing_flatten_residual(1000), 1e-12));
  out.push_back(make_result(
      "smoothed cone angle equals 4 pi",
      std::abs(smoothed_cone_angle(0.5, 4096) - 2.0 * kTwoPi), 1e-6));
  return out;
}

std::vector<AuditResult> run_shape_audits(const PantsShape& shape, int grid) {
  if (grid < 1) {
    throw Error(Errc::invalid_argument, "grid must be positive");
  }
  std::vector<AuditResult> out;
  out.push_back(make_result("area closed form equals 1",
                            std::abs(area_closed_form(shape) - 1.0), 1e-12));
  out.push_back(make_result("area quadrature equals 1",
                            std::abs(area_quadrature(shape, grid) - 1.0),
                            1e-6));

  double horo_err = 0.0;
  double horo_quad_err = 0.0;
  for (const Boundary b : {Boundary::top1, Boundary::top2, Boundary::bottom}) {
    horo_err = std::max(horo_err, std::abs(boundary_length(shape, b) - 1.0));
    horo_quad_err = std::max(
        horo_quad_err, std::abs(boundary_length_quadrature(shape, b, 64) -
                                boundary_length(shape, b)));
  }
  out.push_back(make_result("horocycle boundary lengths equal 1", horo_err,
                            1e-12));
  out.push_back(
      make_result("boundary length quadrature", horo_quad_err, 1e-12));

  out.push_back(make_result("gauss-bonnet closed form",
                            std::abs(gauss_bonnet_residual_closed(shape)),
                            1e-10));
  out.push_back(
      make_result("gauss-bonnet quadrature",
                  std::abs(gauss_bonnet_residual_quadrature(shape, grid)),
                  1e-4));

  const double res_coarse = laplace_residual_harmonic(shape, 1.0 / 32);
  const double res_fine = laplace_residual_harmonic(shape, 1.0 / 64);
  out.push_back(make_result("phi laplace residual at h=1/64", res_fine, 1e-3));
  const double ratio = (res_fine > 0.0) ? res_coarse / res_fine : 4.0;
  out.push_back(make_result("phi laplace residual halves like h^2",
                            std::abs(ratio - 4.0), 0.8));
  out.push_back(make_result(
      "laplace stencil annihilates constants",
      laplace_residual(shape, 1.0 / 32,
                       [](Chart, double, double) { return 1.0; }),
      0.0));

  const double eps = shape.slit_depth();
  double involution_failures = 0.0;
  for (const Chart c : {Chart::cylinder1, Chart::cylinder2}) {
    for (const SlitBank bank : {SlitBank::right, SlitBank::left}) {
      for (const double v : {0.25 * eps, 0.5 * eps, 0.75 * eps}) {
        const SlitSide there = slit_crossing(shape, c, bank, v);
        const SlitSide back =
            slit_crossing(shape, there.chart, there.bank, v);
        if (back.chart != c || back.bank != bank) involution_failures += 1.0;
        if (there.chart == c) involution_failures += 1.0;
      }
    }
  }
  out.push_back(
      make_result("slit transport is an involution", involution_failures, 0.0));

  double cone_guard_failures = 1.0;
  try {
    slit_crossing(shape, Chart::cylinder1, SlitBank::right, eps);
  } catch (const Error& e) {
    if (e.code() == Errc::at_cone_point) cone_guard_failures = 0.0;
  }
  out.push_back(make_result("slit transport rejects the cone point",
                            cone_guard_failures, 0.0));
  return out;
}

std::vector<AuditResult> run_family_audits(const MetricFamily& family,
                                           int grid_level) {
  std::vector<AuditResult> out;
  out.push_back(make_result("branch weight unit sums on the grid",
                            family_unit_sum_residual(family, grid_level),
                            1e-12));

  double symmetry_failures = 0.0;
  for (const CircleAngle z : sample_fibers()) {
    const SymmetryAudit audit = quotient_symmetry_audit(family, z, 32);
    if (!audit.shapes_swap) symmetry_failures += 1.0;
    if (!audit.crossings_match) symmetry_failures += 1.0;
  }
  out.push_back(make_result("deck map symmetry of shapes and crossings",
                            symmetry_failures, 0.0));

  double mass_err = 0.0;
  for (const CircleAngle z : sample_fibers()) {
    const PantsShape shape = pants_shape_at(family, z);
    mass_err = std::max(mass_err, std::abs(fiber_mass_quadrature(shape, 256) -
                                           fiber_mass(shape)));
  }
  out.push_back(
      make_result("fiber mass quadrature vs closed form", mass_err, 1e-8));
  return out;
}

bool all_pass(const std::vector<AuditResult>& results) {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

}  // namespace hirsch
