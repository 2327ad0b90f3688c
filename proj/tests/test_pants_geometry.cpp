#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hirsch/audits.hpp"
#include "hirsch/pants_geometry.hpp"
#include "test_util.hpp"

using hirsch::Boundary;
using hirsch::Chart;
using hirsch::ChartPoint;
using hirsch::Errc;
using hirsch::PantsShape;
using hirsch::SlitBank;
using hirsch_test::thrown_code;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
const double kLog2 = std::log(2.0);
}  // namespace

TEST_CASE("shape creation enforces the unit sum and slit bounds") {
  const PantsShape sym = PantsShape::symmetric(0.1);
  CHECK(sym.l1() == kLog2);
  CHECK(sym.l2() == kLog2);
  CHECK(sym.bottom_len1() == 0.5);
  CHECK(sym.exp_l1() == 2.0);

  const PantsShape asym = PantsShape::create(std::log(3.0), std::log(1.5), 0.2);
  CHECK(asym.bottom_len1() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(asym.bottom_len2() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  CHECK(thrown_code([] { PantsShape::create(kLog2, std::log(3.0), 0.1); }) ==
        Errc::invalid_shape);
  CHECK(thrown_code([] { PantsShape::create(-1.0, kLog2, 0.1); }) ==
        Errc::invalid_shape);
  CHECK(thrown_code([] { PantsShape::create(kLog2, kLog2, 0.0); }) ==
        Errc::invalid_shape);
  CHECK(thrown_code([] { PantsShape::create(kLog2, kLog2, kLog2); }) ==
        Errc::invalid_shape);
}

TEST_CASE("metric components and singular points") {
  const PantsShape s = PantsShape::symmetric(0.1);
  const auto m = hirsch::metric_at(s, hirsch::cylinder_point(Chart::cylinder1, 0.3, 0.0));
  CHECK(m.g_uu == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.g_vv == 1.0);
  const auto top = hirsch::metric_at(s, hirsch::cylinder_point(Chart::cylinder1, 0.0, kLog2));
  CHECK(top.g_uu == doctest::Approx(1.0).epsilon(1e-15));

  const auto collar = hirsch::metric_at(s, hirsch::collar_point(1.0, 0.0));
  CHECK(collar.g_uu == doctest::Approx(1.0 / (4.0 * M_PI * M_PI)).epsilon(1e-15));
  CHECK(collar.g_uu == collar.g_vv);

  CHECK(thrown_code([&] {
          hirsch::metric_at(s, hirsch::cylinder_point(Chart::cylinder1, 0.0, 0.1));
        }) == Errc::singular_point);
  // The u coordinate wraps, so u = 1 addresses the cone point as well.
  CHECK(thrown_code([&] {
          hirsch::metric_at(s, hirsch::cylinder_point(Chart::cylinder2, 1.0, 0.1));
        }) == Errc::singular_point);
  CHECK(thrown_code([&] { hirsch::metric_at(s, hirsch::collar_point(0.0, 0.0)); }) ==
        Errc::singular_point);
  CHECK(thrown_code([&] {
          hirsch::metric_at(s, hirsch::cylinder_point(Chart::cylinder1, 0.0, 2.0));
        }) == Errc::invalid_argument);
  CHECK(thrown_code([&] { hirsch::cylinder_length(s, Chart::collar); }) ==
        Errc::invalid_argument);
}

TEST_CASE("areas and boundary lengths match closed forms") {
  for (const PantsShape& s :
       {PantsShape::symmetric(0.1),
        PantsShape::create(std::log(3.0), std::log(1.5), 0.2)}) {
    CHECK(hirsch::area_closed_form(s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hirsch::area_quadrature(s, 256) == doctest::Approx(1.0).epsilon(1e-6));
    for (Boundary b : {Boundary::top1, Boundary::top2, Boundary::bottom}) {
      CHECK(hirsch::boundary_length(s, b) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(hirsch::boundary_length_quadrature(s, b, 64) ==
            doctest::Approx(hirsch::boundary_length(s, b)).epsilon(1e-12));
    }
    CHECK(hirsch::gauss_bonnet_residual_closed(s) == 0.0);
    CHECK(std::abs(hirsch::gauss_bonnet_residual_quadrature(s, 256)) <= 1e-4);
  }
  CHECK(thrown_code([] {
          hirsch::area_quadrature(PantsShape::symmetric(0.1), 1);
        }) == Errc::invalid_argument);
}

TEST_CASE("harmonic function values and continuity across gluings") {
  const PantsShape s = PantsShape::create(std::log(3.0), std::log(1.5), 0.2);
  // e^{-v} on the cylinders, independent of u.
  CHECK(hirsch::harmonic_phi(s, hirsch::cylinder_point(Chart::cylinder1, 0.3, 0.0)) == 1.0);
  CHECK(hirsch::harmonic_phi(s, hirsch::cylinder_point(Chart::cylinder2, 0.9, 0.0)) == 1.0);
  CHECK(hirsch::harmonic_phi(s, hirsch::cylinder_point(Chart::cylinder1, 0.5, s.l1())) ==
        doctest::Approx(s.bottom_len1()).epsilon(1e-15));
  // Equal v on both banks of the slit carries equal phi.
  CHECK(hirsch::harmonic_phi(s, hirsch::cylinder_point(Chart::cylinder1, 0.0, 0.15)) ==
        hirsch::harmonic_phi(s, hirsch::cylinder_point(Chart::cylinder2, 0.0, 0.15)));
  // The collar value 1 - log(r) / (2 pi) meets the cylinder value 1 at r = 1.
  CHECK(hirsch::harmonic_phi(s, hirsch::collar_point(1.0, 0.0)) == 1.0);
  CHECK(hirsch::harmonic_phi(s, hirsch::collar_point(0.5, 0.0)) ==
        doctest::Approx(1.0 + kLog2 / kTwoPi).epsilon(1e-15));
}

TEST_CASE("laplace stencil annihilates constants and shrinks fourfold") {
  const PantsShape s = PantsShape::symmetric(0.1);
  CHECK(hirsch::laplace_residual(s, 1.0 / 32.0,
                                 [](Chart, double, double) { return 7.5; }) == 0.0);
  // The stencil applied to f = v leaves exactly the first order term.
  CHECK(hirsch::laplace_residual(s, 1.0 / 64.0,
                                 [](Chart, double, double v) { return v; }) ==
        doctest::Approx(1.0).epsilon(1e-9));

  const double r32 = hirsch::laplace_residual_harmonic(s, 1.0 / 32.0);
  const double r64 = hirsch::laplace_residual_harmonic(s, 1.0 / 64.0);
  CHECK(r32 / r64 > 3.2);
  CHECK(r32 / r64 < 4.8);
  CHECK(r64 <= 1e-3);
}

TEST_CASE("collar chart scale curvature and circle lengths") {
  CHECK(hirsch::collar_scale(1.0) * hirsch::collar_scale(1.0) ==
        doctest::Approx(0.02533029591058444).epsilon(1e-14));
  CHECK(hirsch::collar_curvature_max_error() <= 1e-6);
  CHECK(hirsch::collar_harmonic_max_residual() <= 1e-3);
  CHECK(std::abs(hirsch::collar_circle_length(1.0, 64) - 1.0) <= 1e-10);
  const double closed = kTwoPi / (kTwoPi - std::log(0.25));
  CHECK(hirsch::collar_circle_length(0.25, 128) ==
        doctest::Approx(closed).epsilon(1e-10));

  // The discrete operator is the conformal factor's inverse square times
  // the euclidean five point Laplacian; a quadratic pins the scaling.
  const double x = 0.5, y = 0.2;
  const double r = std::hypot(x, y);
  const double lam = hirsch::collar_scale(r);
  const double got = hirsch::collar_laplacian(
      [](double a, double b) { return a * a + b * b; }, x, y, 1e-3);
  CHECK(got == doctest::Approx(4.0 / (lam * lam)).epsilon(1e-9));

  CHECK(hirsch::smoothing_flatten_residual(1000) <= 1e-12);
  CHECK(hirsch::smoothed_cone_angle(0.5, 4096) ==
        doctest::Approx(2.0 * kTwoPi).epsilon(1e-9));
}

TEST_CASE("slit crossing swaps chart and bank away from the tip") {
  const PantsShape s = PantsShape::symmetric(0.2);
  const auto side = hirsch::slit_crossing(s, Chart::cylinder1, SlitBank::right, 0.1);
  CHECK(side.chart == Chart::cylinder2);
  CHECK(side.bank == SlitBank::left);
  const auto back = hirsch::slit_crossing(s, side.chart, side.bank, 0.1);
  CHECK(back.chart == Chart::cylinder1);
  CHECK(back.bank == SlitBank::right);

  // Crossing at v = 0 is allowed; the cone sits at the upper end only.
  CHECK_NOTHROW(hirsch::slit_crossing(s, Chart::cylinder2, SlitBank::left, 0.0));
  CHECK(thrown_code([&] {
          hirsch::slit_crossing(s, Chart::cylinder1, SlitBank::right, 0.2);
        }) == Errc::at_cone_point);
  CHECK(thrown_code([&] {
          hirsch::slit_crossing(s, Chart::cylinder1, SlitBank::right, 0.3);
        }) == Errc::invalid_argument);
  CHECK(thrown_code([&] {
          hirsch::slit_crossing(s, Chart::collar, SlitBank::right, 0.1);
        }) == Errc::invalid_argument);
}

TEST_CASE("boundary circles parameterize by arclength and invert") {
  const PantsShape s = PantsShape::symmetric(0.1);
  const ChartPoint q = hirsch::boundary_point(s, Boundary::bottom, 0.25);
  CHECK(q.chart == Chart::cylinder1);
  CHECK(q.u == 0.5);
  CHECK(q.v == 0.0);
  const ChartPoint q2 = hirsch::boundary_point(s, Boundary::bottom, 0.75);
  CHECK(q2.chart == Chart::cylinder2);
  CHECK(q2.u == 0.5);
  const ChartPoint t1 = hirsch::boundary_point(s, Boundary::top1, 0.3);
  CHECK(t1.chart == Chart::cylinder1);
  CHECK(t1.u == 0.3);
  CHECK(t1.v == s.l1());

  const PantsShape a = PantsShape::create(std::log(3.0), std::log(1.5), 0.2);
  for (Boundary b : {Boundary::top1, Boundary::top2, Boundary::bottom}) {
    for (double theta : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.77, 0.999}) {
      const auto p = hirsch::boundary_point(a, b, theta);
      const auto back = hirsch::boundary_param(a, p);
      CHECK(back.boundary == b);
      CHECK(back.theta == doctest::Approx(theta).epsilon(1e-13));
    }
  }
  // Interior points do not parameterize any boundary circle.
  CHECK(thrown_code([&] {
          hirsch::boundary_param(a, hirsch::cylinder_point(Chart::cylinder1, 0.2, 0.4));
        }) == Errc::invalid_argument);
}

TEST_CASE("collar and shape audit bundles pass at reference settings") {
  const auto collar = hirsch::run_collar_audits();
  CHECK(hirsch::all_pass(collar));
  for (const PantsShape& s :
       {PantsShape::symmetric(0.05),
        PantsShape::create(std::log(3.0), std::log(1.5), 0.2)}) {
    const auto results = hirsch::run_shape_audits(s, 256);
    for (const auto& r : results) {
      INFO(r.check, " residual ", r.residual, " tol ", r.tolerance);
      CHECK(r.pass);
    }
  }
}
