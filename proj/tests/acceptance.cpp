// Acceptance harness: nine end-to-end checks of the laboratory, each
// printed as a single [PASS]/[FAIL] line with its measured residuals and
// wall time. Exits zero only when every check passes.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hirsch/audits.hpp"
#include "hirsch/circle_dynamics.hpp"
#include "hirsch/diffusion.hpp"
#include "hirsch/harmonic_measures.hpp"
#include "hirsch/json_io.hpp"
#include "hirsch/pants_geometry.hpp"
#include "hirsch/rng.hpp"
#include "hirsch/stats.hpp"

using hirsch::Boundary;
using hirsch::BoundaryState;
using hirsch::Chart;
using hirsch::CircleAngle;
using hirsch::CircleMeasure;
using hirsch::DiffusionConfig;
using hirsch::GFunction;
using hirsch::HarmonicMeasure;
using hirsch::MetricFamily;
using hirsch::PantsShape;

namespace {

std::string g_bin;
std::filesystem::path g_tmp;

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + g_bin + " " + args + " 2>&1";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) {
    r.output = "popen failed";
    return r;
  }
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, got);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string tmp_path(const std::string& name) { return (g_tmp / name).string(); }

int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
  if (!pass) ++g_failures;
  std::printf("[%s] %d. %s: %s (%.2f s)\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
}

double run_checked(const std::function<bool(std::string&)>& body, int index,
                   const std::string& name) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(index, name, pass, detail, secs);
  return secs;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Random angle from a fresh counter block, independent of the library's
// generator wrappers.
CircleAngle random_angle(std::uint64_t i, std::uint32_t salt) {
  const auto w = hirsch::philox4x32(
      {std::uint32_t(i), std::uint32_t(i >> 32), 0x7a3cu, salt}, {19u, 77u});
  CircleAngle::ticks_t t = 0;
  t |= CircleAngle::ticks_t(w[0]);
  t |= CircleAngle::ticks_t(w[1]) << 32;
  t |= CircleAngle::ticks_t(w[2]) << 64;
  t |= CircleAngle::ticks_t(w[3]) << 96;
  return CircleAngle::from_ticks(t);
}

// Piecewise linear L1 distance between two same-level grid CDFs, written
// directly from the transport formula as an independent cross-check.
double w1_oracle(const CircleMeasure& a, const CircleMeasure& b) {
  const std::size_t n = a.size();
  const double h = std::ldexp(1.0, -a.level());
  double fa = 0.0, fb = 0.0, total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d0 = fa - fb;
    fa += a.arc_weight(j);
    fb += b.arc_weight(j);
    double d1 = fa - fb;
    if (j + 1 == n) d1 = 0.0;
    if (d0 == 0.0 && d1 == 0.0) continue;
    if (d0 * d1 >= 0.0) {
      total += 0.5 * h * (std::abs(d0) + std::abs(d1));
    } else {
      total += 0.5 * h * (d0 * d0 + d1 * d1) / std::abs(d1 - d0);
    }
  }
  return total;
}

struct ExitEnsemble {
  double mean = 0.0;
  double se = 0.0;
};

// Mean exit value of e^{-v} over n absorbed walks from half height.
ExitEnsemble exit_ensemble(const PantsShape& shape, std::size_t n, double dt,
                           std::uint64_t seed) {
  std::vector<double> phi(n, 0.0);
  const double v0 = 0.5 * std::log(2.0);
  hirsch::parallel_for_paths(n, [&](std::size_t i) {
    DiffusionConfig cfg;
    cfg.dt = dt;
    cfg.seed = seed;
    cfg.path_index = std::uint32_t(i);
    const auto exit = hirsch::simulate_to_exit(
        shape, hirsch::cylinder_point(Chart::cylinder1, 0.5, v0), cfg);
    phi[i] = (exit.boundary == Boundary::bottom) ? 1.0 : 0.5;
  });
  double sum = 0.0;
  for (double x : phi) sum += x;
  const double mean = sum / double(n);
  double sq = 0.0;
  for (double x : phi) sq += (x - mean) * (x - mean);
  const double sd = std::sqrt(sq / double(n - 1));
  return {mean, sd / std::sqrt(double(n))};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--bin") g_bin = argv[i + 1];
  }
  if (g_bin.empty()) {
    std::fprintf(stderr, "usage: acceptance --bin <path-to-hirschlab>\n");
    return 1;
  }
  g_tmp = std::filesystem::temp_directory_path() /
          ("hirschlab_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(g_tmp);

  // 1. The constant branch weight must reproduce the uniform measure with
  // zero deviation through the command line, inside one second.
  run_checked(
      [&](std::string& detail) {
        const std::string out = tmp_path("c1_measure.json");
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = run_cli("gmeasure --g const2 --level 12 --out " + out);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (r.code != 0) {
          detail = fmt("exit code %d", r.code);
          return false;
        }
        const auto mu = hirsch::load_measure(out);
        double dev = 0.0;
        for (std::size_t j = 0; j < mu.size(); ++j) {
          dev = std::max(dev, std::abs(mu.arc_weight(j) - std::ldexp(1.0, -12)));
        }
        detail = fmt("max deviation %.1e, cli %.2f s, budget 1 s", dev, secs);
        return mu.level() == 12 && dev == 0.0 && secs < 1.0;
      },
      1, "constant weight fixed point is exactly uniform");

  // 2. The computed fixed point must satisfy the arc identity mu(TB) =
  // integral of g over B, and agree with a dense eigensolve.
  run_checked(
      [&](std::string& detail) {
        const auto t0 = std::chrono::steady_clock::now();
        const GFunction g = GFunction::sine(0.3);
        const auto res = hirsch::compute_g_measure(g, 12);
        if (!res.converged) {
          detail = "power iteration did not converge";
          return false;
        }
        const double rn = hirsch::radon_nikodym_check(res.measure, g, 8);

        const int level = 10;
        const std::size_t n = std::size_t(1) << level;
        const double h = std::ldexp(1.0, -(level + 2));
        std::vector<double> row_lo(n), row_hi(n);
        for (std::size_t j = 0; j < n; ++j) {
          row_lo[j] = g.inv_value((4.0 * double(j) + 1.0) * h);
          row_hi[j] = g.inv_value((4.0 * double(j) + 3.0) * h);
        }
        std::vector<double> x(n, 1.0 / double(n)), next(n, 0.0);
        for (int it = 0; it < 4000; ++it) {
          for (std::size_t j = 0; j < n; ++j) {
            next[j] = row_lo[j] * x[(2 * j) & (n - 1)] +
                      row_hi[j] * x[(2 * j + 1) & (n - 1)];
          }
          double s = 0.0;
          for (double v : next) s += v;
          double diff = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            next[j] /= s;
            diff += std::abs(next[j] - x[j]);
          }
          x.swap(next);
          if (0.5 * diff <= 1e-15 && it > 8) break;
        }
        const auto lib = hirsch::compute_g_measure(g, level);
        double tv = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          tv += std::abs(lib.measure.arc_weight(j) - x[j]);
        }
        tv *= 0.5;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        detail = fmt("arc identity residual %.2e (tol 1e-6), "
                     "dense eigensolve tv %.2e (tol 1e-8), %.2f s, budget 10 s",
                     rn, tv, secs);
        return rn <= 1e-6 && tv <= 1e-8 && secs < 10.0;
      },
      2, "fixed point satisfies its arc identity and a dense eigensolve");

  // 3. Areas, fiber masses and the Gauss-Bonnet balance against closed
  // forms on the reference shapes.
  run_checked(
      [&](std::string& detail) {
        double worst_area = 0.0, worst_mass = 0.0, worst_gb_closed = 0.0,
               worst_gb_quad = 0.0;
        for (const PantsShape& s :
             {PantsShape::create(std::log(2.0), std::log(2.0), 0.05),
              PantsShape::create(std::log(3.0), std::log(1.5), 0.05)}) {
          worst_area = std::max(worst_area,
                                std::abs(hirsch::area_quadrature(s, 256) - 1.0));
          const double mass_closed =
              s.l1() * std::exp(-s.l1()) + s.l2() * std::exp(-s.l2());
          worst_mass = std::max(
              worst_mass,
              std::abs(hirsch::fiber_mass_quadrature(s, 256) - mass_closed));
          worst_gb_closed = std::max(
              worst_gb_closed, std::abs(hirsch::gauss_bonnet_residual_closed(s)));
          worst_gb_quad =
              std::max(worst_gb_quad,
                       std::abs(hirsch::gauss_bonnet_residual_quadrature(s, 256)));
        }
        detail = fmt("area %.2e (1e-6), fiber mass %.2e (1e-8), "
                     "gauss-bonnet closed %.2e (1e-10) quad %.2e (1e-4)",
                     worst_area, worst_mass, worst_gb_closed, worst_gb_quad);
        return worst_area <= 1e-6 && worst_mass <= 1e-8 &&
               worst_gb_closed <= 1e-10 && worst_gb_quad <= 1e-4;
      },
      3, "pants area, fiber mass and gauss-bonnet match closed forms");

  // 4. Fourfold shrink of the harmonic residual per mesh halving, collar
  // curvature, and the unit collar circle.
  run_checked(
      [&](std::string& detail) {
        double ratio_lo = 1e9, ratio_hi = 0.0, worst_res = 0.0;
        for (const PantsShape& s :
             {PantsShape::create(std::log(2.0), std::log(2.0), 0.05),
              PantsShape::create(std::log(3.0), std::log(1.5), 0.05)}) {
          const double r32 = hirsch::laplace_residual_harmonic(s, 1.0 / 32.0);
          const double r64 = hirsch::laplace_residual_harmonic(s, 1.0 / 64.0);
          const double r128 = hirsch::laplace_residual_harmonic(s, 1.0 / 128.0);
          for (double ratio : {r32 / r64, r64 / r128}) {
            ratio_lo = std::min(ratio_lo, ratio);
            ratio_hi = std::max(ratio_hi, ratio);
          }
          worst_res = std::max(worst_res, r128);
        }
        const double curv = hirsch::collar_curvature_max_error();
        const double circle = std::abs(hirsch::collar_circle_length(1.0, 64) - 1.0);
        detail = fmt("halving ratios in [%.2f, %.2f] (window [3.2, 4.8]), "
                     "curvature error %.2e (1e-6), circle length error %.2e "
                     "(1e-10), finest residual %.2e",
                     ratio_lo, ratio_hi, curv, circle, worst_res);
        return ratio_lo >= 3.2 && ratio_hi <= 4.8 && curv <= 1e-6 &&
               circle <= 1e-10;
      },
      4, "harmonic residual shrinks fourfold per halving; collar checks");

  // 5. Optional stopping: the mean exit value of e^{-v} matches its start
  // value within monte carlo error, and the step size bias shrinks.
  run_checked(
      [&](std::string& detail) {
        const auto t0 = std::chrono::steady_clock::now();
        const PantsShape s = PantsShape::create(std::log(2.0), std::log(2.0), 0.05);
        const std::size_t n = 100000;
        const double target = 1.0 / std::sqrt(2.0);
        const auto coarse = exit_ensemble(s, n, 1e-3, 2026);
        const auto fine = exit_ensemble(s, n, 5e-4, 2027);
        const double b1 = coarse.mean - target;
        const double b2 = fine.mean - target;
        const double se_diff = std::hypot(coarse.se, fine.se);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        const bool unbiased1 = std::abs(b1) <= 3.0 * coarse.se;
        const bool unbiased2 = std::abs(b2) <= 3.0 * fine.se;
        const bool shrinks = std::abs(b2) <= 0.75 * std::abs(b1) + 3.0 * se_diff;
        detail = fmt("bias %.2e (3se %.2e) at dt 1e-3, %.2e (3se %.2e) at dt "
                     "5e-4, halving slack %.2e, %.0f s, budget 300 s",
                     b1, 3.0 * coarse.se, b2, 3.0 * fine.se,
                     0.75 * std::abs(b1) + 3.0 * se_diff - std::abs(b2), secs);
        return unbiased1 && unbiased2 && shrinks && secs < 300.0;
      },
      5, "exit values preserve the harmonic mean and the bias shrinks with dt");

  // 6. Crossing algebra: ten thousand random round trips are exact, and
  // the maps commute with the deck identification.
  run_checked(
      [&](std::string& detail) {
        const MetricFamily fam = MetricFamily::create(GFunction::sine(0.3), 0.05);
        const PantsShape probe = PantsShape::symmetric(0.2);
        std::size_t trip_failures = 0, deck_failures = 0;
        const std::size_t n = 10000;
        const CircleAngle half = CircleAngle::from_dyadic(1, 1);
        for (std::size_t i = 0; i < n; ++i) {
          const CircleAngle z = random_angle(i, 1);
          const CircleAngle t = random_angle(i, 2);

          const BoundaryState start{z, Boundary::bottom, t};
          const BoundaryState up = hirsch::cross_to_doubled_fiber(z, t);
          const BoundaryState back =
              hirsch::cross_to_halved_fiber(up.fiber, up.boundary, up.theta);
          if (hirsch::canonical(back) != hirsch::canonical(start)) ++trip_failures;

          // A fiber over a top circle is the double of a bottom fiber, so
          // its halving is representable in ticks; an odd raw tick is not.
          const CircleAngle zt = random_angle(i, 3).doubled();
          for (Boundary top : {Boundary::top1, Boundary::top2}) {
            const BoundaryState s0{zt, top, t};
            const BoundaryState down = hirsch::cross_to_halved_fiber(zt, top, t);
            const BoundaryState re =
                hirsch::cross_to_doubled_fiber(down.fiber, down.theta);
            if (hirsch::canonical(re) != hirsch::canonical(s0)) ++trip_failures;
          }

          // Bank to bank and back across the slit is the identity.
          const double v = 0.199999 * (double(i % 997) / 997.0);
          const auto side =
              hirsch::slit_crossing(probe, Chart::cylinder1, hirsch::SlitBank::right, v);
          const auto again = hirsch::slit_crossing(probe, side.chart, side.bank, v);
          if (again.chart != Chart::cylinder1 || again.bank != hirsch::SlitBank::right) {
            ++trip_failures;
          }

          // Deck equivariance of both crossing maps and of the shapes.
          const BoundaryState a1 =
              hirsch::canonical(hirsch::cross_to_doubled_fiber(z, t));
          const BoundaryState a2 = hirsch::canonical(
              hirsch::cross_to_doubled_fiber(z.antipode(), t + half));
          if (a1 != a2) ++deck_failures;
          const BoundaryState b1 = hirsch::canonical(
              hirsch::cross_to_halved_fiber(z, Boundary::top1, t));
          const BoundaryState b2 = hirsch::canonical(
              hirsch::cross_to_halved_fiber(z.antipode(), Boundary::top2, t));
          if (b1 != b2) ++deck_failures;
          if (i % 16 == 0) {
            if (!hirsch::shapes_swap_under_antipode(
                    hirsch::pants_shape_at(fam, z),
                    hirsch::pants_shape_at(fam, z.antipode()))) {
              ++deck_failures;
            }
          }
        }
        detail = fmt("%zu round trips with %zu failures, deck mismatches %zu",
                     n, trip_failures, deck_failures);
        return trip_failures == 0 && deck_failures == 0;
      },
      6, "crossing algebra round trips exactly and commutes with the deck map");

  // 7. Positive stationarity controls: the flat pairing and the computed
  // fixed point pairing both pass all three marginal tests.
  run_checked(
      [&](std::string& detail) {
        hirsch::StationarityConfig cfg;
        cfg.n_paths = 100000;
        cfg.t_end = 5.0;
        cfg.dt = 5e-4;
        cfg.alpha = 0.01;
        cfg.bootstrap_reps = 200;
        cfg.seed = 0;

        const auto t0 = std::chrono::steady_clock::now();
        const MetricFamily flat = MetricFamily::create(GFunction::constant2(), 0.05);
        const auto flat_rep =
            hirsch::stationarity_test(flat, CircleMeasure::uniform(10), cfg);
        const double secs_flat =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();

        const auto t1 = std::chrono::steady_clock::now();
        const MetricFamily fam = MetricFamily::create(GFunction::sine(0.3), 0.05);
        const auto fp = hirsch::compute_g_measure(GFunction::sine(0.3), 10);
        if (!fp.converged) {
          detail = "fixed point iteration did not converge";
          return false;
        }
        const auto tilted_rep = hirsch::stationarity_test(fam, fp.measure, cfg);
        const double secs_tilted =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t1)
                .count();

        detail = fmt(
            "flat: ks %.4f/%.4f w1 %.5f/%.5f depth %.4f -> %s in %.0f s; "
            "fixed point: ks %.4f/%.4f w1 %.5f/%.5f depth %.4f -> %s in %.0f "
            "s; budget 900 s each",
            flat_rep.ks_fiber, flat_rep.ks_fiber_threshold, flat_rep.w1_fiber,
            flat_rep.w1_band, flat_rep.ks_depth,
            flat_rep.stationary ? "stationary" : "rejected", secs_flat,
            tilted_rep.ks_fiber, tilted_rep.ks_fiber_threshold,
            tilted_rep.w1_fiber, tilted_rep.w1_band, tilted_rep.ks_depth,
            tilted_rep.stationary ? "stationary" : "rejected", secs_tilted);
        return flat_rep.stationary && tilted_rep.stationary &&
               secs_flat < 900.0 && secs_tilted < 900.0;
      },
      7, "matched pairings are accepted as stationary");

  // 8. The mismatched pairing is rejected through the command line with
  // the statistical exit code, and distinct inputs give a positive
  // transport distance equal to the direct CDF computation.
  run_checked(
      [&](std::string& detail) {
        const auto neg = run_cli(
            "stationarity --family sine:a=0.3 --mu uniform --level 10 "
            "--n 100000 --t-end 5 --dt 5e-4 --bootstrap 200 --seed 0");
        const bool rejected = neg.code == 5;

        const MetricFamily fam = MetricFamily::create(GFunction::sine(0.3), 0.05);
        std::vector<double> w(1024, std::ldexp(1.0, -10));
        w[0] += 4e-4;
        w[512] -= 4e-4;
        const HarmonicMeasure a(fam, CircleMeasure::uniform(10));
        const HarmonicMeasure b(fam, CircleMeasure::from_weights(10, w));
        const double dist = hirsch::distinctness_distance(a, b);
        const double oracle =
            w1_oracle(a.transverse_marginal(), b.transverse_marginal());
        const double gap = std::abs(dist - oracle);
        detail = fmt("mismatch exit code %d (want 5); transport distance "
                     "%.3e vs oracle %.3e, gap %.1e (tol 1e-10)",
                     neg.code, dist, oracle, gap);
        return rejected && dist > 0.0 && gap <= 1e-10;
      },
      8, "mismatched pairing rejected; distinct inputs measurably distinct");

  // 9. Stochastic commands rerun with the same seed produce byte identical
  // report subtrees under one and eight worker threads.
  run_checked(
      [&](std::string& detail) {
        const std::string s1 = tmp_path("c9_stat_t1.json");
        const std::string s8 = tmp_path("c9_stat_t8.json");
        const std::string stat_args =
            "stationarity --family sine:a=0.3 --mu uniform --level 8 --n 2000 "
            "--t-end 1 --dt 2e-3 --bootstrap 50 --seed 123 --report ";
        const auto a = run_cli(stat_args + s1, "HIRSCHLAB_THREADS=1 ");
        const auto b = run_cli(stat_args + s8, "HIRSCHLAB_THREADS=8 ");
        if (a.code != b.code) {
          detail = fmt("exit codes differ: %d vs %d", a.code, b.code);
          return false;
        }
        const std::string stat1 = hirsch::load_json(s1)["report"].dump();
        const std::string stat8 = hirsch::load_json(s8)["report"].dump();

        const std::string p1 = tmp_path("c9_sim_t1.json");
        const std::string p8 = tmp_path("c9_sim_t8.json");
        const std::string sim_args =
            "simulate --family sine:a=0.3 --fiber 0.2 --chart 1 --u 0.5 "
            "--v 0.1 --dt 1e-3 --t-end 2 --seed 31 --sample-dt 0.5 --report ";
        const auto c = run_cli(sim_args + p1, "HIRSCHLAB_THREADS=1 ");
        const auto d = run_cli(sim_args + p8, "HIRSCHLAB_THREADS=8 ");
        if (c.code != 0 || d.code != 0) {
          detail = fmt("simulate exit codes %d and %d", c.code, d.code);
          return false;
        }
        const std::string sim1 = hirsch::load_json(p1)["report"].dump();
        const std::string sim8 = hirsch::load_json(p8)["report"].dump();

        const bool stat_same = stat1 == stat8;
        const bool sim_same = sim1 == sim8;
        detail = fmt("stationarity report subtree %s (%zu bytes), simulate "
                     "report subtree %s (%zu bytes)",
                     stat_same ? "identical" : "DIFFERS", stat1.size(),
                     sim_same ? "identical" : "DIFFERS", sim1.size());
        return stat_same && sim_same;
      },
      9, "seeded reports are byte identical across one and eight threads");

  std::error_code ec;
  std::filesystem::remove_all(g_tmp, ec);

  if (g_failures == 0) {
    std::printf("all 9 acceptance checks passed\n");
    return 0;
  }
  std::printf("%d acceptance check(s) failed\n", g_failures);
  return 1;
}
