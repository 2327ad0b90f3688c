#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hirsch/audits.hpp"
#include "hirsch/circle_dynamics.hpp"
#include "hirsch/diffusion.hpp"
#include "hirsch/error.hpp"
#include "hirsch/harmonic_measures.hpp"
#include "hirsch/json_io.hpp"

namespace {

using namespace hirsch;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::invalid_argument:
    case Errc::io_error:
    case Errc::invalid_shape:
    case Errc::not_greater_than_one:
    case Errc::identity_violated:
    case Errc::arc_too_coarse:
    case Errc::family_mismatch:
      return 2;
    case Errc::no_convergence:
      return 3;
    default:
      return 4;
  }
}

const char* chart_name(Chart c) {
  switch (c) {
    case Chart::cylinder1:
      return "cylinder1";
    case Chart::cylinder2:
      return "cylinder2";
    case Chart::collar:
      return "collar";
  }
  return "?";
}

const char* boundary_name(Boundary b) {
  switch (b) {
    case Boundary::top1:
      return "top1";
    case Boundary::top2:
      return "top2";
    case Boundary::bottom:
      return "bottom";
  }
  return "?";
}

struct GMeasureArgs {
  std::string g_spec;
  int level = 10;
  double tol = 1e-13;
  std::size_t max_iter = 100000;
  std::string out_path;
  std::string report_path;
};

int run_gmeasure(const GMeasureArgs& a) {
  const GFunction g = parse_g_spec(a.g_spec);
  ensure_valid(g, std::min(a.level, 20));
  const GMeasureResult res = compute_g_measure(g, a.level, a.tol, a.max_iter);
  const int rn_level = std::max(1, std::min(6, a.level - 2));
  const double rn = radon_nikodym_check(res.measure, g, rn_level);

  std::printf("g                   %s\n", a.g_spec.c_str());
  std::printf("level               %d\n", a.level);
  std::printf("iterations          %zu\n", res.iterations);
  std::printf("final tv            %.6e\n", res.final_tv);
  std::printf("converged           %s\n", res.converged ? "yes" : "no");
  std::printf("oscillation         %s\n",
              res.oscillation_detected ? "detected" : "none");
  std::printf("rn residual         %.6e (arc level %d)\n", rn, rn_level);
  std::printf("inf log g           %.12f\n", g.inf_log());

  if (!a.out_path.empty()) save_measure(res.measure, a.out_path);
  if (!a.report_path.empty()) {
    nlohmann::json body{{"g", a.g_spec},
                        {"level", a.level},
                        {"iterations", res.iterations},
                        {"final_tv", res.final_tv},
                        {"converged", res.converged},
                        {"oscillation_detected", res.oscillation_detected},
                        {"rn_residual", rn},
                        {"rn_arc_level", rn_level},
                        {"inf_log_g", g.inf_log()}};
    write_json(report_envelope(std::move(body)), a.report_path);
  }
  return res.converged ? 0 : 3;
}

struct AuditArgs {
  std::string family_spec;
  int grid = 256;
  int level = 10;
  double fiber = 0.25;
  std::string report_path;
};

int run_audit(const AuditArgs& a) {
  const MetricFamily family = parse_family_spec(a.family_spec);
  const PantsShape shape =
      pants_shape_at(family, CircleAngle::from_turns(a.fiber));

  std::vector<AuditResult> results = run_collar_audits();
  for (auto& r : run_shape_audits(shape, a.grid)) results.push_back(r);
  for (auto& r : run_family_audits(family, a.level)) results.push_back(r);

  for (const auto& r : results) {
    std::printf("%-44s residual %.3e  tol %.3e  %s\n", r.check.c_str(),
                r.residual, r.tolerance, r.pass ? "pass" : "FAIL");
  }
  const bool ok = all_pass(results);
  std::printf("audit verdict: %s\n", ok ? "pass" : "FAIL");

  if (!a.report_path.empty()) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : results) {
      checks.push_back({{"check", r.check},
                        {"residual", r.residual},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass}});
    }
    nlohmann::json body{{"family", a.family_spec},
                        {"grid", a.grid},
                        {"level", a.level},
                        {"fiber", a.fiber},
                        {"checks", std::move(checks)},
                        {"pass", ok}};
    write_json(report_envelope(std::move(body)), a.report_path);
  }
  return ok ? 0 : 4;
}

struct SimulateArgs {
  std::string family_spec;
  double fiber = 0.25;
  int chart = 1;
  double u = 0.5;
  double v = 0.3;
  double dt = 1e-3;
  double t_end = 5.0;
  std::uint64_t seed = 1;
  std::uint64_t path_index = 0;
  double sample_dt = 0.0;
  std::string report_path;
};

int run_simulate(const SimulateArgs& a) {
  const MetricFamily family = parse_family_spec(a.family_spec);
  DiffusionConfig cfg;
  cfg.dt = a.dt;
  cfg.t_end = a.t_end;
  cfg.seed = a.seed;
  cfg.path_index = a.path_index;
  cfg.sample_dt = a.sample_dt;
  const Chart chart = (a.chart == 1) ? Chart::cylinder1 : Chart::cylinder2;
  const FoliatedPoint start{CircleAngle::from_turns(a.fiber),
                            ChartPoint{chart, a.u, a.v}};

  const Trajectory traj = simulate_path(family, start, cfg);
  bool events_ok = true;
  for (const auto& e : traj.events) {
    if (!holonomy_event_consistent(e)) events_ok = false;
  }

  std::printf("steps               %zu\n", traj.steps);
  std::printf("boundary crossings  %zu\n", traj.events.size());
  std::printf("slit crossings      %zu\n", traj.slit_crossings);
  std::printf("events consistent   %s\n", events_ok ? "yes" : "NO");
  std::printf("final fiber         %.12f\n", traj.final_point.fiber.turns());
  std::printf("final point         %s u=%.6f v=%.6f\n",
              chart_name(traj.final_point.point.chart),
              traj.final_point.point.u, traj.final_point.point.v);

  if (!a.report_path.empty()) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : traj.events) {
      events.push_back({{"time", e.time},
                        {"fiber_before", e.fiber_before.turns()},
                        {"fiber_after", e.fiber_after.turns()},
                        {"crossed", boundary_name(e.crossed)},
                        {"theta_exit", e.theta_exit.turns()},
                        {"theta_arrival", e.theta_arrival.turns()}});
    }
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : traj.samples) {
      samples.push_back({{"time", s.time},
                         {"fiber", s.point.fiber.turns()},
                         {"chart", chart_name(s.point.point.chart)},
                         {"u", s.point.point.u},
                         {"v", s.point.point.v}});
    }
    nlohmann::json body{
        {"family", a.family_spec},
        {"dt", a.dt},
        {"t_end", a.t_end},
        {"seed", a.seed},
        {"path_index", a.path_index},
        {"steps", traj.steps},
        {"slit_crossings", traj.slit_crossings},
        {"events_consistent", events_ok},
        {"events", std::move(events)},
        {"samples", std::move(samples)},
        {"final",
         {{"fiber", traj.final_point.fiber.turns()},
          {"chart", chart_name(traj.final_point.point.chart)},
          {"u", traj.final_point.point.u},
          {"v", traj.final_point.point.v}}}};
    write_json(report_envelope(std::move(body)), a.report_path);
  }
  return events_ok ? 0 : 4;
}

CircleMeasure resolve_measure(const std::string& spec,
                              const MetricFamily& family, int level,
                              double tol, std::size_t max_iter,
                              bool* converged) {
  *converged = true;
  if (spec == "g") {
    const GMeasureResult res =
        compute_g_measure(family.g(), level, tol, max_iter);
    *converged = res.converged;
    return res.measure;
  }
  if (spec == "uniform") return CircleMeasure::uniform(level);
  return load_measure(spec);
}

struct StationarityArgs {
  std::string family_spec;
  std::string mu_spec = "g";
  int level = 10;
  std::size_t n_paths = 100000;
  double t_end = 5.0;
  double dt = 5e-4;
  double alpha = 0.01;
  std::size_t bootstrap = 200;
  std::uint64_t seed = 1;
  double tol = 1e-13;
  std::size_t max_iter = 100000;
  std::string report_path;
};

int run_stationarity(const StationarityArgs& a) {
  const MetricFamily family = parse_family_spec(a.family_spec);

  bool mu_converged = true;
  const CircleMeasure mu = resolve_measure(a.mu_spec, family, a.level, a.tol,
                                           a.max_iter, &mu_converged);
  if (!mu_converged) {
    std::printf("transverse measure iteration did not converge\n");
    return 3;
  }

  StationarityConfig cfg;
  cfg.n_paths = a.n_paths;
  cfg.t_end = a.t_end;
  cfg.dt = a.dt;
  cfg.alpha = a.alpha;
  cfg.bootstrap_reps = a.bootstrap;
  cfg.seed = a.seed;
  const StationarityReport rep = stationarity_test(family, mu, cfg);

  std::printf("paths               %zu\n", rep.n_paths);
  std::printf("t_end / dt          %.4f / %.2e\n", rep.t_end, rep.dt);
  std::printf("fiber ks            %.6e  (threshold %.6e)  %s\n",
              rep.ks_fiber, rep.ks_fiber_threshold,
              rep.fiber_ks_pass ? "pass" : "FAIL");
  std::printf("fiber w1            %.6e  (band      %.6e)  %s\n",
              rep.w1_fiber, rep.w1_band, rep.fiber_w1_pass ? "pass" : "FAIL");
  std::printf("depth ks            %.6e  (threshold %.6e)  %s\n",
              rep.ks_depth, rep.ks_depth_threshold,
              rep.depth_pass ? "pass" : "FAIL");
  std::printf("stationary          %s\n", rep.stationary ? "yes" : "NO");

  if (!a.report_path.empty()) {
    nlohmann::json body{{"family", a.family_spec},
                        {"mu", a.mu_spec},
                        {"level", mu.level()},
                        {"n_paths", rep.n_paths},
                        {"t_end", rep.t_end},
                        {"dt", rep.dt},
                        {"alpha", rep.alpha},
                        {"ks_fiber", rep.ks_fiber},
                        {"ks_fiber_threshold", rep.ks_fiber_threshold},
                        {"w1_fiber", rep.w1_fiber},
                        {"w1_band", rep.w1_band},
                        {"ks_depth", rep.ks_depth},
                        {"ks_depth_threshold", rep.ks_depth_threshold},
                        {"stationary", rep.stationary}};
    write_json(report_envelope(std::move(body)), a.report_path);
  }
  return rep.stationary ? 0 : 5;
}

struct DistinctArgs {
  std::string family_a;
  std::string family_b;
  std::string mu_a = "g";
  std::string mu_b = "uniform";
  int level = 10;
  double threshold = 1e-4;
  double tol = 1e-13;
  std::size_t max_iter = 100000;
  std::string report_path;
};

int run_distinct(const DistinctArgs& a) {
  const std::string spec_b = a.family_b.empty() ? a.family_a : a.family_b;
  const MetricFamily fa = parse_family_spec(a.family_a);
  const MetricFamily fb = parse_family_spec(spec_b);
  bool conv_a = true;
  bool conv_b = true;
  const CircleMeasure mu_a =
      resolve_measure(a.mu_a, fa, a.level, a.tol, a.max_iter, &conv_a);
  const CircleMeasure mu_b =
      resolve_measure(a.mu_b, fb, a.level, a.tol, a.max_iter, &conv_b);
  if (!conv_a || !conv_b) {
    std::printf("fixed point iteration did not converge\n");
    return 3;
  }
  const HarmonicMeasure ha(fa, mu_a);
  const HarmonicMeasure hb(fb, mu_b);
  const double w1 = distinctness_distance(ha, hb);
  const int tv_level = std::max(mu_a.level(), mu_b.level());
  const CircleMeasure ta =
      (mu_a.level() < tv_level) ? mu_a.refined(tv_level) : mu_a;
  const CircleMeasure tb =
      (mu_b.level() < tv_level) ? mu_b.refined(tv_level) : mu_b;
  const double tv = tv_distance(ta, tb);
  const bool distinct = w1 > a.threshold;
  std::printf("tv between mu       %.6e\n", tv);
  std::printf("w1 between nu       %.6e  (threshold %.6e)\n", w1,
              a.threshold);
  std::printf("distinct            %s\n", distinct ? "yes" : "NO");

  if (!a.report_path.empty()) {
    nlohmann::json body{{"family", a.family_a},
                        {"mu_a", a.mu_a},
                        {"mu_b", a.mu_b},
                        {"level", a.level},
                        {"tv_mu", tv},
                        {"w1_marginals", w1},
                        {"threshold", a.threshold},
                        {"distinct", distinct}};
    write_json(report_envelope(std::move(body)), a.report_path);
  }
  return distinct ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for harmonic measures on the Hirsch "
               "foliation"};
  app.require_subcommand(1);
  app.footer("Set HIRSCHLAB_THREADS to bound the number of worker threads.");

  GMeasureArgs ga;
  CLI::App* gm = app.add_subcommand(
      "gmeasure", "iterate the transfer step to the fixed point measure");
  gm->add_option("--g", ga.g_spec, "branch weight spec")->required();
  gm->add_option("--level", ga.level, "dyadic grid level")
      ->check(CLI::Range(1, 24));
  gm->add_option("--tol", ga.tol, "total variation stopping tolerance");
  gm->add_option("--max-iter", ga.max_iter, "iteration cap");
  gm->add_option("--out", ga.out_path, "write the measure as JSON");
  gm->add_option("--report", ga.report_path, "write a JSON report");

  AuditArgs aa;
  CLI::App* au = app.add_subcommand(
      "audit", "run the geometry audits for one family");
  au->add_option("--family", aa.family_spec, "family spec")->required();
  au->add_option("--grid", aa.grid, "quadrature cells per unit length")
      ->check(CLI::Range(1, 100000));
  au->add_option("--level", aa.level, "dyadic grid level for fiber checks")
      ->check(CLI::Range(1, 24));
  au->add_option("--fiber", aa.fiber, "fiber for the shape audits, in turns");
  au->add_option("--report", aa.report_path, "write a JSON report");

  SimulateArgs sa;
  CLI::App* si = app.add_subcommand(
      "simulate", "run one leafwise Brownian path with holonomy");
  si->add_option("--family", sa.family_spec, "family spec")->required();
  si->add_option("--fiber", sa.fiber, "start fiber in turns");
  si->add_option("--chart", sa.chart, "start cylinder, 1 or 2")
      ->check(CLI::Range(1, 2));
  si->add_option("--u", sa.u, "start u");
  si->add_option("--v", sa.v, "start v");
  si->add_option("--dt", sa.dt, "time step");
  si->add_option("--t-end", sa.t_end, "total diffusion time");
  si->add_option("--seed", sa.seed, "rng seed");
  si->add_option("--path", sa.path_index, "path index");
  si->add_option("--sample-dt", sa.sample_dt, "sampling period, 0 for none");
  si->add_option("--report", sa.report_path, "write a JSON report");

  StationarityArgs ta;
  CLI::App* st = app.add_subcommand(
      "stationarity", "test the harmonic measure against time evolution");
  st->add_option("--family", ta.family_spec, "family spec")->required();
  st->add_option("--mu", ta.mu_spec,
                 "transverse measure: g, uniform or a JSON path");
  st->add_option("--level", ta.level, "dyadic grid level")
      ->check(CLI::Range(1, 24));
  st->add_option("--n", ta.n_paths, "number of paths");
  st->add_option("--t-end", ta.t_end, "diffusion time per path");
  st->add_option("--dt", ta.dt, "time step");
  st->add_option("--alpha", ta.alpha, "test size");
  st->add_option("--bootstrap", ta.bootstrap, "bootstrap repetitions");
  st->add_option("--seed", ta.seed, "rng seed");
  st->add_option("--report", ta.report_path, "write a JSON report");

  DistinctArgs da;
  CLI::App* di = app.add_subcommand(
      "distinct",
      "compare the harmonic measures built from two transverse measures");
  di->add_option("--family-a", da.family_a, "family spec")->required();
  di->add_option("--family-b", da.family_b,
                 "family spec for the second measure, defaults to the first");
  di->add_option("--mu-a", da.mu_a,
                 "first transverse measure: g, uniform or a JSON path");
  di->add_option("--mu-b", da.mu_b,
                 "second transverse measure: g, uniform or a JSON path");
  di->add_option("--level", da.level, "dyadic grid level")
      ->check(CLI::Range(1, 24));
  di->add_option("--threshold", da.threshold,
                 "marginal W1 below this counts as indistinct");
  di->add_option("--report", da.report_path, "write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gm->parsed()) return run_gmeasure(ga);
    if (au->parsed()) return run_audit(aa);
    if (si->parsed()) return run_simulate(sa);
    if (st->parsed()) return run_stationarity(ta);
    if (di->parsed()) return run_distinct(da);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 2;
}
