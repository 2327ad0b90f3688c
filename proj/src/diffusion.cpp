#include "hirsch/diffusion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace hirsch {

namespace {

constexpr int kMaxHalvings = 40;

// exp(-x) falls below the smallest uniform draw (2^-53) past this point,
// so skipping the test is exactly equivalent to running it.
constexpr double kBridgeExpCutoff = 36.75;

void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

double wrap_unit(double u) {
  double x = u - std::floor(u);
  if (x >= 1.0) x = 0.0;
  return x;
}

struct PantsConsts {
  double y_bottom1, y_bottom2;
  double y_slit1, y_slit2;
  double ratio_1to2, ratio_2to1;
};

PantsConsts make_consts(const PantsShape& s) {
  const double shrink = std::exp(-s.slit_depth());
  PantsConsts c;
  c.y_bottom1 = s.exp_l1();
  c.y_bottom2 = s.exp_l2();
  c.y_slit1 = s.exp_l1() * shrink;
  c.y_slit2 = s.exp_l2() * shrink;
  c.ratio_1to2 = s.exp_l2() / s.exp_l1();
  c.ratio_2to1 = s.exp_l1() / s.exp_l2();
  return c;
}

double y_bottom_of(const PantsConsts& c, Chart chart) {
  return chart == Chart::cylinder1 ? c.y_bottom1 : c.y_bottom2;
}
double y_slit_of(const PantsConsts& c, Chart chart) {
  return chart == Chart::cylinder1 ? c.y_slit1 : c.y_slit2;
}
double slit_ratio_of(const PantsConsts& c, Chart chart) {
  return chart == Chart::cylinder1 ? c.ratio_1to2 : c.ratio_2to1;
}
Chart other_cylinder(Chart c) {
  return c == Chart::cylinder1 ? Chart::cylinder2 : Chart::cylinder1;
}

double segment_point_dist2(double ax, double ay, double bx, double by,
                           double px, double py) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0);
  }
  const double ex = ax + t * dx - px;
  const double ey = ay + t * dy - py;
  return ex * ex + ey * ey;
}

StepResult attempt_step(const PantsConsts& consts, Chart chart, double u,
                        double y, double dt, double n1, double n2,
                        const std::function<double()>& next_uniform,
                        double cone_guard) {
  const double yb = y_bottom_of(consts, chart);
  const double yc = y_slit_of(consts, chart);
  const double guard2 = cone_guard * cone_guard;
  double dt_eff = dt;
  for (int level = 0; level <= kMaxHalvings; ++level, dt_eff *= 0.5) {
    const double amp = std::sqrt(2.0 * dt_eff);
    const double du = amp * y * n1;
    const double dy = amp * y * n2;
    const double u2 = u + du;
    const double y2 = y + dy;
    if (!std::isfinite(u2) || !std::isfinite(y2)) continue;

    bool near_cone = false;
    const double m_lo = std::floor(std::min(u, u2));
    const double m_hi = std::floor(std::max(u, u2)) + 1.0;
    for (double m = m_lo; m <= m_hi; m += 1.0) {
      if (segment_point_dist2(u, y, u2, y2, m, yc) < guard2) {
        near_cone = true;
        break;
      }
    }
    if (near_cone) continue;

    double s_top = 2.0;
    if (y2 <= 1.0) s_top = (y > y2) ? (y - 1.0) / (y - y2) : 0.0;
    double s_bot = 2.0;
    if (y2 >= yb) s_bot = (y2 > y) ? (yb - y) / (y2 - y) : 0.0;

    double s_slit = 2.0;
    int slit_dir = 0;
    if (du > 0.0) {
      for (double m = 1.0; m <= u2; m += 1.0) {
        const double s = (m - u) / du;
        if (y + s * dy > yc) {
          s_slit = s;
          slit_dir = 1;
          break;
        }
      }
    } else if (du < 0.0) {
      for (double m = 0.0; m >= u2; m -= 1.0) {
        const double s = (m - u) / du;
        if (y + s * dy > yc) {
          s_slit = s;
          slit_dir = -1;
          break;
        }
      }
    }

    StepResult r;
    r.halvings = level;
    if (std::min({s_top, s_bot, s_slit}) <= 1.0) {
      if (s_top <= s_bot && s_top <= s_slit) {
        r.kind = StepResult::Kind::hit_boundary;
        r.boundary =
            (chart == Chart::cylinder1) ? Boundary::top1 : Boundary::top2;
        r.exit_u = wrap_unit(u + s_top * du);
        r.chart = chart;
        r.u = r.exit_u;
        r.y = 1.0;
        r.time_consumed = s_top * dt_eff;
        return r;
      }
      if (s_bot <= s_slit) {
        r.kind = StepResult::Kind::hit_boundary;
        r.boundary = Boundary::bottom;
        r.exit_u = wrap_unit(u + s_bot * du);
        r.chart = chart;
        r.u = r.exit_u;
        r.y = yb;
        r.time_consumed = s_bot * dt_eff;
        return r;
      }
      r.kind = StepResult::Kind::crossed_slit;
      r.chart = other_cylinder(chart);
      r.u = (slit_dir > 0) ? 0.0 : 1.0;
      r.y = (y + s_slit * dy) * slit_ratio_of(consts, chart);
      // The arrival sits on the slit line of the other chart, whose
      // heights differ by the chart ratio, so a crossing just above the
      // guard disc here can land inside or barely outside the guard disc
      // there. Escape by halving needs clearance above the guard radius,
      // so such arrivals are lifted to twice that radius.
      const double y_tip = y_slit_of(consts, r.chart);
      if (r.y < y_tip + 2.0 * cone_guard) r.y = y_tip + 2.0 * cone_guard;
      r.time_consumed = s_slit * dt_eff;
      return r;
    }

    const double d0t = y - 1.0;
    const double d1t = y2 - 1.0;
    if (d0t > 0.0 && d1t > 0.0) {
      const double x = d0t * d1t / dt_eff;
      if (x < kBridgeExpCutoff && next_uniform() < std::exp(-x)) {
        const double s = d0t / (d0t + d1t);
        r.kind = StepResult::Kind::hit_boundary;
        r.boundary =
            (chart == Chart::cylinder1) ? Boundary::top1 : Boundary::top2;
        r.exit_u = wrap_unit(u + s * du);
        r.chart = chart;
        r.u = r.exit_u;
        r.y = 1.0;
        r.time_consumed = s * dt_eff;
        return r;
      }
    }
    const double d0b = yb - y;
    const double d1b = yb - y2;
    if (d0b > 0.0 && d1b > 0.0) {
      const double x = d0b * d1b / (yb * yb * dt_eff);
      if (x < kBridgeExpCutoff && next_uniform() < std::exp(-x)) {
        const double s = d0b / (d0b + d1b);
        r.kind = StepResult::Kind::hit_boundary;
        r.boundary = Boundary::bottom;
        r.exit_u = wrap_unit(u + s * du);
        r.chart = chart;
        r.u = r.exit_u;
        r.y = yb;
        r.time_consumed = s * dt_eff;
        return r;
      }
    }

    r.kind = StepResult::Kind::interior;
    r.chart = chart;
    r.u = wrap_unit(u2);
    r.y = y2;
    r.time_consumed = dt_eff;
    return r;
  }
  // Only proximity to a cone image can exhaust the halvings, so the
  // start point must sit within a hair of a guard disc. Brownian paths
  // never hit the tip itself, and the displacement here stays below
  // twice the guard radius, far beneath every reported statistic, so the
  // walker is placed on the circle of twice the guard radius around the
  // nearest tip and the walk continues.
  const double m_lo_tip = std::floor(u);
  const double dy_tip = y - yc;
  const double d_lo = std::hypot(u - m_lo_tip, dy_tip);
  const double d_hi = std::hypot(u - (m_lo_tip + 1.0), dy_tip);
  const double m_tip = (d_lo <= d_hi) ? m_lo_tip : m_lo_tip + 1.0;
  const double d_tip = std::min(d_lo, d_hi);
  const double radius = 2.0 * cone_guard;
  StepResult r;
  r.kind = StepResult::Kind::interior;
  r.chart = chart;
  r.halvings = kMaxHalvings;
  if (d_tip > 0.0) {
    const double scale = std::max(1.0, radius / d_tip);
    r.u = wrap_unit(m_tip + (u - m_tip) * scale);
    r.y = std::clamp(yc + dy_tip * scale, 1.0, yb);
  } else {
    r.u = wrap_unit(m_tip);
    r.y = std::min(yc + radius, yb);
  }
  r.time_consumed = dt * std::ldexp(1.0, -kMaxHalvings);
  return r;
}

void validate_config(const DiffusionConfig& cfg) {
  require(std::isfinite(cfg.dt) && cfg.dt > 0.0 && cfg.dt <= 1e-2,
          Errc::invalid_argument, "dt must lie in (0, 1e-2]");
  require(std::isfinite(cfg.t_end) && cfg.t_end > 0.0, Errc::invalid_argument,
          "t_end must be positive");
  require(std::isfinite(cfg.cone_guard) && cfg.cone_guard > 0.0 &&
              cfg.cone_guard <= 1e-2,
          Errc::invalid_argument, "cone guard must lie in (0, 1e-2]");
  require(cfg.max_events >= 1, Errc::invalid_argument,
          "step budget must be positive");
  require(std::isfinite(cfg.sample_dt) && cfg.sample_dt >= 0.0,
          Errc::invalid_argument, "sample period must be nonnegative");
}

struct WalkerState {
  Chart chart;
  double u;
  double y;
};

WalkerState walker_from_chart_point(const PantsShape& shape,
                                    const ChartPoint& p) {
  require(p.chart == Chart::cylinder1 || p.chart == Chart::cylinder2,
          Errc::invalid_argument, "the walker lives on the cylinder charts");
  const double len = cylinder_length(shape, p.chart);
  require(std::isfinite(p.v) && p.v >= 0.0 && p.v <= len,
          Errc::invalid_argument, "v must lie in [0, L]");
  require(std::isfinite(p.u), Errc::invalid_argument, "u must be finite");
  return {p.chart, wrap_unit(p.u), std::exp(len - p.v)};
}

ChartPoint chart_point_of(const PantsShape& shape, const WalkerState& w) {
  const double len = cylinder_length(shape, w.chart);
  const double v = std::clamp(len - std::log(w.y), 0.0, len);
  return {w.chart, w.u, v};
}

template <class SampleFn, class EventFn>
FoliatedPoint walk_core(const MetricFamily& family, const FoliatedPoint& start,
                        const DiffusionConfig& cfg, std::size_t* steps_out,
                        std::size_t* slit_out, SampleFn&& on_sample,
                        EventFn&& on_event) {
  validate_config(cfg);
  CircleAngle fiber = start.fiber;
  PantsShape shape = pants_shape_at(family, fiber);
  PantsConsts consts = make_consts(shape);
  WalkerState w = walker_from_chart_point(shape, start.point);

  PhiloxRng rng(cfg.seed, kStreamWalk, cfg.path_index);
  const auto uniform = [&rng] { return rng.uniform01(); };

  double t = 0.0;
  double next_sample = cfg.sample_dt;
  std::size_t steps = 0;
  std::size_t slit_crossings = 0;
  if (cfg.sample_dt > 0.0) {
    on_sample(0.0, FoliatedPoint{fiber, chart_point_of(shape, w)});
  }

  while (t < cfg.t_end) {
    const double dt_step = std::min(cfg.dt, cfg.t_end - t);
    if (dt_step <= cfg.t_end * 1e-15) break;
    require(++steps <= cfg.max_events, Errc::max_events_exceeded,
            "step budget exhausted before t_end");
    const auto [n1, n2] = rng.normal_pair();
    const StepResult res = attempt_step(consts, w.chart, w.u, w.y, dt_step, n1,
                                        n2, uniform, cfg.cone_guard);
    t += res.time_consumed;
    switch (res.kind) {
      case StepResult::Kind::interior:
        w = {res.chart, res.u, res.y};
        break;
      case StepResult::Kind::crossed_slit:
        ++slit_crossings;
        w = {res.chart, res.u, res.y};
        break;
      case StepResult::Kind::hit_boundary: {
        const double v_exit =
            (res.boundary == Boundary::bottom)
                ? 0.0
                : cylinder_length(shape, res.chart);
        const BoundaryParam bp =
            boundary_param(shape, {res.chart, res.exit_u, v_exit});
        const CircleAngle theta_exit = CircleAngle::from_turns(bp.theta);
        const BoundaryState arrival =
            (bp.boundary == Boundary::bottom)
                ? cross_to_doubled_fiber(fiber, theta_exit)
                : cross_to_halved_fiber(fiber, bp.boundary, theta_exit);
        on_event(HolonomyEvent{t, fiber, arrival.fiber, bp.boundary,
                               theta_exit, arrival.theta});
        fiber = arrival.fiber;
        shape = pants_shape_at(family, fiber);
        consts = make_consts(shape);
        if (arrival.boundary == Boundary::top1) {
          w = {Chart::cylinder1, wrap_unit(arrival.theta.turns()), 1.0};
        } else {
          const ChartPoint p =
              boundary_point(shape, Boundary::bottom, arrival.theta.turns());
          w = {p.chart, p.u, y_bottom_of(consts, p.chart)};
        }
        break;
      }
    }
    while (cfg.sample_dt > 0.0 && t >= next_sample) {
      on_sample(t, FoliatedPoint{fiber, chart_point_of(shape, w)});
      next_sample += cfg.sample_dt;
    }
  }

  if (steps_out) *steps_out = steps;
  if (slit_out) *slit_out = slit_crossings;
  return {fiber, chart_point_of(shape, w)};
}

}  // namespace

double halfplane_y(const PantsShape& shape, Chart c, double v) {
  const double len = cylinder_length(shape, c);
  require(std::isfinite(v) && v >= 0.0 && v <= len, Errc::invalid_argument,
          "v must lie in [0, L]");
  return std::exp(len - v);
}

double v_from_halfplane(const PantsShape& shape, Chart c, double y) {
  const double len = cylinder_length(shape, c);
  require(std::isfinite(y) && y >= 1.0 && y <= std::exp(len),
          Errc::invalid_argument, "y must lie in [1, e^L]");
  return std::clamp(len - std::log(y), 0.0, len);
}

StepResult step_in_pants(const PantsShape& shape, Chart chart, double u,
                         double y, double dt, double n1, double n2,
                         const std::function<double()>& next_uniform,
                         double cone_guard) {
  require(chart == Chart::cylinder1 || chart == Chart::cylinder2,
          Errc::invalid_argument, "stepping happens on the cylinder charts");
  require(std::isfinite(dt) && dt > 0.0 && dt <= 1e-2, Errc::invalid_argument,
          "dt must lie in (0, 1e-2]");
  require(std::isfinite(cone_guard) && cone_guard > 0.0,
          Errc::invalid_argument, "cone guard must be positive");
  const PantsConsts consts = make_consts(shape);
  require(std::isfinite(u), Errc::invalid_argument, "u must be finite");
  require(std::isfinite(y) && y >= 1.0 && y <= y_bottom_of(consts, chart),
          Errc::invalid_argument, "y must lie in [1, e^L]");
  return attempt_step(consts, chart, u, y, dt, n1, n2, next_uniform,
                      cone_guard);
}

ExitResult simulate_to_exit(const PantsShape& shape, const ChartPoint& start,
                            const DiffusionConfig& cfg) {
  validate_config(cfg);
  const PantsConsts consts = make_consts(shape);
  WalkerState w = walker_from_chart_point(shape, start);
  PhiloxRng rng(cfg.seed, kStreamWalk, cfg.path_index);
  const auto uniform = [&rng] { return rng.uniform01(); };

  ExitResult out;
  double t = 0.0;
  while (true) {
    require(++out.steps <= cfg.max_events, Errc::max_events_exceeded,
            "step budget exhausted before absorption");
    const auto [n1, n2] = rng.normal_pair();
    const StepResult res = attempt_step(consts, w.chart, w.u, w.y, cfg.dt, n1,
                                        n2, uniform, cfg.cone_guard);
    t += res.time_consumed;
    if (res.kind == StepResult::Kind::crossed_slit) {
      ++out.slit_crossings;
      w = {res.chart, res.u, res.y};
      continue;
    }
    if (res.kind == StepResult::Kind::interior) {
      w = {res.chart, res.u, res.y};
      continue;
    }
    const double v_exit = (res.boundary == Boundary::bottom)
                              ? 0.0
                              : cylinder_length(shape, res.chart);
    const BoundaryParam bp =
        boundary_param(shape, {res.chart, res.exit_u, v_exit});
    out.boundary = bp.boundary;
    out.theta = bp.theta;
    out.time = t;
    return out;
  }
}

bool holonomy_event_consistent(const HolonomyEvent& e) {
  switch (e.crossed) {
    case Boundary::bottom:
      return e.fiber_after == e.fiber_before.doubled() &&
             e.theta_arrival == e.theta_exit + e.fiber_before;
    case Boundary::top1:
    case Boundary::top2: {
      const CircleAngle image = e.fiber_after.doubled();
      const bool fiber_ok = image == e.fiber_before ||
                            image == e.fiber_before.antipode();
      return fiber_ok && e.theta_arrival == e.theta_exit - e.fiber_after;
    }
  }
  return false;
}

Trajectory simulate_path(const MetricFamily& family, const FoliatedPoint& start,
                         const DiffusionConfig& cfg) {
  Trajectory traj;
  traj.final_point = walk_core(
      family, start, cfg, &traj.steps, &traj.slit_crossings,
      [&traj](double t, const FoliatedPoint& p) {
        traj.samples.push_back({t, p});
      },
      [&traj](const HolonomyEvent& e) { traj.events.push_back(e); });
  return traj;
}

FoliatedPoint evolve_final(const MetricFamily& family,
                           const FoliatedPoint& start,
                           const DiffusionConfig& cfg) {
  std::size_t steps = 0;
  std::size_t slit = 0;
  return walk_core(
      family, start, cfg, &steps, &slit, [](double, const FoliatedPoint&) {},
      [](const HolonomyEvent&) {});
}

int configured_thread_count() {
  if (const char* env = std::getenv("HIRSCHLAB_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1) {
      return static_cast<int>(std::min<long>(parsed, 64));
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp<unsigned>(hw == 0 ? 1 : hw, 1u, 64u));
}

void parallel_for_paths(std::size_t n,
                        const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(configured_thread_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto body = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error) break;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace hirsch
