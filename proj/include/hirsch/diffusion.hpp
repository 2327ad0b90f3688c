#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hirsch/foliation.hpp"
#include "hirsch/rng.hpp"

namespace hirsch {

// Leafwise Brownian motion with generator equal to the full
// Laplace-Beltrami operator. Each cylinder is stepped in half-plane
// coordinates (u, y) with y = e^{L - v} in [1, e^L], where the metric is
// (du^2 + dy^2) / y^2 and the Euler scheme has no drift:
// u' = u + sqrt(2 dt) y N1, y' = y + sqrt(2 dt) y N2.
struct DiffusionConfig {
  double dt = 1e-3;            // must lie in (0, 1e-2]
  double t_end = 5.0;
  std::uint64_t seed = 0;
  std::uint32_t path_index = 0;
  double cone_guard = 1e-6;    // chart-coordinate exclusion radius
  std::size_t max_events = 1000000;
  double sample_dt = 0.0;      // > 0 records interior samples at this period
};

double halfplane_y(const PantsShape& shape, Chart c, double v);
double v_from_halfplane(const PantsShape& shape, Chart c, double y);

// One Euler step attempt with injected noise, shared by all walkers.
//
// The proposal segment is checked in order: rejection when it passes
// within cone_guard of a cone image (the step retries with the same
// normals at halved dt, up to 40 halvings; a walker still blocked after
// the last level is placed on the circle of twice the guard radius
// around the nearest tip, the closest distance from which halving can
// always clear a fresh proposal); definite
// events (boundary straddles and slit-line crossings below the slit tip)
// resolved at the earliest crossing fraction; then Brownian-bridge
// corrections for boundary touches the endpoints missed, with the hit
// placed at the within-step fraction d0 / (d0 + d1). Bridge uniforms are
// requested from next_uniform only when the hit probability clears 2^-53,
// so the bulk path stays free of transcendentals. A step beginning exactly
// on a boundary may exit there at fraction zero when it moves outward;
// inward motion skips that boundary's bridge test.
//
// Walkers sitting exactly on the slit line carry their side in the stored
// coordinate: u = 0.0 means the positive-u side, u = 1.0 the negative-u
// side. Slit transport lands on the opposite bank of the other cylinder at
// equal v, so y rescales by e^{L' - L}; arrivals closer than twice
// cone_guard above the arrival tip are lifted to that height.
struct StepResult {
  enum class Kind { interior, hit_boundary, crossed_slit };
  Kind kind = Kind::interior;
  Chart chart = Chart::cylinder1;
  double u = 0.0;
  double y = 1.0;
  Boundary boundary = Boundary::top1;  // valid when kind == hit_boundary
  double exit_u = 0.0;                 // chart u of the boundary hit
  double time_consumed = 0.0;
  int halvings = 0;
};

StepResult step_in_pants(const PantsShape& shape, Chart chart, double u,
                         double y, double dt, double n1, double n2,
                         const std::function<double()>& next_uniform,
                         double cone_guard);

// Walk inside one pants until a boundary is reached. The slit stays
// transparent; top1, top2 and bottom absorb. Throws MAX_EVENTS_EXCEEDED if
// the step budget runs out first.
struct ExitResult {
  Boundary boundary = Boundary::top1;
  double theta = 0.0;
  double time = 0.0;
  std::size_t steps = 0;
  std::size_t slit_crossings = 0;
};

ExitResult simulate_to_exit(const PantsShape& shape, const ChartPoint& start,
                            const DiffusionConfig& cfg);

// Record of one passage between fibers. Crossing the bottom circle doubles
// the fiber; crossing a top circle moves to the preimage selected by the
// label, so doubling the arrival fiber recovers the departure fiber or its
// antipode.
struct HolonomyEvent {
  double time = 0.0;
  CircleAngle fiber_before;
  CircleAngle fiber_after;
  Boundary crossed = Boundary::bottom;
  CircleAngle theta_exit;
  CircleAngle theta_arrival;
};

bool holonomy_event_consistent(const HolonomyEvent& e);

struct TimedPoint {
  double time = 0.0;
  FoliatedPoint point;
};

struct Trajectory {
  std::vector<TimedPoint> samples;
  std::vector<HolonomyEvent> events;
  std::size_t steps = 0;
  std::size_t slit_crossings = 0;
  FoliatedPoint final_point;
};

// Walk across the foliated space for t_end, crossing fibers through the
// holonomy maps. Boundary coordinates travel through exact tick
// arithmetic, so immediate recrossings return to bit-identical states.
Trajectory simulate_path(const MetricFamily& family, const FoliatedPoint& start,
                         const DiffusionConfig& cfg);

// Same walk without sample or event storage; returns the state at t_end.
FoliatedPoint evolve_final(const MetricFamily& family,
                           const FoliatedPoint& start,
                           const DiffusionConfig& cfg);

// Thread count for path-parallel drivers: HIRSCHLAB_THREADS when set,
// otherwise the hardware concurrency, clamped to [1, 64]. Path results are
// indexed by path and generated from per-path counter streams, so they do
// not depend on the schedule.
int configured_thread_count();

// Runs fn(path) for every path in [0, n) across the configured threads.
void parallel_for_paths(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hirsch
