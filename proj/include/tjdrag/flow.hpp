#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tjdrag/diagnostics.hpp"
#include "tjdrag/geometry.hpp"
#include "tjdrag/tension.hpp"

namespace tjdrag {

enum class Scheme { SemiImplicit, Explicit };

struct FlowParams {
  double mu = 1.0;   // junction inverse mobility
  double nu = 0.0;   // rotation mobility
  std::size_t n = 65;  // samples per curve for generated scenarios
  double dt = 1e-4;
  double t_end = 1.0;
  double delta_min = kDefaultDeltaMin;
  double tau_junction = kDefaultJunctionTol;
  Scheme scheme = Scheme::SemiImplicit;
  std::size_t snapshot_every = 100;
  double explicit_safety = 0.4;
  double kink_tol = kDefaultKinkTol;
  bool detect_intersections = true;
  bool halt_on_intersection = false;
  // Keeps the curves fixed and only integrates the orientations.
  bool freeze_curves = false;
};

/// Throws InvalidArgument on the first violated parameter bound.
void validate(const FlowParams& p);

struct SimState {
  Network network;
  OrientationState theta{};
  double time = 0.0;
};

enum class EventKind { Degeneracy, SelfIntersection, SigmaNonpositive, KinkHalt };

std::string to_string(EventKind k);

struct SimEvent {
  EventKind kind = EventKind::Degeneracy;
  double time = 0.0;
  std::string detail;
  std::vector<IntersectionEvent> contacts;
};

/// Per-snapshot scalars.
struct TracePoint {
  double t = 0.0;
  double energy = 0.0;
  double junction_speed = 0.0;
  OrientationState theta{};
};

struct SimRecord {
  std::vector<SimState> snapshots;
  std::vector<TracePoint> trace;  // aligned with snapshots
  std::vector<SimEvent> events;
  std::size_t steps = 0;
  bool halted = false;
  double max_sigma = 0.0;  // largest tension seen at any step
};

/// sigma * p_xx / |p_x|^2 at the interior samples 1..n-2.
std::vector<Vec2> special_flow_rhs(const Curve& c, double sigma,
                                   double delta_min = kDefaultDeltaMin);

/// (1/mu) * sum_j sigma_j tau_j over the outgoing junction tangents.
Vec2 junction_velocity(const Network& net, const std::array<double, 3>& sigmas, double mu,
                       double delta_min = kDefaultDeltaMin);

/// d theta_j / dt = nu [sigma'(theta_{j-1} - theta_j) L_j - sigma'(theta_j - theta_{j+1}) L_{j+1}]
/// with cyclic indices and polyline lengths L.
OrientationState rotation_rhs(const SimState& s, const TensionModel& m, double nu,
                              double kink_tol = kDefaultKinkTol);

/// Largest explicit step allowed by safety * h^2 * min|p_x|^2 / max sigma.
double explicit_dt_limit(const Network& net, const std::array<double, 3>& sigmas, double safety);

/// One step. The junction moves by explicit Euler, each interior component
/// then solves u_t = (sigma/|p_x|^2) u_xx with Dirichlet data (new junction,
/// anchor) and coefficients lagged at the old state, and the orientations
/// advance by explicit Euler. Every sub-update reads the old state.
///
/// Throws DegenerateParametrization, SigmaNonpositive or KinkPoint when the
/// old state is outside the admissible set.
SimState step(const SimState& s, const FlowParams& p, const TensionModel& m, double dt);
inline SimState step(const SimState& s, const FlowParams& p, const TensionModel& m) {
  return step(s, p, m, p.dt);
}

/// Steps to t_end, snapshotting every `snapshot_every` steps and at the
/// final time. Degeneracy, nonpositive tension and kinks end the run with an
/// event. Intersections are recorded the first time they are seen and end
/// the run only if `halt_on_intersection`. An initial state that is already
/// degenerate is rejected by throwing.
SimRecord run(const SimState& initial, const FlowParams& p, const TensionModel& m);

struct CircleSample {
  double t = 0.0;
  double radius = 0.0;
};

struct CircleTrace {
  std::vector<CircleSample> samples;
  bool halted = false;
};

/// Special flow with sigma = 1 on a closed curve of p.n samples (spacing
/// 1/n, periodic stencils). The radius is the mean distance to the
/// centroid. Halts with `halted` once it drops below 10 * (1/n) * R0.
CircleTrace run_closed_circle(double r0, const FlowParams& p);

}  // namespace tjdrag
