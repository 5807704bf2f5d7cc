// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "exact_reference.hpp"
#include "support.hpp"
#include "tjdrag/compat.hpp"
#include "tjdrag/diagnostics.hpp"
#include "tjdrag/fixedpoint.hpp"
#include "tjdrag/flow.hpp"
#include "tjdrag/scenario.hpp"
#include "tjdrag/stationary.hpp"

using namespace tjdrag;
using namespace tjdrag::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome stationary_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [net, th] = stationary_configuration(65);
  const TensionModel q = TensionModel::quadratic(1);
  const double v0 = norm(junction_velocity(net, curve_tensions(q, th), 1.0));
  FlowParams p;
  p.mu = 1;
  p.nu = 1;
  p.n = 65;
  p.dt = 1e-4;
  p.t_end = 1;
  p.snapshot_every = 1000;
  const SimRecord rec = run({net, th, 0.0}, p, q);
  const SimState& last = rec.snapshots.back();
  double drift = 0, tdrift = 0;
  for (std::size_t j = 0; j < 3; ++j) {
    drift = std::max(drift, hausdorff_distance(last.network.curve(j), net.curve(j)));
    tdrift = std::max(tdrift, std::abs(last.theta[j] - th[j]));
  }
  const double secs = seconds_since(t0);
  const bool ok = !rec.halted && last.time == 1.0 && drift <= 1e-6 && tdrift <= 1e-8 && v0 <= 1e-12 && secs < 10;
  return {ok, fmt("hausdorff drift %.3g, theta drift %.3g, |v(0)| %.3g, %.2f s", drift, tdrift, v0, secs)};
}

Outcome circle_law() {
  const auto t0 = std::chrono::steady_clock::now();
  FlowParams p;
  p.n = 401;
  p.dt = 1e-5;
  p.t_end = 1;
  p.snapshot_every = 10000;
  const CircleTrace c = run_closed_circle(5.0, p);
  const double r = c.samples.back().radius;
  const double exact = std::sqrt(25.0 - 2.0);
  const double secs = seconds_since(t0);
  const bool ok = !c.halted && std::abs(r - exact) < 1e-3 && secs < 60;
  return {ok, fmt("R(1) = %.9f vs sqrt(23) = %.9f, error %.3g, %.2f s", r, exact, std::abs(r - exact), secs)};
}

struct RandomRuns {
  double worst_speed_margin = -INFINITY;  // max(speed - 3/mu)
  double worst_energy_rise = -INFINITY;   // max(E_k - E_{k-1} - 1e-8 (1 + |E_{k-1}|))
  int halted = 0;
};

const RandomRuns& random_runs() {
  static const RandomRuns runs = [] {
    RandomRuns r;
    for (int seed = 0; seed < 20; ++seed) {
      FlowParams p;
      p.mu = 0.25 * (1 + seed % 8);
      p.n = 65;
      p.dt = 1e-4;
      p.t_end = 0.05;
      p.snapshot_every = 5;
      const SimRecord rec = run(random_network(65, seed), p, TensionModel::constant(1));
      r.halted += rec.halted;
      for (std::size_t k = 0; k < rec.trace.size(); ++k) {
        r.worst_speed_margin = std::max(r.worst_speed_margin, rec.trace[k].junction_speed - 3 / p.mu);
        if (k > 0) {
          const double prev = rec.trace[k - 1].energy;
          r.worst_energy_rise = std::max(r.worst_energy_rise, rec.trace[k].energy - prev - 1e-8 * (1 + std::abs(prev)));
        }
      }
    }
    return r;
  }();
  return runs;
}

Outcome drag_speed_bound() {
  const RandomRuns& r = random_runs();
  return {r.halted == 0 && r.worst_speed_margin <= 1e-9,
          fmt("20 runs, max(speed - 3/mu) = %.4g, halted %d", r.worst_speed_margin, r.halted)};
}

Outcome energy_dissipation() {
  const RandomRuns& r = random_runs();
  return {r.halted == 0 && r.worst_energy_rise <= 0,
          fmt("20 runs, max(E_k - E_{k-1} - tol) = %.4g", r.worst_energy_rise)};
}

Outcome hessian_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (double c : {0.1, 1.0, 10.0, 100.0}) {
    const FEvaluation f = F_value_grad_hessian(0, 0, 2 * kPi / 3, 4 * kPi / 3, TensionModel::quadratic(c));
    auto formula = eigenvalues_formula(c);
    std::sort(formula.begin(), formula.end());
    const Eigen::Vector4d num = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(f.hessian).eigenvalues();
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(formula[k] - num[k]) / std::max(1.0, std::abs(num[k])));
  }
  double grad = 0;
  for (const auto& m : {TensionModel::quadratic(1), TensionModel::read_shockley(1, 1 + std::log(kPi), 1e-3)}) {
    grad = std::max(grad, F_value_grad_hessian(0, 0, 2 * kPi / 3, 4 * kPi / 3, m).grad.cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && grad <= 1e-12 && secs < 1,
          fmt("max relative eigenvalue gap %.3g, |grad F| %.3g, %.4f s", worst, grad, secs)};
}

Outcome stability_threshold() {
  const auto t = quadratic_threshold();
  if (!t) return {false, "no sign change found"};
  const auto at = eigenvalues_formula(*t);
  const double min_at = *std::min_element(at.begin(), at.end());
  const auto above = eigenvalues_formula(*t * 1.01);
  const double min_above = *std::min_element(above.begin(), above.end());
  return {std::abs(min_at) <= 1e-8 && min_above > 0,
          fmt("c_bar = %.10f, min lambda(c_bar) = %.3g, min lambda(1.01 c_bar) = %.4g", *t, min_at, min_above)};
}

Outcome read_shockley_instability() {
  const ReducedJacobian j = reduced_ode_jacobian(TensionModel::read_shockley(1, 1 + std::log(kPi), 1e-3), 1, 1);
  return {j.max_real_part > 1e-8, fmt("max quotient Re(lambda) = %.6g", j.max_real_part)};
}

Outcome self_intersection() {
  std::string detail;
  bool any = false;
  bool oracle_ok = true;
  for (double mu : {1e2, 1e3, 1e4}) {
    const IntersectionScenario sc = build_intersection_scenario(mu, 257);
    FlowParams p;
    p.mu = mu;
    p.n = 257;
    p.dt = 1e-5;
    p.t_end = 10 / mu;
    p.snapshot_every = 5;
    p.halt_on_intersection = true;
    const SimRecord rec = run(sc.state, p, TensionModel::constant(1));
    const auto hit = std::find_if(rec.events.begin(), rec.events.end(),
                                  [](const SimEvent& e) { return e.kind == EventKind::SelfIntersection; });
    if (hit == rec.events.end()) {
      detail += fmt("mu=%g none; ", mu);
      continue;
    }
    any = true;
    const Network& frame = rec.snapshots.back().network;
    const bool agree = detected(frame) == reference_contacts(frame) && !detected(frame).empty();
    oracle_ok = oracle_ok && agree;
    detail += fmt("mu=%g t=%.3g (%zu contacts, oracle %s); ", mu, hit->time, hit->contacts.size(),
                  agree ? "agrees" : "DISAGREES");
  }
  if (detail.size() >= 2) detail.resize(detail.size() - 2);
  return {any && oracle_ok, detail};
}

Outcome fixed_point_consistency() {
  const std::size_t n = 65;
  const SimState s = compatible_network(n, 7, TensionModel::constant(1), {0, 0, 0}, {1.0, true});
  const double dt = 1e-3;
  auto solve = [&](double T) {
    return iterate_to_fixed_point(make_linearized_problem(s.network, s.theta, TensionModel::constant(1), 1, 0, T, dt),
                                  60, 1e-12);
  };
  const ContractionReport r = solve(0.05);
  const ContractionReport half = solve(0.025);

  FlowParams p;
  p.mu = 1;
  p.dt = dt;
  p.t_end = 0.05;
  p.snapshot_every = 1000;
  const SimRecord rec = run(s, p, TensionModel::constant(1));
  double gap = 0;
  for (std::size_t j = 0; j < 3; ++j) {
    gap = std::max(gap, max_point_distance(r.final_iterate.curves.back()[j], rec.snapshots.back().network.curve(j)));
  }
  const double dx = 1.0 / static_cast<double>(n - 1);
  const double bound = 5 * (dx * dx + dt);
  const bool ok = r.converged && r.below_one && !rec.halted && gap <= bound && half.max_factor <= r.max_factor;
  return {ok, fmt("T=0.05: %zu iterations, max factor %.3f (below 1/2: %s); T=0.025: %.3f; |fixed point - run| = %.3g "
                  "<= %.3g",
                  r.distances.size(), r.max_factor, r.below_half ? "yes" : "no", half.max_factor, gap, bound)};
}

Outcome herring_limit() {
  const std::size_t n = 33;
  const double dx = 1.0 / static_cast<double>(n - 1);
  double dev[2];
  int i = 0;
  for (double mu : {1e-2, 1e-3}) {
    FlowParams p;
    p.mu = mu;
    p.n = n;
    // The junction moves by forward Euler at speed up to 3/mu.
    p.dt = std::min(1e-4, 0.2 * mu * dx);
    p.t_end = 0.5;
    p.snapshot_every = 100000;
    const SimRecord rec = run(perturbed_stationary(n, 0.1, 1), p, TensionModel::constant(1));
    if (rec.halted) return {false, fmt("mu=%g halted", mu)};
    double d = 0;
    for (double a : junction_angles(rec.snapshots.back().network)) d = std::max(d, std::abs(a * 180 / kPi - 120));
    dev[i++] = d;
  }
  return {dev[0] < 2 && dev[1] < 2 && dev[1] < dev[0],
          fmt("max |angle - 120 deg|: %.4g (mu=1e-2), %.4g (mu=1e-3)", dev[0], dev[1])};
}

Outcome compat_equivalence() {
  const TensionModel one = TensionModel::constant(1);
  const OrientationState th{0, 0, 0};
  int passed = 0;
  double worst = 0;
  std::string failures;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    try {
      const SimState s = compatible_network(801, seed, one, th, {1.0, false});
      const Network out = reparametrize_to_compatible(s.network, th, one, 1.0, 1e-8);
      const CompatReport r = check_parametric(out, th, one, 1.0, 1e-8);
      worst = std::max(worst, r.max_parametric());
      if (r.parametric->ok) {
        ++passed;
      } else {
        failures += fmt(" seed %d residual %.3g", static_cast<int>(seed), r.max_parametric());
      }
    } catch (const std::exception& e) {
      failures += fmt(" seed %d: %s", static_cast<int>(seed), e.what());
    }
  }
  return {passed == 10, fmt("%d/10 pass at 1e-8, worst residual %.3g%s", passed, worst, failures.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"stationary exactness", stationary_exactness},
      {"circle law", circle_law},
      {"drag speed bound", drag_speed_bound},
      {"energy dissipation", energy_dissipation},
      {"hessian/eigenvalue agreement", hessian_agreement},
      {"quadratic stability threshold", stability_threshold},
      {"read-shockley reduced-model instability", read_shockley_instability},
      {"self-intersection demo", self_intersection},
      {"fixed-point consistency", fixed_point_consistency},
      {"herring limit", herring_limit},
      {"compatibility equivalence", compat_equivalence},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
