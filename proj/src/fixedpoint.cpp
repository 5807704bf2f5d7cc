#include "tjdrag/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tjdrag/error.hpp"
#include "tjdrag/tridiag.hpp"

namespace tjdrag {

namespace {

void require_grid(const LinearizedProblem& prob, const SpaceTimeField& f) {
  const std::size_t levels = prob.steps() + 1;
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InputGridMismatch, msg); };
  if (f.t.size() != levels || f.curves.size() != levels || f.theta.size() != levels) {
    std::ostringstream os;
    os << "expected " << levels << " time levels, got " << f.t.size();
    fail(os.str());
  }
  for (std::size_t k = 0; k < levels; ++k) {
    if (std::abs(f.t[k] - static_cast<double>(k) * prob.dt) > 1e-12 * (1.0 + prob.horizon)) {
      fail("time levels do not match the problem grid");
    }
    for (const Curve& c : f.curves[k]) {
      if (c.size() != prob.n()) fail("sample count does not match the problem grid");
    }
  }
}

double component(const Vec2& p, int c) { return c == 0 ? p.x : p.y; }

}  // namespace

std::vector<double> implicit_heat_step(const std::vector<double>& u, const std::vector<double>& d,
                                      const std::vector<double>& f, double left, double right,
                                      double dt) {
  const std::size_t n = u.size();
  if (n < 3 || d.size() != n || f.size() != n) {
    throw Error(ErrorKind::InputGridMismatch, "heat step needs n >= 3 and matching sizes");
  }
  const double h = 1.0 / static_cast<double>(n - 1);
  const std::size_t m = n - 2;
  const double r = dt / (h * h);
  std::vector<double> lo(m), di(m), up(m), rhs(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double a = r * d[k + 1];
    lo[k] = -a;
    di[k] = 1.0 + 2.0 * a;
    up[k] = -a;
    rhs[k] = u[k + 1] + dt * f[k + 1];
  }
  rhs[0] += r * d[1] * left;
  rhs[m - 1] += r * d[m] * right;
  const std::vector<double> inner = solve_tridiagonal(lo, di, up, rhs);

  std::vector<double> out(n);
  out[0] = left;
  out[n - 1] = right;
  std::copy(inner.begin(), inner.end(), out.begin() + 1);
  return out;
}

std::size_t LinearizedProblem::steps() const noexcept {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

LinearizedProblem make_linearized_problem(const Network& initial, const OrientationState& theta0,
                                          const TensionModel& m, double mu, double nu,
                                          double horizon, double dt, double alpha) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
  if (!(nu >= 0.0)) throw Error(ErrorKind::InvalidArgument, "nu must be >= 0");
  if (!(dt > 0.0 && horizon > 0.0)) throw Error(ErrorKind::InvalidArgument, "horizon and dt must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  const double k = horizon / dt;
  if (std::abs(k - std::round(k)) > 1e-9 * k) {
    throw Error(ErrorKind::InvalidArgument, "horizon must be a multiple of dt");
  }

  LinearizedProblem prob{initial, theta0, m, mu, nu, horizon, dt, alpha, 0.0, kDefaultKinkTol, {}};
  const std::array<double, 3> sig = curve_tensions(m, theta0);
  prob.delta = std::min({min_speed(initial.curve(0)), min_speed(initial.curve(1)),
                         min_speed(initial.curve(2))});
  for (std::size_t j = 0; j < 3; ++j) {
    const Curve& c = initial.curve(j);
    auto& d = prob.diffusion[j];
    d.assign(c.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      d[i] = sig[j] / norm2(derivative(c, i));
      if (!(std::isfinite(d[i]) && d[i] > 0.0)) {
        std::ostringstream os;
        os << "D_" << j << " is " << d[i] << " at node " << i;
        throw Error(ErrorKind::DegenerateFrozenCoefficient, os.str());
      }
    }
  }
  return prob;
}

SpaceTimeField constant_extension(const LinearizedProblem& prob) {
  SpaceTimeField f;
  const std::size_t levels = prob.steps() + 1;
  f.t.reserve(levels);
  for (std::size_t k = 0; k < levels; ++k) f.t.push_back(static_cast<double>(k) * prob.dt);
  f.curves.assign(levels, prob.initial.curves());
  f.theta.assign(levels, prob.theta0);
  return f;
}

SpaceTimeField solve_linearized(const LinearizedProblem& prob, const SpaceTimeField& input) {
  require_grid(prob, input);
  const std::size_t levels = input.levels();
  const std::size_t n = prob.n();
  const double dt = prob.dt;

  // Junction velocity, rotation rate and forcing from the input at each level.
  std::vector<Vec2> vel(levels);
  std::vector<OrientationState> rate(levels);
  std::vector<std::array<std::vector<Vec2>, 3>> force(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    const std::array<double, 3> sig = curve_tensions(prob.model, input.theta[k]);
    Vec2 v{0.0, 0.0};
    for (std::size_t j = 0; j < 3; ++j) {
      const Curve& c = input.curves[k][j];
      if (min_speed(c) < 0.5 * prob.delta) {
        throw Error(ErrorKind::DegenerateParametrization, "input speed falls below delta/2");
      }
      v += sig[j] * tangent_at_junction(c, 0.5 * prob.delta);
      auto& fj = force[k][j];
      fj.assign(n, Vec2{0.0, 0.0});
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double coef = sig[j] / norm2(derivative(c, i)) - prob.diffusion[j][i];
        fj[i] = coef * second_derivative(c, i);
      }
    }
    vel[k] = (1.0 / prob.mu) * v;
    const SimState s{Network(input.curves[k], prob.initial.anchors()), input.theta[k], input.t[k]};
    rate[k] = rotation_rhs(s, prob.model, prob.nu, prob.kink_tol);
  }

  SpaceTimeField out;
  out.t = input.t;
  out.theta.resize(levels);
  out.curves.reserve(levels);
  out.curves.push_back(prob.initial.curves());
  out.theta[0] = prob.theta0;

  Vec2 junction = prob.initial.junction();
  for (std::size_t k = 1; k < levels; ++k) {
    junction += (0.5 * dt) * (vel[k - 1] + vel[k]);
    for (std::size_t j = 0; j < 3; ++j) {
      out.theta[k][j] = out.theta[k - 1][j] + 0.5 * dt * (rate[k - 1][j] + rate[k][j]);
    }

    const std::array<Curve, 3>& prev = out.curves.back();
    std::array<Curve, 3> next = prev;
    for (std::size_t j = 0; j < 3; ++j) {
      const Vec2 anchor = prob.initial.anchors()[j];
      std::array<std::vector<double>, 2> comp;
      for (int c = 0; c < 2; ++c) {
        std::vector<double> u(n), f(n);
        for (std::size_t i = 0; i < n; ++i) {
          u[i] = component(prev[j][i], c);
          f[i] = component(force[k][j][i], c);
        }
        comp[c] = implicit_heat_step(u, prob.diffusion[j], f, component(junction, c),
                                     component(anchor, c), dt);
      }
      std::vector<Vec2> pts(n);
      for (std::size_t i = 0; i < n; ++i) pts[i] = {comp[0][i], comp[1][i]};
      pts.front() = junction;
      pts.back() = anchor;
      next[j] = Curve(std::move(pts));
    }
    out.curves.push_back(std::move(next));
  }
  return out;
}

double field_distance(const SpaceTimeField& a, const SpaceTimeField& b, double alpha) {
  if (a.levels() != b.levels()) throw Error(ErrorKind::InputGridMismatch, "level count differs");
  const std::size_t levels = a.levels();
  const double beta = 0.5 * alpha;
  std::vector<double> w(levels);

  double total = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    const std::size_t n = a.curves[0][j].size();
    if (b.curves[0][j].size() != n) throw Error(ErrorKind::InputGridMismatch, "sample count differs");
    for (int c = 0; c < 2; ++c) {
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < levels; ++k) {
          w[k] = component(a.curves[k][j][i], c) - component(b.curves[k][j][i], c);
        }
        const HolderEstimate e = holder_seminorm(a.t, w, beta);
        worst = std::max(worst, e.sup_norm + e.seminorm);
      }
      total += worst;
    }
  }
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < levels; ++k) w[k] = a.theta[k][j] - b.theta[k][j];
    const HolderEstimate e = holder_seminorm(a.t, w, beta);
    total += e.sup_norm + e.seminorm;
  }
  return total;
}

ContractionReport iterate_to_fixed_point(const LinearizedProblem& prob, std::size_t max_iter,
                                         double tol) {
  if (max_iter == 0) throw Error(ErrorKind::InvalidArgument, "max_iter must be >= 1");
  ContractionReport rep;
  rep.horizon = prob.horizon;
  rep.dt = prob.dt;
  rep.alpha = prob.alpha;
  rep.tol = tol;

  SpaceTimeField cur = constant_extension(prob);
  for (std::size_t it = 0; it < max_iter; ++it) {
    SpaceTimeField next = solve_linearized(prob, cur);
    const double d = field_distance(next, cur, prob.alpha);
    if (!rep.distances.empty() && rep.distances.back() > 0.0) {
      rep.factors.push_back(d / rep.distances.back());
    }
    rep.distances.push_back(d);
    cur = std::move(next);
    if (d < tol) {
      rep.converged = true;
      break;
    }
  }

  rep.below_half = true;
  rep.below_one = true;
  for (std::size_t i = 0; i < rep.factors.size(); ++i) {
    const double f = rep.factors[i];
    rep.max_factor = std::max(rep.max_factor, f);
    if (f >= 0.5) rep.below_half = false;
    if (f >= 1.0) {
      rep.below_one = false;
      // factors[i] compares iterations i+2 and i+1
      if (i >= 1) rep.non_contraction = true;
    }
  }
  rep.final_iterate = std::move(cur);
  return rep;
}

double pde_residual(const LinearizedProblem& prob, const SpaceTimeField& field) {
  require_grid(prob, field);
  double worst = 0.0;
  for (std::size_t k = 1; k < field.levels(); ++k) {
    const std::array<double, 3> sig = curve_tensions(prob.model, field.theta[k]);
    for (std::size_t j = 0; j < 3; ++j) {
      const Curve& c = field.curves[k][j];
      const Curve& p = field.curves[k - 1][j];
      for (std::size_t i = 1; i + 1 < c.size(); ++i) {
        const Vec2 r = (1.0 / prob.dt) * (c[i] - p[i]) -
                       (sig[j] / norm2(derivative(c, i))) * second_derivative(c, i);
        worst = std::max(worst, norm(r));
      }
    }
  }
  return worst;
}

}  // namespace tjdrag
