#include "tjdrag/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tjdrag/error.hpp"
#include "tjdrag/tridiag.hpp"

namespace tjdrag {

namespace {

void require_positive_tensions(const std::array<double, 3>& s) {
  for (std::size_t j = 0; j < 3; ++j) {
    if (!(s[j] > 0.0)) {
      std::ostringstream os;
      os << "tension of curve " << j << " is " << s[j];
      throw Error(ErrorKind::SigmaNonpositive, os.str());
    }
  }
}

// Dirichlet solve of (u_new - u)/dt = D u_new_xx on the interior nodes.
std::vector<double> implicit_interior(const std::vector<double>& u, const std::vector<double>& d,
                                      double left, double right, double r) {
  const std::size_t n = u.size();
  const std::size_t m = n - 2;
  std::vector<double> lo(m), di(m), up(m), rhs(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double a = r * d[k + 1];
    lo[k] = -a;
    di[k] = 1.0 + 2.0 * a;
    up[k] = -a;
    rhs[k] = u[k + 1];
  }
  rhs[0] += r * d[1] * left;
  rhs[m - 1] += r * d[m] * right;
  return solve_tridiagonal(lo, di, up, rhs);
}

Curve advance_curve(const Curve& c, double sigma, const Vec2& new_start, const Vec2& anchor,
                    Scheme scheme, double dt) {
  const std::size_t n = c.size();
  const double h = c.spacing();
  const double r = dt / (h * h);

  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = sigma / norm2(derivative(c, i));

  std::vector<Vec2> out(n);
  out[0] = new_start;
  out[n - 1] = anchor;

  if (scheme == Scheme::Explicit) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      out[i] = c[i] + r * d[i] * (c[i - 1] - 2.0 * c[i] + c[i + 1]);
    }
    return Curve(std::move(out));
  }

  std::vector<double> ux(n), uy(n);
  for (std::size_t i = 0; i < n; ++i) {
    ux[i] = c[i].x;
    uy[i] = c[i].y;
  }
  const std::vector<double> nx = implicit_interior(ux, d, new_start.x, anchor.x, r);
  const std::vector<double> ny = implicit_interior(uy, d, new_start.y, anchor.y, r);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = {nx[i - 1], ny[i - 1]};
  return Curve(std::move(out));
}

double snapshot_speed(const SimState& s, const FlowParams& p, const TensionModel& m) {
  return norm(junction_velocity(s.network, curve_tensions(m, s.theta), p.mu, p.delta_min));
}

}  // namespace

void validate(const FlowParams& p) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (!(std::isfinite(p.mu) && p.mu > 0.0)) fail("mu must be > 0");
  if (!(std::isfinite(p.nu) && p.nu >= 0.0)) fail("nu must be >= 0");
  if (p.n < 3) fail("n must be >= 3");
  if (!(std::isfinite(p.dt) && p.dt > 0.0)) fail("dt must be > 0");
  if (!(std::isfinite(p.t_end) && p.t_end >= 0.0)) fail("t_end must be >= 0");
  if (!(p.delta_min > 0.0)) fail("delta_min must be > 0");
  if (!(p.tau_junction >= 0.0)) fail("tau_junction must be >= 0");
  if (p.snapshot_every == 0) fail("snapshot_every must be >= 1");
  if (!(p.explicit_safety > 0.0 && p.explicit_safety <= 0.5)) fail("explicit_safety must lie in (0, 0.5]");
  if (!(p.kink_tol >= 0.0)) fail("kink_tol must be >= 0");
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::Degeneracy: return "Degeneracy";
    case EventKind::SelfIntersection: return "SelfIntersection";
    case EventKind::SigmaNonpositive: return "SigmaNonpositive";
    case EventKind::KinkHalt: return "KinkHalt";
  }
  return "Unknown";
}

std::vector<Vec2> special_flow_rhs(const Curve& c, double sigma, double delta_min) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::SigmaNonpositive, "special flow needs sigma > 0");
  require_regular(c, delta_min);
  std::vector<Vec2> out;
  out.reserve(c.size() - 2);
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    out.push_back((sigma / norm2(derivative(c, i))) * second_derivative(c, i));
  }
  return out;
}

Vec2 junction_velocity(const Network& net, const std::array<double, 3>& sigmas, double mu,
                       double delta_min) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
  Vec2 v{0.0, 0.0};
  for (std::size_t j = 0; j < 3; ++j) v += sigmas[j] * tangent_at_junction(net.curve(j), delta_min);
  return (1.0 / mu) * v;
}

OrientationState rotation_rhs(const SimState& s, const TensionModel& m, double nu,
                              double kink_tol) {
  if (nu == 0.0) return {0.0, 0.0, 0.0};
  std::array<double, 3> len{};
  for (std::size_t j = 0; j < 3; ++j) len[j] = length(s.network.curve(j));
  const auto& th = s.theta;
  OrientationState out{};
  for (std::size_t j = 0; j < 3; ++j) {
    const std::size_t prev = (j + 2) % 3;
    const std::size_t next = (j + 1) % 3;
    out[j] = nu * (m.sigma_prime(th[prev] - th[j], kink_tol) * len[j] -
                   m.sigma_prime(th[j] - th[next], kink_tol) * len[next]);
  }
  return out;
}

double explicit_dt_limit(const Network& net, const std::array<double, 3>& sigmas, double safety) {
  double limit = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < 3; ++j) {
    const Curve& c = net.curve(j);
    const double h = c.spacing();
    double vmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < c.size(); ++i) vmin = std::min(vmin, norm2(derivative(c, i)));
    limit = std::min(limit, safety * h * h * vmin / sigmas[j]);
  }
  return limit;
}

SimState step(const SimState& s, const FlowParams& p, const TensionModel& m, double dt) {
  const Network& net = s.network;
  const std::array<double, 3> sig = curve_tensions(m, s.theta);
  require_positive_tensions(sig);
  for (const Curve& c : net.curves()) require_regular(c, p.delta_min);

  const OrientationState dtheta = rotation_rhs(s, m, p.nu, p.kink_tol);

  OrientationState theta{};
  for (std::size_t j = 0; j < 3; ++j) theta[j] = s.theta[j] + dt * dtheta[j];

  if (p.freeze_curves) return {net, theta, s.time + dt};

  if (p.scheme == Scheme::Explicit) {
    const double limit = explicit_dt_limit(net, sig, p.explicit_safety);
    if (dt > limit) {
      std::ostringstream os;
      os << "explicit step " << dt << " exceeds stability limit " << limit;
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
  }

  const Vec2 v = junction_velocity(net, sig, p.mu, p.delta_min);
  const Vec2 j_new = net.junction() + dt * v;

  std::array<Curve, 3> curves = net.curves();
  for (std::size_t j = 0; j < 3; ++j) {
    curves[j] = advance_curve(net.curve(j), sig[j], j_new, net.anchors()[j], p.scheme, dt);
  }
  return {Network(std::move(curves), net.anchors(), p.tau_junction), theta, s.time + dt};
}

SimRecord run(const SimState& initial, const FlowParams& p, const TensionModel& m) {
  validate(p);
  for (const Curve& c : initial.network.curves()) require_regular(c, p.delta_min);

  SimRecord rec;
  bool seen_contact = false;

  auto halt = [&](EventKind kind, double t, const std::string& what) {
    rec.events.push_back({kind, t, what, {}});
    rec.halted = true;
  };

  // Records a snapshot; returns false when the run has to stop.
  auto observe = [&](const SimState& s) -> bool {
    TracePoint tp;
    tp.t = s.time;
    tp.theta = s.theta;
    const std::array<double, 3> sig = curve_tensions(m, s.theta);
    tp.energy = network_energy(s.network, sig);
    try {
      tp.junction_speed = snapshot_speed(s, p, m);
    } catch (const Error& e) {
      rec.snapshots.push_back(s);
      rec.trace.push_back(tp);
      halt(EventKind::Degeneracy, s.time, e.what());
      return false;
    }
    rec.snapshots.push_back(s);
    rec.trace.push_back(tp);

    if (p.detect_intersections) {
      auto contacts = detect_intersections(s.network, s.time);
      if (!contacts.empty() && !seen_contact) {
        seen_contact = true;
        std::ostringstream os;
        os << contacts.size() << " segment contacts";
        rec.events.push_back({EventKind::SelfIntersection, s.time, os.str(), std::move(contacts)});
        if (p.halt_on_intersection) {
          rec.halted = true;
          return false;
        }
      }
    }
    return true;
  };

  SimState cur = initial;
  if (!observe(cur)) return rec;

  const double ratio = p.t_end / p.dt;
  const auto nsteps = static_cast<std::size_t>(std::ceil(ratio - 1e-9));

  for (std::size_t k = 1; k <= nsteps; ++k) {
    const double t_next = k == nsteps ? p.t_end : initial.time + static_cast<double>(k) * p.dt;
    const double h = t_next - cur.time;
    for (double s : curve_tensions(m, cur.theta)) rec.max_sigma = std::max(rec.max_sigma, s);
    try {
      cur = step(cur, p, m, h);
    } catch (const Error& e) {
      EventKind kind;
      switch (e.kind()) {
        case ErrorKind::DegenerateParametrization: kind = EventKind::Degeneracy; break;
        case ErrorKind::SigmaNonpositive: kind = EventKind::SigmaNonpositive; break;
        case ErrorKind::KinkPoint: kind = EventKind::KinkHalt; break;
        default: throw;
      }
      halt(kind, cur.time, e.what());
      if (rec.snapshots.empty() || rec.snapshots.back().time != cur.time) {
        rec.snapshots.push_back(cur);
        rec.trace.push_back({cur.time, network_energy(cur.network, curve_tensions(m, cur.theta)),
                             0.0, cur.theta});
      }
      return rec;
    }
    cur.time = t_next;
    rec.steps = k;
    if (k % p.snapshot_every == 0 || k == nsteps) {
      if (!observe(cur)) return rec;
    }
  }
  return rec;
}

CircleTrace run_closed_circle(double r0, const FlowParams& p) {
  validate(p);
  if (!(r0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be > 0");
  if (!(r0 * r0 > 2.0 * p.t_end)) {
    throw Error(ErrorKind::InvalidArgument, "circle vanishes before t_end (needs R0^2 > 2 t_end)");
  }
  const std::size_t n = p.n;
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> ux(n), uy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) * h;
    ux[i] = r0 * std::cos(a);
    uy[i] = r0 * std::sin(a);
  }

  auto radius = [&]() {
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cx += ux[i];
      cy += uy[i];
    }
    cx /= static_cast<double>(n);
    cy /= static_cast<double>(n);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += std::hypot(ux[i] - cx, uy[i] - cy);
    return r / static_cast<double>(n);
  };

  CircleTrace out;
  out.samples.push_back({0.0, radius()});
  const double floor_r = 10.0 * h * r0;

  const auto nsteps = static_cast<std::size_t>(std::ceil(p.t_end / p.dt - 1e-9));
  std::vector<double> d(n), lo(n), di(n), up(n);
  double t = 0.0;
  for (std::size_t k = 1; k <= nsteps; ++k) {
    const double t_next = k == nsteps ? p.t_end : static_cast<double>(k) * p.dt;
    const double dt = t_next - t;
    const double r = dt / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t im = (i + n - 1) % n;
      const std::size_t ip = (i + 1) % n;
      const double dx = (ux[ip] - ux[im]) / (2.0 * h);
      const double dy = (uy[ip] - uy[im]) / (2.0 * h);
      const double speed2 = dx * dx + dy * dy;
      if (speed2 < p.delta_min * p.delta_min) {
        out.halted = true;
        return out;
      }
      d[i] = r / speed2;
    }
    if (p.scheme == Scheme::Explicit) {
      std::vector<double> nx(n), ny(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n;
        const std::size_t ip = (i + 1) % n;
        nx[i] = ux[i] + d[i] * (ux[im] - 2.0 * ux[i] + ux[ip]);
        ny[i] = uy[i] + d[i] * (uy[im] - 2.0 * uy[i] + uy[ip]);
      }
      ux.swap(nx);
      uy.swap(ny);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        lo[i] = -d[i];
        di[i] = 1.0 + 2.0 * d[i];
        up[i] = -d[i];
      }
      ux = solve_cyclic_tridiagonal(lo, di, up, ux);
      uy = solve_cyclic_tridiagonal(lo, di, up, uy);
    }
    t = t_next;
    if (k % p.snapshot_every == 0 || k == nsteps) {
      const double rad = radius();
      out.samples.push_back({t, rad});
      if (rad < floor_r) {
        out.halted = true;
        return out;
      }
    }
  }
  return out;
}

}  // namespace tjdrag
