#include "tjdrag/compat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tjdrag/error.hpp"

namespace tjdrag {

namespace {

int effective_order(const Curve& c, int order) { return c.size() >= 6 ? order : 2; }

struct JunctionData {
  std::array<double, 3> sigma{};
  std::array<EndJet, 3> jet{};
  Vec2 v;  // drag velocity
};

JunctionData junction_data(const Network& net, const OrientationState& theta,
                           const TensionModel& m, double mu, int order, double delta_min) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
  JunctionData d;
  d.sigma = curve_tensions(m, theta);
  Vec2 sum{0.0, 0.0};
  for (std::size_t j = 0; j < 3; ++j) {
    const Curve& c = net.curve(j);
    require_regular(c, delta_min);
    d.jet[j] = end_derivatives(c, End::Start, effective_order(c, order));
    const double speed = norm(d.jet[j].d1);
    if (speed < delta_min) {
      throw Error(ErrorKind::DegenerateParametrization, "vanishing tangent at the junction");
    }
    sum += d.sigma[j] * (d.jet[j].d1 / speed);
  }
  d.v = (1.0 / mu) * sum;
  return d;
}

}  // namespace

double CompatReport::max_parametric() const {
  if (!parametric) return 0.0;
  double r = parametric->junction_mismatch;
  for (std::size_t j = 0; j < 3; ++j) {
    r = std::max({r, parametric->junction_x[j], parametric->junction_y[j], parametric->anchor[j]});
  }
  return r;
}

double CompatReport::max_geometric() const {
  if (!geometric) return 0.0;
  double r = 0.0;
  for (std::size_t j = 0; j < 3; ++j) r = std::max({r, geometric->junction[j], geometric->anchor[j]});
  return r;
}

CompatReport check_parametric(const Network& net, const OrientationState& theta,
                              const TensionModel& m, double mu, double tol, int stencil_order,
                              double delta_min) {
  const JunctionData d = junction_data(net, theta, m, mu, stencil_order, delta_min);
  ParametricResiduals r;
  for (std::size_t j = 0; j < 3; ++j) {
    const Vec2 lhs = (d.sigma[j] / norm2(d.jet[j].d1)) * d.jet[j].d2;
    r.junction_x[j] = std::abs(lhs.x - d.v.x);
    r.junction_y[j] = std::abs(lhs.y - d.v.y);
    const Curve& c = net.curve(j);
    r.anchor[j] = norm(end_derivatives(c, End::Finish, effective_order(c, stencil_order)).d2);
    for (std::size_t k = 0; k < 3; ++k) {
      r.junction_mismatch = std::max(r.junction_mismatch, norm(c.front() - net.curve(k).front()));
    }
  }
  CompatReport rep;
  rep.tol = tol;
  rep.stencil_order = stencil_order;
  rep.parametric = r;
  rep.parametric->ok = rep.max_parametric() <= tol;
  return rep;
}

CompatReport check_geometric(const Network& net, const OrientationState& theta,
                             const TensionModel& m, double mu, double tol, int stencil_order,
                             double delta_min) {
  const JunctionData d = junction_data(net, theta, m, mu, stencil_order, delta_min);
  GeometricResiduals r;
  for (std::size_t j = 0; j < 3; ++j) {
    const EndJet& e = d.jet[j];
    const Vec2 nu = perp(e.d1 / norm(e.d1));
    const double kappa = dot(curvature_from_derivatives(e.d1, e.d2), nu);
    r.junction[j] = std::abs(d.sigma[j] * kappa - dot(d.v, nu));

    const Curve& c = net.curve(j);
    const EndJet f = end_derivatives(c, End::Finish, effective_order(c, stencil_order));
    if (norm(f.d1) < delta_min) {
      throw Error(ErrorKind::DegenerateParametrization, "vanishing tangent at an anchor");
    }
    r.anchor[j] = norm(curvature_from_derivatives(f.d1, f.d2));
  }
  CompatReport rep;
  rep.tol = tol;
  rep.stencil_order = stencil_order;
  rep.geometric = r;
  rep.geometric->ok = rep.max_geometric() <= tol;
  return rep;
}

double Quintic::operator()(double x) const {
  const double y = 1.0 - x;
  return x + 0.5 * a * x * x * y * y * y + 0.5 * b * x * x * x * y * y;
}

double Quintic::prime(double x) const {
  const double y = 1.0 - x;
  // d/dx [x^2 y^3] = 2x y^3 - 3x^2 y^2,  d/dx [x^3 y^2] = 3x^2 y^2 - 2x^3 y
  return 1.0 + 0.5 * a * (2.0 * x * y * y * y - 3.0 * x * x * y * y) +
         0.5 * b * (3.0 * x * x * y * y - 2.0 * x * x * x * y);
}

double Quintic::second(double x) const {
  const double y = 1.0 - x;
  // d2/dx2 [x^2 y^3] = 2y^3 - 12x y^2 + 6x^2 y,  d2/dx2 [x^3 y^2] = 6x y^2 - 12x^2 y + 2x^3
  return 0.5 * a * (2.0 * y * y * y - 12.0 * x * y * y + 6.0 * x * x * y) +
         0.5 * b * (6.0 * x * y * y - 12.0 * x * x * y + 2.0 * x * x * x);
}

double Quintic::min_prime(std::size_t samples) const {
  samples = std::max<std::size_t>(samples, 2);
  double lo = prime(0.0);
  for (std::size_t i = 1; i < samples; ++i) {
    lo = std::min(lo, prime(static_cast<double>(i) / static_cast<double>(samples - 1)));
  }
  return lo;
}

std::array<Quintic, 3> compatible_reparametrizations(const Network& net,
                                                     const OrientationState& theta,
                                                     const TensionModel& m, double mu,
                                                     int stencil_order) {
  const JunctionData d = junction_data(net, theta, m, mu, stencil_order, kDefaultDeltaMin);
  std::array<Quintic, 3> out;
  for (std::size_t j = 0; j < 3; ++j) {
    const EndJet& s = d.jet[j];
    const double speed = norm(s.d1);
    const Vec2 tau = s.d1 / speed;
    out[j].a = speed * (dot(d.v, tau) / d.sigma[j] - dot(s.d2, s.d1) / (speed * speed * speed));

    const Curve& c = net.curve(j);
    const EndJet f = end_derivatives(c, End::Finish, effective_order(c, stencil_order));
    out[j].b = -dot(f.d2, f.d1) / norm2(f.d1);
  }
  return out;
}

Vec2 interpolate(const Curve& c, double x) {
  constexpr std::size_t kPoints = 8;
  const std::size_t n = c.size();
  const double h = c.spacing();
  const double u = std::clamp(x, 0.0, 1.0) / h;  // fractional sample index
  const std::size_t width = std::min(kPoints, n);

  const auto centre = static_cast<long>(std::floor(u)) - static_cast<long>(width / 2 - 1);
  const long first = std::clamp(centre, 0L, static_cast<long>(n - width));

  Vec2 acc{0.0, 0.0};
  for (std::size_t k = 0; k < width; ++k) {
    const double uk = static_cast<double>(first) + static_cast<double>(k);
    if (u == uk) return c[static_cast<std::size_t>(first) + k];
    double w = 1.0;
    for (std::size_t l = 0; l < width; ++l) {
      if (l == k) continue;
      const double ul = static_cast<double>(first) + static_cast<double>(l);
      w *= (u - ul) / (uk - ul);
    }
    acc += w * c[static_cast<std::size_t>(first) + k];
  }
  return acc;
}

Curve reparametrize(const Curve& c, const Quintic& phi) {
  const std::size_t n = c.size();
  std::vector<Vec2> pts(n);
  pts.front() = c.front();
  pts.back() = c.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    pts[i] = interpolate(c, phi(x));
  }
  return Curve(std::move(pts));
}

Network reparametrize_to_compatible(const Network& net, const OrientationState& theta,
                                    const TensionModel& m, double mu, double tol_geo,
                                    int stencil_order) {
  const CompatReport geo = check_geometric(net, theta, m, mu, tol_geo, stencil_order);
  if (!geo.geometric->ok) {
    std::ostringstream os;
    os << "geometric residual " << geo.max_geometric() << " exceeds " << tol_geo;
    throw Error(ErrorKind::GeometricCompatibilityRequired, os.str());
  }
  const std::array<Quintic, 3> phi = compatible_reparametrizations(net, theta, m, mu, stencil_order);
  std::array<Curve, 3> curves = net.curves();
  for (std::size_t j = 0; j < 3; ++j) {
    const double lo = phi[j].min_prime(10 * net.curve(j).size());
    if (lo <= 0.0) {
      std::ostringstream os;
      os << "curve " << j << ": phi' reaches " << lo << " (phi''(0) = " << phi[j].a
         << ", phi''(1) = " << phi[j].b << ")";
      throw Error(ErrorKind::NonMonotoneReparametrization, os.str());
    }
    curves[j] = reparametrize(net.curve(j), phi[j]);
  }
  return Network(std::move(curves), net.anchors());
}

}  // namespace tjdrag
