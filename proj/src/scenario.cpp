#include "tjdrag/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "tjdrag/compat.hpp"
#include "tjdrag/diagnostics.hpp"
#include "tjdrag/error.hpp"
#include "tjdrag/stationary.hpp"

namespace tjdrag {

namespace {

constexpr double kPi = std::numbers::pi;

// Uniform double in [lo, hi) from the top 53 bits, so streams do not depend
// on the standard library's distribution implementation.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Vec2 unit(Vec2 v) { return v / norm(v); }

Vec2 polar(double r, double deg) {
  const double a = deg * kPi / 180.0;
  return {r * std::cos(a), r * std::sin(a)};
}

// Knot from a heading, a parameter speed and a curvature (left-turning > 0).
HermiteKnot knot(double x, Vec2 p, Vec2 heading, double speed, double kappa) {
  const Vec2 t = unit(heading);
  return {x, p, speed * t, kappa * speed * speed * perp(t)};
}

Vec2 hermite(const HermiteKnot& k0, const HermiteKnot& k1, double x) {
  const double h = k1.x - k0.x;
  const double s = (x - k0.x) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
  const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double h3 = 0.5 * s3 - s4 + 0.5 * s5;
  const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  const double h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  return h0 * k0.p + (h1 * h) * k0.d1 + (h2 * h * h) * k0.d2 + (h3 * h * h) * k1.d2 +
         (h4 * h) * k1.d1 + h5 * k1.p;
}

std::vector<HermiteKnot> continuation_knots(int j, double mu, double x_loop) {
  const double r = kIntersectionRadius;
  switch (j) {
    case 1:
      return {knot(0.7, {1.9, 1.0}, {1.0, 0.0}, 8.0, -0.8),
              knot(1.0, polar(r, -20.0), {0.5, -1.0}, 8.0, 0.0)};
    case 2:
      return {knot(0.7, {1.5, 2.0}, {1.0, 0.7}, 6.0, -0.5),
              knot(1.0, polar(r, 40.0), {1.0, 0.4}, 8.0, 0.0)};
    default: {
      const double q = 0.5 / (mu * mu);
      return {knot(0.6, {0.05, 2.55}, {-1.0, 0.0}, 17.0, 1.4),
              knot(0.67, {-0.75, 1.6}, {-0.34, -0.94}, 17.0, 1.2),
              knot(0.74, {-0.55, 0.6}, {0.34, -0.94}, 15.0, 1.0),
              knot(x_loop, {q, q}, {1.0, -1.0}, 13.0, 1.0),
              knot(0.88, {0.5, -1.5}, {0.2, -1.0}, 20.0, -0.3),
              knot(1.0, polar(r, -75.0), {0.24, -1.0}, 21.0, 0.0)};
    }
  }
}

Curve sample_intersection_curve(int j, double mu, std::size_t n,
                                const std::vector<HermiteKnot>& cont) {
  const double s1 = 1.0 / std::sqrt(2.0) + 1.0 / std::sqrt(5.0) + 1.0 / std::sqrt(10.0);
  const double s2 = 1.0 / std::sqrt(2.0) + 2.0 / std::sqrt(5.0) + 3.0 / std::sqrt(10.0);
  const double jj = static_cast<double>(j);
  const double a = (1.0 + jj * jj) / (2.0 * mu) * s1;
  const double b = (1.0 + jj * jj) / (2.0 * mu) * s2;
  const double c0 = 1.0 / (mu * mu);

  std::vector<HermiteKnot> knots;
  knots.push_back({0.5, {c0 + 0.5 + 0.25 * a, c0 + 0.5 * jj + 0.25 * b}, {1.0 + a, jj + b},
                   {2.0 * a, 2.0 * b}});
  knots.insert(knots.end(), cont.begin(), cont.end());

  std::vector<Vec2> pts(n);
  std::size_t piece = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    if (x < 0.5) {
      pts[i] = {c0 + x + a * x * x, c0 + jj * x + b * x * x};
      continue;
    }
    while (piece + 2 < knots.size() && x > knots[piece + 1].x) ++piece;
    const HermiteKnot& k1 = knots[piece + 1];
    pts[i] = x == k1.x ? k1.p : hermite(knots[piece], k1, x);
  }
  pts.back() = knots.back().p;
  return Curve(std::move(pts));
}

}  // namespace

IntersectionScenario build_intersection_scenario(double mu, std::size_t n) {
  if (!(mu >= 10.0)) throw Error(ErrorKind::InvalidArgument, "intersection scenario needs mu >= 10");
  if (n < 17) throw Error(ErrorKind::ConstructionFailed, "need at least 17 samples per curve");

  const double m1 = static_cast<double>(n - 1);
  const double x_loop = std::round(0.8 * m1) / m1;
  if (!(x_loop > 0.74 && x_loop < 0.88)) {
    throw Error(ErrorKind::ConstructionFailed, "grid too coarse to place the loop knot");
  }
  std::array<std::vector<HermiteKnot>, 3> knots;
  for (int j = 1; j <= 3; ++j) knots[static_cast<std::size_t>(j - 1)] = continuation_knots(j, mu, x_loop);

  IntersectionScenario sc{
      {Network::from_curves({sample_intersection_curve(1, mu, n, knots[0]),
                             sample_intersection_curve(2, mu, n, knots[1]),
                             sample_intersection_curve(3, mu, n, knots[2])}),
       {0.0, 0.0, 0.0},
       0.0},
      mu,
      kIntersectionRadius,
      kIntersectionDelta,
      x_loop,
      knots};

  for (std::size_t j = 0; j < 3; ++j) {
    const double v = min_speed(sc.state.network.curve(j));
    if (v < sc.delta) {
      std::ostringstream os;
      os << "curve " << j << " has speed " << v << " below the floor " << sc.delta;
      throw Error(ErrorKind::ConstructionFailed, os.str());
    }
  }
  const auto contacts = detect_intersections(sc.state.network);
  if (!contacts.empty()) {
    throw Error(ErrorKind::ConstructionFailed, "initial network already has contacts");
  }
  return sc;
}

SimState perturbed_stationary(std::size_t n, double eps, std::uint64_t seed) {
  if (!(eps >= 0.0 && eps < 0.25)) throw Error(ErrorKind::InvalidArgument, "eps must lie in [0, 0.25)");
  auto [base, theta] = stationary_configuration(n);
  std::mt19937_64 rng(seed);
  const double r = eps * std::sqrt(uniform(rng, 0.0, 1.0));
  const double a = uniform(rng, 0.0, 2.0 * kPi);
  const Vec2 junction{r * std::cos(a), r * std::sin(a)};

  auto bent = [&](std::size_t j) {
    const Vec2 anchor = base.anchors()[j];
    const Vec2 nu = perp(unit(anchor - junction));
    const double amp = uniform(rng, -eps, eps);
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n - 1);
      pts[i] = (1.0 - x) * junction + x * anchor + (amp * std::sin(kPi * x)) * nu;
    }
    pts.front() = junction;
    pts.back() = anchor;
    return Curve(std::move(pts));
  };
  std::array<Curve, 3> curves = {bent(0), bent(1), bent(2)};
  return {Network(std::move(curves), base.anchors()), theta, 0.0};
}

SimState random_network(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "curves need at least 3 samples");
  std::mt19937_64 rng(seed);
  for (;;) {
    const double r = 0.2 * std::sqrt(uniform(rng, 0.0, 1.0));
    const double a = uniform(rng, 0.0, 2.0 * kPi);
    const Vec2 junction{r * std::cos(a), r * std::sin(a)};

    std::array<Vec2, 3> anchors{};
    std::array<std::array<double, 2>, 3> amp{};
    for (std::size_t j = 0; j < 3; ++j) {
      const double deg = -30.0 + 120.0 * static_cast<double>(j) + uniform(rng, -17.0, 17.0);
      anchors[j] = polar(uniform(rng, 0.8, 1.2), deg);
      amp[j] = {uniform(rng, -0.1, 0.1), uniform(rng, -0.1, 0.1)};
    }
    auto curve = [&](std::size_t j) {
      const Vec2 nu = perp(unit(anchors[j] - junction));
      std::vector<Vec2> pts(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        const double bump = amp[j][0] * std::sin(kPi * x) + amp[j][1] * std::sin(2.0 * kPi * x);
        pts[i] = (1.0 - x) * junction + x * anchors[j] + bump * nu;
      }
      pts.front() = junction;
      pts.back() = anchors[j];
      return Curve(std::move(pts));
    };
    Network net({curve(0), curve(1), curve(2)}, anchors);
    if (detect_intersections(net).empty()) {
      return {std::move(net), {0.0, 2.0 * kPi / 3.0, 4.0 * kPi / 3.0}, 0.0};
    }
  }
}

SimState compatible_network(std::size_t n, std::uint64_t seed, const TensionModel& m,
                            const OrientationState& theta, const CompatibleOptions& opt) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "curves need at least 3 samples");
  if (!(opt.mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
  std::mt19937_64 rng(seed);
  const std::array<double, 3> sig = curve_tensions(m, theta);
  for (double s : sig) {
    if (!(s > 0.0)) throw Error(ErrorKind::SigmaNonpositive, "compatible network needs sigma > 0");
  }

  std::array<double, 3> psi0{}, len{}, shape{};
  for (std::size_t j = 0; j < 3; ++j) {
    psi0[j] = 2.0 * kPi * static_cast<double>(j) / 3.0 + uniform(rng, -0.25, 0.25);
    len[j] = uniform(rng, 0.7, 1.0);
    shape[j] = uniform(rng, -0.5, 0.5);
  }
  Vec2 v{0.0, 0.0};
  for (std::size_t j = 0; j < 3; ++j) v += sig[j] * Vec2{std::cos(psi0[j]), std::sin(psi0[j])};
  v = (1.0 / opt.mu) * v;

  using boost::math::quadrature::gauss;
  auto curve = [&](std::size_t j) {
    const Vec2 tau{std::cos(psi0[j]), std::sin(psi0[j])};
    const double k0 = dot(v, perp(tau)) / sig[j];
    const double L = len[j];
    const double c = shape[j];
    // kappa(s) = k0 (1 - s/L)(1 + c s/L), integrated once for the tangent angle.
    auto psi = [&](double s) {
      return psi0[j] + k0 * (s + (c - 1.0) * s * s / (2.0 * L) - c * s * s * s / (3.0 * L * L));
    };

    Quintic phi;
    if (opt.parametric) phi.a = L * dot(v, tau) / sig[j];
    if (phi.min_prime(10 * n) <= 0.0) {
      throw Error(ErrorKind::NonMonotoneReparametrization, "compatible parametrization folds");
    }

    std::vector<Vec2> pts(n);
    pts[0] = {0.0, 0.0};
    double s_prev = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n - 1);
      const double s = i + 1 == n ? L : L * phi(x);
      const double dx = gauss<double, 10>::integrate([&](double t) { return std::cos(psi(t)); }, s_prev, s);
      const double dy = gauss<double, 10>::integrate([&](double t) { return std::sin(psi(t)); }, s_prev, s);
      pts[i] = pts[i - 1] + Vec2{dx, dy};
      s_prev = s;
    }
    return Curve(std::move(pts));
  };
  return {Network::from_curves({curve(0), curve(1), curve(2)}), theta, 0.0};
}

}  // namespace tjdrag
