#include "tjdrag/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tjdrag/error.hpp"

namespace tjdrag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTheta2 = 2.0 * kPi / 3.0;
constexpr double kTheta3 = 4.0 * kPi / 3.0;

Eigen::Vector2d to_eigen(const Vec2& v) { return {v.x, v.y}; }

}  // namespace

std::array<Vec2, 3> stationary_anchors() {
  const double h = std::sqrt(3.0) / 2.0;
  return {Vec2{h, -0.5}, Vec2{0.0, 1.0}, Vec2{-h, -0.5}};
}

std::pair<Network, OrientationState> stationary_configuration(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "curves need at least 3 samples");
  const auto anchors = stationary_anchors();
  auto segment = [&](std::size_t j) {
    std::vector<Vec2> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n - 1);
      pts[i] = x * anchors[j];
    }
    pts[n - 1] = anchors[j];
    return Curve(std::move(pts));
  };
  std::array<Curve, 3> curves = {segment(0), segment(1), segment(2)};
  return {Network(std::move(curves), anchors), OrientationState{0.0, kTheta2, kTheta3}};
}

double g_value(double x, double y, const TensionModel& m) {
  return m.sigma(y) + m.sigma(-x) + m.sigma(x - y);
}

std::array<double, 2> grad_g(double x, double y, const TensionModel& m, double kink_tol) {
  const double sxy = m.sigma_prime(x - y, kink_tol);
  return {-m.sigma_prime(-x, kink_tol) + sxy, m.sigma_prime(y, kink_tol) - sxy};
}

double F_value(double a, double b, double r, double s, const TensionModel& m) {
  const auto x = stationary_anchors();
  const Vec2 p{a, b};
  return m.sigma(s) * norm(p - x[0]) + m.sigma(-r) * norm(p - x[1]) +
         m.sigma(r - s) * norm(p - x[2]);
}

FEvaluation F_value_grad_hessian(double a, double b, double r, double s, const TensionModel& m,
                                 double kink_tol) {
  const auto x = stationary_anchors();
  const Vec2 p{a, b};

  // Per-term argument of sigma, its derivative with respect to (r, s).
  const std::array<double, 3> arg = {s, -r, r - s};
  const std::array<std::array<double, 2>, 3> darg = {{{0.0, 1.0}, {-1.0, 0.0}, {1.0, -1.0}}};

  FEvaluation out;
  for (std::size_t k = 0; k < 3; ++k) {
    const Vec2 diff = p - x[k];
    const double d = norm(diff);
    if (d == 0.0) throw Error(ErrorKind::AnchorSingularity, "junction coincides with an anchor");
    const Eigen::Vector2d e = to_eigen(diff / d);
    const double sg = m.sigma(arg[k]);
    const double sp = m.sigma_prime(arg[k], kink_tol);
    const double spp = m.sigma_second(arg[k], kink_tol);
    const Eigen::Vector2d dth(darg[k][0], darg[k][1]);

    out.value += sg * d;
    out.grad.head<2>() += sg * e;
    out.grad.tail<2>() += sp * d * dth;

    out.hessian.topLeftCorner<2, 2>() += (sg / d) * (Eigen::Matrix2d::Identity() - e * e.transpose());
    out.hessian.topRightCorner<2, 2>() += sp * e * dth.transpose();
    out.hessian.bottomRightCorner<2, 2>() += spp * d * dth * dth.transpose();
  }
  out.hessian.bottomLeftCorner<2, 2>() = out.hessian.topRightCorner<2, 2>().transpose();
  return out;
}

std::array<double, 4> eigenvalues_formula(double c) {
  const double pi2 = kPi * kPi;
  const double pi4 = pi2 * pi2;
  const double r1 = std::sqrt(81.0 * c * c + 72.0 * c * (pi2 - 3.0) + 16.0 * (pi4 + 18.0 * pi2 + 9.0));
  const double r2 = std::sqrt(81.0 * c * c + 72.0 * c * (pi2 - 9.0) + 16.0 * (pi4 + 54.0 * pi2 + 81.0));
  const double b1 = 9.0 * c + 12.0 + 4.0 * pi2;
  const double b2 = 9.0 * c + 36.0 + 4.0 * pi2;
  return {(b1 - r1) / 12.0, (b1 + r1) / 12.0, (b2 - r2) / 12.0, (b2 + r2) / 12.0};
}

std::optional<double> quadratic_threshold(double c_max, double tol) {
  auto min_lambda = [](double c) {
    const auto l = eigenvalues_formula(c);
    return *std::min_element(l.begin(), l.end());
  };
  double lo = 1e-12;
  double hi = c_max;
  if (min_lambda(lo) > 0.0 || min_lambda(hi) <= 0.0) return std::nullopt;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (min_lambda(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::StrictLocalMin: return "strict_local_min";
    case Stability::Saddle: return "saddle";
    case Stability::Degenerate: return "degenerate";
  }
  return "unknown";
}

StationaryReport classify_stability(const TensionModel& m) {
  StationaryReport rep;
  rep.anchors = stationary_anchors();
  rep.junction = {0.0, 0.0};
  rep.theta = {0.0, kTheta2, kTheta3};
  rep.grad_g = grad_g(kTheta2, kTheta3, m);

  const FEvaluation f = F_value_grad_hessian(0.0, 0.0, kTheta2, kTheta3, m);
  rep.grad_F = f.grad;
  rep.hessian_F = f.hessian;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(f.hessian, Eigen::EigenvaluesOnly);
  for (int i = 0; i < 4; ++i) rep.eigenvalues_numeric[static_cast<std::size_t>(i)] = es.eigenvalues()[i];

  const double lmin = rep.eigenvalues_numeric.front();
  if (lmin > kZeroEigenTol) {
    rep.classification = Stability::StrictLocalMin;
  } else if (lmin < -kZeroEigenTol) {
    rep.classification = Stability::Saddle;
  } else {
    rep.classification = Stability::Degenerate;
  }

  if (m.kind() == TensionModel::Kind::Quadratic) {
    rep.eigenvalues_formula = eigenvalues_formula(m.c());
    rep.c_threshold = quadratic_threshold();
  }
  return rep;
}

ReducedState reduced_vector_field(const ReducedState& x, const TensionModel& m, double mu,
                                  double nu, double kink_tol) {
  const auto anchors = stationary_anchors();
  const Vec2 p{x[0], x[1]};
  const OrientationState th{x[2], x[3], x[4]};
  const std::array<double, 3> sig = curve_tensions(m, th);

  Vec2 v{0.0, 0.0};
  std::array<double, 3> len{};
  for (std::size_t j = 0; j < 3; ++j) {
    const Vec2 d = anchors[j] - p;
    len[j] = norm(d);
    if (len[j] == 0.0) throw Error(ErrorKind::AnchorSingularity, "junction coincides with an anchor");
    v += sig[j] * (d / len[j]);
  }
  v = (1.0 / mu) * v;

  ReducedState out;
  out[0] = v.x;
  out[1] = v.y;
  for (std::size_t j = 0; j < 3; ++j) {
    const std::size_t prev = (j + 2) % 3;
    const std::size_t next = (j + 1) % 3;
    out[static_cast<Eigen::Index>(2 + j)] =
        nu * (m.sigma_prime(th[prev] - th[j], kink_tol) * len[j] -
              m.sigma_prime(th[j] - th[next], kink_tol) * len[next]);
  }
  return out;
}

ReducedJacobian reduced_ode_jacobian(const TensionModel& m, double mu, double nu, double fd_step) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
  if (!(nu >= 0.0)) throw Error(ErrorKind::InvalidArgument, "nu must be >= 0");
  ReducedState x0;
  x0 << 0.0, 0.0, 0.0, kTheta2, kTheta3;

  ReducedJacobian out;
  for (int k = 0; k < 5; ++k) {
    ReducedState xp = x0, xm = x0;
    xp[k] += fd_step;
    xm[k] -= fd_step;
    out.raw.col(k) =
        (reduced_vector_field(xp, m, mu, nu) - reduced_vector_field(xm, m, mu, nu)) / (2.0 * fd_step);
  }

  Eigen::Matrix<double, 4, 5> c = Eigen::Matrix<double, 4, 5>::Zero();
  c(0, 0) = 1.0;
  c(1, 1) = 1.0;
  c(2, 2) = -1.0;
  c(2, 3) = 1.0;
  c(3, 2) = -1.0;
  c(3, 4) = 1.0;
  Eigen::Matrix<double, 5, 4> lift = Eigen::Matrix<double, 5, 4>::Zero();
  lift(0, 0) = 1.0;
  lift(1, 1) = 1.0;
  lift(3, 2) = 1.0;
  lift(4, 3) = 1.0;
  out.quotient = c * out.raw * lift;

  out.raw_eigenvalues = Eigen::EigenSolver<Eigen::Matrix<double, 5, 5>>(out.raw, false).eigenvalues();
  out.quotient_eigenvalues = Eigen::EigenSolver<Eigen::Matrix4d>(out.quotient, false).eigenvalues();
  out.max_real_part = out.quotient_eigenvalues.real().maxCoeff();
  return out;
}

}  // namespace tjdrag
