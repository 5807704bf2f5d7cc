#include "tjdrag/tension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tjdrag/error.hpp"

namespace tjdrag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCornerSlopeTol = 1e-12;

void require_finite(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFiniteInput, "angle is not finite");
}

struct Reduced {
  double m;      // canonical misorientation
  double dm_dx;  // +-1, derivative of the reduction
};

Reduced reduce(double dtheta) {
  require_finite(dtheta);
  const double sign = dtheta < 0.0 ? -1.0 : 1.0;
  const double r = std::fmod(std::abs(dtheta), kTwoPi);
  if (r > kPi) return {kTwoPi - r, -sign};
  return {r, sign};
}

}  // namespace

double canonical_misorientation(double dtheta) { return reduce(dtheta).m; }

TensionModel TensionModel::constant(double value) {
  if (!(std::isfinite(value) && value >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "constant tension must be finite and >= 0");
  }
  return TensionModel(Kind::Constant, value, 0.0, 0.0);
}

TensionModel TensionModel::quadratic(double c) {
  if (!(std::isfinite(c) && c > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "quadratic tension needs c > 0");
  }
  return TensionModel(Kind::Quadratic, c, 0.0, 0.0);
}

TensionModel TensionModel::read_shockley(double a, double b, double theta_min) {
  if (!(std::isfinite(a) && a > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Read-Shockley needs A > 0");
  }
  if (!std::isfinite(b)) throw Error(ErrorKind::InvalidArgument, "Read-Shockley B not finite");
  if (!(theta_min > 0.0 && theta_min < kPi)) {
    throw Error(ErrorKind::InvalidArgument, "Read-Shockley clamp must lie in (0, pi)");
  }
  TensionModel m(Kind::ReadShockley, a, b, theta_min);
  // The profile is concave on [theta_min, pi]; positivity at both ends
  // gives positivity everywhere (the linear continuation ends at A*theta_min).
  if (!(m.profile(theta_min) > 0.0 && m.profile(kPi) > 0.0)) {
    std::ostringstream os;
    os << "Read-Shockley profile not positive on [theta_min, pi]: sigma(pi) = " << m.profile(kPi);
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  return m;
}

double TensionModel::profile(double m) const {
  switch (kind_) {
    case Kind::Constant: return p0_;
    case Kind::Quadratic: return m * m + p0_;
    case Kind::ReadShockley:
      if (m >= theta_min_) return p0_ * m * (p1_ - std::log(m));
      return profile(theta_min_) + profile_prime(theta_min_) * (m - theta_min_);
  }
  return 0.0;
}

double TensionModel::profile_prime(double m) const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Quadratic: return 2.0 * m;
    case Kind::ReadShockley:
      return p0_ * (p1_ - std::log(std::max(m, theta_min_)) - 1.0);
  }
  return 0.0;
}

double TensionModel::profile_second(double m) const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Quadratic: return 2.0;
    case Kind::ReadShockley: return m >= theta_min_ ? -p0_ / m : 0.0;
  }
  return 0.0;
}

bool TensionModel::has_kink_at_zero() const {
  return std::abs(profile_prime(0.0)) > kCornerSlopeTol;
}

bool TensionModel::has_kink_at_pi() const {
  return std::abs(profile_prime(kPi)) > kCornerSlopeTol;
}

double TensionModel::sigma(double dtheta) const { return profile(reduce(dtheta).m); }

double TensionModel::sigma_prime(double dtheta, double kink_tol) const {
  const Reduced r = reduce(dtheta);
  if (kind_ == Kind::Constant) return 0.0;
  if ((r.m < kink_tol && has_kink_at_zero()) || (r.m > kPi - kink_tol && has_kink_at_pi())) {
    std::ostringstream os;
    os << "sigma' undefined at misorientation " << r.m << " (dtheta = " << dtheta << ")";
    throw Error(ErrorKind::KinkPoint, os.str());
  }
  return profile_prime(r.m) * r.dm_dx;
}

double TensionModel::sigma_second(double dtheta, double kink_tol) const {
  const Reduced r = reduce(dtheta);
  if (kind_ == Kind::Constant) return 0.0;
  if ((r.m < kink_tol && has_kink_at_zero()) || (r.m > kPi - kink_tol && has_kink_at_pi())) {
    throw Error(ErrorKind::KinkPoint, "sigma'' undefined at a corner of the extension");
  }
  return profile_second(r.m);
}

double TensionModel::sigma_prime_sup() const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Quadratic: return 2.0 * kPi;
    case Kind::ReadShockley:
      // profile' is monotone on [theta_min, pi] and constant below.
      return std::max(std::abs(profile_prime(theta_min_)), std::abs(profile_prime(kPi)));
  }
  return 0.0;
}

double TensionModel::sigma_prime_lipschitz() const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Quadratic: return 2.0;
    case Kind::ReadShockley: return p0_ / theta_min_;
  }
  return 0.0;
}

std::string TensionModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Constant: os << "constant(value=" << p0_ << ")"; break;
    case Kind::Quadratic: os << "quadratic(c=" << p0_ << ")"; break;
    case Kind::ReadShockley:
      os << "read_shockley(A=" << p0_ << ", B=" << p1_ << ", theta_min=" << theta_min_ << ")";
      break;
  }
  return os.str();
}

std::array<double, 3> curve_tensions(const TensionModel& m, const OrientationState& theta) {
  return {m.sigma(theta[2] - theta[0]), m.sigma(theta[0] - theta[1]),
          m.sigma(theta[1] - theta[2])};
}

TriangleCheck triangle_ok(const TensionModel& m, const OrientationState& theta) {
  std::array<std::array<double, 3>, 3> s{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s[i][j] = m.sigma(theta[i] - theta[j]);

  TriangleCheck out;
  out.margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        if (i == j || j == k || i == k) continue;
        out.margin = std::min(out.margin, s[i][j] + s[j][k] - s[i][k]);
      }
  out.ok = out.margin >= 0.0;
  return out;
}

}  // namespace tjdrag
