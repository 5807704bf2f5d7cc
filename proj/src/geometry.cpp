#include "tjdrag/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tjdrag/error.hpp"

namespace tjdrag {

namespace {

// Forward one-sided stencils, applied as sum_k c[k] * p[k] starting at the end.
constexpr std::array<double, 3> kD1Order2 = {-1.5, 2.0, -0.5};
constexpr std::array<double, 4> kD2Order2 = {2.0, -5.0, 4.0, -1.0};
constexpr std::array<double, 5> kD1Order4 = {-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25};
constexpr std::array<double, 6> kD2Order4 = {15.0 / 4.0, -77.0 / 6.0, 107.0 / 6.0,
                                             -13.0,      61.0 / 12.0, -5.0 / 6.0};

template <std::size_t N>
Vec2 apply_stencil(const Curve& c, End end, const std::array<double, N>& w) {
  Vec2 acc;
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < N; ++k) {
    const Vec2& p = end == End::Start ? c[k] : c[n - 1 - k];
    acc += w[k] * p;
  }
  return acc;
}

}  // namespace

Curve::Curve(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 3) {
    throw Error(ErrorKind::InvalidArgument,
                "curve needs at least 3 samples, got " + std::to_string(points_.size()));
  }
  for (const Vec2& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::NonFiniteInput, "curve sample is not finite");
    }
  }
}

EndJet end_derivatives(const Curve& c, End end, int order) {
  const double h = c.spacing();
  // Going backwards from x = 1 flips the sign of odd derivatives.
  const double s = end == End::Start ? 1.0 : -1.0;
  if (order == 4) {
    if (c.size() < 6) {
      throw Error(ErrorKind::InvalidArgument, "fourth-order end stencils need n >= 6");
    }
    return {s * apply_stencil(c, end, kD1Order4) / h,
            apply_stencil(c, end, kD2Order4) / (h * h)};
  }
  if (order != 2) throw Error(ErrorKind::InvalidArgument, "stencil order must be 2 or 4");
  const Vec2 d1 = s * apply_stencil(c, end, kD1Order2) / h;
  if (c.size() == 3) {
    return {d1, (c[0] - 2.0 * c[1] + c[2]) / (h * h)};
  }
  return {d1, apply_stencil(c, end, kD2Order2) / (h * h)};
}

Vec2 derivative(const Curve& c, std::size_t i) {
  const std::size_t n = c.size();
  if (i >= n) throw Error(ErrorKind::IndexOutOfRange, "sample index " + std::to_string(i));
  if (i == 0) return end_derivatives(c, End::Start).d1;
  if (i == n - 1) return end_derivatives(c, End::Finish).d1;
  return (c[i + 1] - c[i - 1]) * (0.5 / c.spacing());
}

Vec2 second_derivative(const Curve& c, std::size_t i) {
  const std::size_t n = c.size();
  if (i >= n) throw Error(ErrorKind::IndexOutOfRange, "sample index " + std::to_string(i));
  if (i == 0) return end_derivatives(c, End::Start).d2;
  if (i == n - 1) return end_derivatives(c, End::Finish).d2;
  const double h = c.spacing();
  return (c[i + 1] - 2.0 * c[i] + c[i - 1]) / (h * h);
}

double min_speed(const Curve& c) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) m = std::min(m, norm(derivative(c, i)));
  return m;
}

void require_regular(const Curve& c, double delta_min) {
  const double m = min_speed(c);
  if (!(m >= delta_min)) {
    throw Error(ErrorKind::DegenerateParametrization,
                "min |p_x| = " + std::to_string(m) + " below floor " + std::to_string(delta_min));
  }
}

Vec2 tangent_at_junction(const Curve& c, double delta_min) {
  const Vec2 px = end_derivatives(c, End::Start).d1;
  const double speed = norm(px);
  if (!(speed >= delta_min)) {
    throw Error(ErrorKind::DegenerateParametrization,
                "|p_x(0)| = " + std::to_string(speed) + " below floor");
  }
  return px / speed;
}

Vec2 curvature_from_derivatives(const Vec2& px, const Vec2& pxx) {
  const double s2 = norm2(px);
  return pxx / s2 - px * (dot(px, pxx) / (s2 * s2));
}

Vec2 curvature_vector(const Curve& c, std::size_t i, double delta_min) {
  if (i == 0 || i + 1 >= c.size()) {
    throw Error(ErrorKind::IndexOutOfRange,
                "curvature_vector needs an interior index, got " + std::to_string(i));
  }
  const Vec2 px = derivative(c, i);
  if (!(norm(px) >= delta_min)) {
    throw Error(ErrorKind::DegenerateParametrization, "|p_x| below floor at interior node");
  }
  return curvature_from_derivatives(px, second_derivative(c, i));
}

double length(const Curve& c) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) total += norm(c[i + 1] - c[i]);
  return total;
}

namespace {

double directed_hausdorff(const Curve& a, const Curve& b) {
  double worst = 0.0;
  for (const Vec2& p : a.points()) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& q : b.points()) best = std::min(best, norm2(p - q));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

}  // namespace

double hausdorff_distance(const Curve& a, const Curve& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double max_distance_to_polyline(const Curve& a, const Curve& b) {
  double worst = 0.0;
  for (const Vec2& p : a.points()) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      best = std::min(best, point_segment_distance(p, b[k], b[k + 1]));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

HolderEstimate holder_seminorm(std::span<const double> t, std::span<const double> v,
                               double beta) {
  if (t.size() != v.size()) {
    throw Error(ErrorKind::InvalidArgument, "holder_seminorm: time and value sizes differ");
  }
  if (t.size() < 2) throw Error(ErrorKind::EmptyInput, "holder_seminorm needs >= 2 samples");
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "Holder exponent must lie in (0, 1]");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "holder_seminorm: times must increase strictly");
    }
  }

  std::vector<std::size_t> idx;
  const std::size_t m = t.size();
  if (m > kHolderMaxSamples) {
    idx.reserve(kHolderMaxSamples);
    for (std::size_t k = 0; k < kHolderMaxSamples; ++k) {
      idx.push_back(static_cast<std::size_t>(
          std::llround(static_cast<double>(k) * static_cast<double>(m - 1) /
                       static_cast<double>(kHolderMaxSamples - 1))));
    }
  } else {
    idx.resize(m);
    for (std::size_t k = 0; k < m; ++k) idx[k] = k;
  }

  HolderEstimate est;
  est.exponent = beta;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const std::size_t i = idx[a];
    est.sup_norm = std::max(est.sup_norm, std::abs(v[i]));
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const std::size_t j = idx[b];
      const double q = std::abs(v[i] - v[j]) / std::pow(t[j] - t[i], beta);
      est.seminorm = std::max(est.seminorm, q);
    }
  }
  // Thinning can skip the sample attaining the sup norm.
  for (double x : v) est.sup_norm = std::max(est.sup_norm, std::abs(x));
  return est;
}

Network::Network(std::array<Curve, 3> curves, std::array<Vec2, 3> anchors, double junction_tol)
    : curves_(std::move(curves)), anchors_(anchors), junction_(curves_[0].front()) {
  for (std::size_t j = 1; j < 3; ++j) {
    if (norm(curves_[j].front() - junction_) > junction_tol) {
      throw Error(ErrorKind::InvalidArgument,
                  "curves do not share a junction point (curve " + std::to_string(j + 1) + ")");
    }
  }
  for (std::size_t j = 0; j < 3; ++j) {
    if (!(curves_[j].back() == anchors_[j])) {
      throw Error(ErrorKind::InvalidArgument,
                  "curve " + std::to_string(j + 1) + " does not end at its anchor");
    }
    for (std::size_t k = j + 1; k < 3; ++k) {
      if (anchors_[j] == anchors_[k]) {
        throw Error(ErrorKind::InvalidArgument, "anchors must be pairwise distinct");
      }
    }
  }
}

Network Network::from_curves(std::array<Curve, 3> curves, double junction_tol) {
  std::array<Vec2, 3> anchors = {curves[0].back(), curves[1].back(), curves[2].back()};
  return Network(std::move(curves), anchors, junction_tol);
}

}  // namespace tjdrag
