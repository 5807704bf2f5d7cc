#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "tjdrag/vec2.hpp"

namespace tjdrag {

inline constexpr double kDefaultDeltaMin = 1e-6;
inline constexpr double kDefaultJunctionTol = 1e-10;

/// A curve sampled at the uniform parameter values x_i = i/(n-1).
///
/// Only the sample count (n >= 3) and finiteness are enforced on
/// construction. Regularity (|p_x| >= delta_min) depends on a threshold the
/// caller owns, so it is checked by the operations that need it and
/// reported as DegenerateParametrization.
class Curve {
 public:
  explicit Curve(std::vector<Vec2> points);

  std::size_t size() const noexcept { return points_.size(); }
  double spacing() const noexcept { return 1.0 / static_cast<double>(points_.size() - 1); }
  const std::vector<Vec2>& points() const noexcept { return points_; }
  const Vec2& operator[](std::size_t i) const { return points_[i]; }
  const Vec2& front() const { return points_.front(); }
  const Vec2& back() const { return points_.back(); }

  friend bool operator==(const Curve&, const Curve&) = default;

 private:
  std::vector<Vec2> points_;
};

enum class End { Start, Finish };

/// First and second parameter derivatives at one end of a curve.
struct EndJet {
  Vec2 d1;
  Vec2 d2;
};

// Difference stencils. Interior nodes use second-order central differences;
// the ends use second-order one-sided stencils (3 points for p_x, 4 points
// for p_xx, falling back to 3 points when n == 3).
Vec2 derivative(const Curve& c, std::size_t i);
Vec2 second_derivative(const Curve& c, std::size_t i);

/// One-sided end derivatives of the requested order (2 or 4). Order 4 uses
/// 5- and 6-point stencils and needs n >= 6.
EndJet end_derivatives(const Curve& c, End end, int order = 2);

/// min_i |p_x(x_i)| using the node stencils above.
double min_speed(const Curve& c);

/// Throws DegenerateParametrization when min_speed(c) < delta_min.
void require_regular(const Curve& c, double delta_min);

Vec2 tangent_at_junction(const Curve& c, double delta_min = kDefaultDeltaMin);

/// Full curvature vector p_xx/|p_x|^2 - p_x (p_x . p_xx)/|p_x|^4 at an
/// interior node.
Vec2 curvature_vector(const Curve& c, std::size_t i, double delta_min = kDefaultDeltaMin);

/// The same projection applied to given derivative values.
Vec2 curvature_from_derivatives(const Vec2& px, const Vec2& pxx);

/// Polyline length, i.e. the midpoint rule for the integral of |p_x| with
/// forward differences. Never smaller than the endpoint distance.
double length(const Curve& c);

/// Discrete Hausdorff distance between the two point samples. Point
/// sampling makes this a lower bound on the continuum distance, biased by
/// O(1/n) for curves that are resampled against each other.
double hausdorff_distance(const Curve& a, const Curve& b);

/// max over samples of `a` of the distance to the polyline through `b`.
double max_distance_to_polyline(const Curve& a, const Curve& b);

struct HolderEstimate {
  double exponent = 1.0;
  double seminorm = 0.0;
  double sup_norm = 0.0;
};

inline constexpr std::size_t kHolderMaxSamples = 2000;

/// sup_{i != j} |v_i - v_j| / |t_i - t_j|^beta by brute force over all
/// pairs. Inputs longer than kHolderMaxSamples are thinned uniformly.
HolderEstimate holder_seminorm(std::span<const double> t, std::span<const double> v,
                               double beta);

/// Three curves meeting at a common starting point, each ending at a pinned
/// anchor.
class Network {
 public:
  Network(std::array<Curve, 3> curves, std::array<Vec2, 3> anchors,
          double junction_tol = kDefaultJunctionTol);

  /// Anchors taken from the curves' last samples.
  static Network from_curves(std::array<Curve, 3> curves,
                             double junction_tol = kDefaultJunctionTol);

  const Curve& curve(std::size_t j) const { return curves_[j]; }
  const std::array<Curve, 3>& curves() const noexcept { return curves_; }
  const std::array<Vec2, 3>& anchors() const noexcept { return anchors_; }
  const Vec2& junction() const noexcept { return junction_; }

 private:
  std::array<Curve, 3> curves_;
  std::array<Vec2, 3> anchors_;
  Vec2 junction_;
};

}  // namespace tjdrag
