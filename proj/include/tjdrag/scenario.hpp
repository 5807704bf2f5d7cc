#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tjdrag/flow.hpp"
#include "tjdrag/geometry.hpp"
#include "tjdrag/tension.hpp"

namespace tjdrag {

/// Knot of a piecewise quintic Hermite continuation: position and first and
/// second parameter derivatives at parameter x.
struct HermiteKnot {
  double x = 0.0;
  Vec2 p;
  Vec2 d1;
  Vec2 d2;
};

struct IntersectionScenario {
  SimState state;
  double mu = 0.0;
  double radius = 0.0;   // anchors lie on the circle of this radius
  double delta = 0.0;    // speed floor verified on every curve
  double x_loop = 0.0;   // parameter where curve 3 crosses the origin-junction segment
  std::array<std::vector<HermiteKnot>, 3> knots;  // continuation knots, x >= 1/2
};

inline constexpr double kIntersectionRadius = 4.0;
inline constexpr double kIntersectionDelta = 1.0;

/// Three curves leaving (1/mu^2, 1/mu^2) as the quadratic arcs
/// (1/mu^2 + x + a_j x^2, 1/mu^2 + j x + b_j x^2) on [0, 1/2], continued by
/// quintic Hermite pieces to anchors on the circle of radius 4 with zero
/// second derivative at x = 1. Curve 3 loops counterclockwise and passes
/// through the midpoint of the origin-junction segment at a grid node.
///
/// Throws ConstructionFailed when the speed floor is violated or the
/// initial network already has contacts.
IntersectionScenario build_intersection_scenario(double mu, std::size_t n);

/// Equilateral stationary network with the junction moved and each curve
/// bent by seeded amounts bounded by eps. Anchors and theta are unchanged.
SimState perturbed_stationary(std::size_t n, double eps, std::uint64_t seed);

/// Random smooth network without contacts: jittered anchors around the unit
/// circle, a junction near the origin and two sine bumps per curve.
SimState random_network(std::size_t n, std::uint64_t seed);

/// Network whose traces satisfy the geometric compatibility conditions.
/// Each curve is generated from a curvature profile in arc length that
/// starts at the value required at the junction and vanishes at the anchor.
struct CompatibleOptions {
  double mu = 1.0;
  /// Parametrize by p(x) = gamma(L phi(x)) with the quintic phi that makes
  /// the sampled network parametrically compatible, instead of arc length.
  bool parametric = false;
};

SimState compatible_network(std::size_t n, std::uint64_t seed, const TensionModel& m,
                            const OrientationState& theta, const CompatibleOptions& opt);

}  // namespace tjdrag
