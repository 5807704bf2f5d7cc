#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "tjdrag/geometry.hpp"
#include "tjdrag/tension.hpp"

namespace tjdrag {

/// Stencil order used at the curve ends by the compatibility checks. Order 4
/// keeps the truncation error of p_xx well below the round-off floor at
/// n ~ 800; curves with fewer than 6 samples fall back to order 2.
inline constexpr int kCompatStencilOrder = 4;

struct ParametricResiduals {
  // |sigma_j p_xx/|p_x|^2 - V| split by component at x = 0, V the drag velocity.
  std::array<double, 3> junction_x{};
  std::array<double, 3> junction_y{};
  // |p_xx| at x = 1.
  std::array<double, 3> anchor{};
  double junction_mismatch = 0.0;  // max distance between the three x = 0 points
  bool ok = false;
};

struct GeometricResiduals {
  // |sigma_j kappa_j - V . nu_j| at the junction.
  std::array<double, 3> junction{};
  // |kappa_j| at the anchor.
  std::array<double, 3> anchor{};
  bool ok = false;
};

struct CompatReport {
  double tol = 0.0;
  int stencil_order = kCompatStencilOrder;
  std::optional<ParametricResiduals> parametric;
  std::optional<GeometricResiduals> geometric;

  double max_parametric() const;
  double max_geometric() const;
};

CompatReport check_parametric(const Network& net, const OrientationState& theta,
                              const TensionModel& m, double mu, double tol,
                              int stencil_order = kCompatStencilOrder,
                              double delta_min = kDefaultDeltaMin);

CompatReport check_geometric(const Network& net, const OrientationState& theta,
                             const TensionModel& m, double mu, double tol,
                             int stencil_order = kCompatStencilOrder,
                             double delta_min = kDefaultDeltaMin);

/// phi(x) = x + (a/2) x^2 (1-x)^3 + (b/2) x^3 (1-x)^2: the quintic with
/// phi(0) = 0, phi(1) = 1, phi'(0) = phi'(1) = 1, phi''(0) = a, phi''(1) = b.
struct Quintic {
  double a = 0.0;
  double b = 0.0;

  double operator()(double x) const;
  double prime(double x) const;
  double second(double x) const;
  /// min of phi' over `samples` uniform points of [0, 1].
  double min_prime(std::size_t samples) const;
};

/// Second-derivative targets (phi''(0), phi''(1)) that make q(phi(x))
/// parametrically compatible.
std::array<Quintic, 3> compatible_reparametrizations(const Network& net,
                                                     const OrientationState& theta,
                                                     const TensionModel& m, double mu,
                                                     int stencil_order = kCompatStencilOrder);

/// Evaluates the sampled curve at parameter x by local Lagrange
/// interpolation of degree 7 (8 nearest samples, shifted inward at the ends).
Vec2 interpolate(const Curve& c, double x);

/// Composes curve with phi by interpolation. Endpoints are copied exactly.
Curve reparametrize(const Curve& c, const Quintic& phi);

/// Builds p_j = q_j o phi_j. Requires check_geometric to pass at tol_geo;
/// throws NonMonotoneReparametrization when some phi_j' <= 0 on a grid of
/// 10 n points.
Network reparametrize_to_compatible(const Network& net, const OrientationState& theta,
                                    const TensionModel& m, double mu, double tol_geo,
                                    int stencil_order = kCompatStencilOrder);

}  // namespace tjdrag
