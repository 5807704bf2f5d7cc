#pragma once

#include <array>
#include <numbers>
#include <string>

namespace tjdrag {

/// Grain orientations theta_1..theta_3 in radians.
using OrientationState = std::array<double, 3>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDefaultKinkTol = 1e-9;
inline constexpr double kDefaultReadShockleyClamp = 1e-3;

/// Reduces an angle difference to the misorientation in [0, pi] implied by
/// evenness and 2*pi periodicity. Even in its argument bit for bit.
double canonical_misorientation(double dtheta);

/// Surface tension as a function of misorientation.
///
/// The profile is given on [0, pi] and extended evenly and 2*pi
/// periodically, so the symmetry axioms hold by construction. The
/// Read-Shockley profile A*t*(B - ln t) is continued linearly (value and
/// slope matched) below theta_min, which keeps sigma' bounded.
class TensionModel {
 public:
  enum class Kind { Constant, Quadratic, ReadShockley };

  static TensionModel constant(double value);
  static TensionModel quadratic(double c);
  static TensionModel read_shockley(double a, double b,
                                    double theta_min = kDefaultReadShockleyClamp);

  Kind kind() const noexcept { return kind_; }
  double value() const noexcept { return p0_; }  // Constant
  double c() const noexcept { return p0_; }      // Quadratic
  double a() const noexcept { return p0_; }      // ReadShockley
  double b() const noexcept { return p1_; }      // ReadShockley
  double theta_min() const noexcept { return theta_min_; }

  double sigma(double dtheta) const;

  /// d sigma / d dtheta of the extended profile. Throws KinkPoint within
  /// `kink_tol` of a corner of the extension (0 or pi where the one-sided
  /// slopes differ).
  double sigma_prime(double dtheta, double kink_tol = kDefaultKinkTol) const;

  /// Second derivative on the smooth branch containing dtheta.
  double sigma_second(double dtheta, double kink_tol = kDefaultKinkTol) const;

  /// Profile and its derivatives on [0, pi] (no reduction).
  double profile(double m) const;
  double profile_prime(double m) const;
  double profile_second(double m) const;

  /// sup |sigma'| and a Lipschitz constant of sigma' on the smooth branches.
  double sigma_prime_sup() const;
  double sigma_prime_lipschitz() const;

  std::string describe() const;

 private:
  TensionModel(Kind kind, double p0, double p1, double theta_min)
      : kind_(kind), p0_(p0), p1_(p1), theta_min_(theta_min) {}

  bool has_kink_at_zero() const;
  bool has_kink_at_pi() const;

  Kind kind_;
  double p0_;
  double p1_;
  double theta_min_;
};

/// Tension of each curve: curve j separates grains j-1 and j, so it carries
/// sigma(theta_{j-1} - theta_j) with cyclic indices.
std::array<double, 3> curve_tensions(const TensionModel& m, const OrientationState& theta);

struct TriangleCheck {
  bool ok = true;
  double margin = 0.0;  // min over ordered triples of s_ij + s_jk - s_ik
};

TriangleCheck triangle_ok(const TensionModel& m, const OrientationState& theta);

}  // namespace tjdrag
