#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "tjdrag/geometry.hpp"
#include "tjdrag/tension.hpp"

namespace tjdrag {

/// Anchors of the equilateral configuration: (sqrt3/2, -1/2), (0, 1), (-sqrt3/2, -1/2).
std::array<Vec2, 3> stationary_anchors();

/// Straight segments from the origin to the anchors, theta = (0, 2pi/3, 4pi/3).
std::pair<Network, OrientationState> stationary_configuration(std::size_t n);

/// g(x, y) = sigma(y) + sigma(-x) + sigma(x - y).
double g_value(double x, double y, const TensionModel& m);
std::array<double, 2> grad_g(double x, double y, const TensionModel& m,
                             double kink_tol = kDefaultKinkTol);

struct FEvaluation {
  double value = 0.0;
  Eigen::Vector4d grad = Eigen::Vector4d::Zero();
  Eigen::Matrix4d hessian = Eigen::Matrix4d::Zero();
};

/// F(a, b, r, s) = sigma(s)|P - x1| + sigma(-r)|P - x2| + sigma(r - s)|P - x3|
/// with P = (a, b), together with its analytic gradient and Hessian.
FEvaluation F_value_grad_hessian(double a, double b, double r, double s, const TensionModel& m,
                                 double kink_tol = kDefaultKinkTol);
double F_value(double a, double b, double r, double s, const TensionModel& m);

/// lambda_1..lambda_4 of the quadratic-model Hessian at the stationary point,
/// in the closed form (lambda_1 <= lambda_2, lambda_3 <= lambda_4).
std::array<double, 4> eigenvalues_formula(double c);

/// Smallest c in (0, c_max] at which min_j lambda_j(c) changes sign, by
/// bisection down to `tol`. Empty if there is no sign change.
std::optional<double> quadratic_threshold(double c_max = 100.0, double tol = 1e-8);

enum class Stability { StrictLocalMin, Saddle, Degenerate };
std::string to_string(Stability s);

struct StationaryReport {
  std::array<Vec2, 3> anchors{};
  Vec2 junction;
  OrientationState theta{};
  std::array<double, 2> grad_g{};
  Eigen::Vector4d grad_F = Eigen::Vector4d::Zero();
  Eigen::Matrix4d hessian_F = Eigen::Matrix4d::Zero();
  std::optional<std::array<double, 4>> eigenvalues_formula;  // quadratic only
  std::array<double, 4> eigenvalues_numeric{};               // ascending
  Stability classification = Stability::Degenerate;
  std::optional<double> c_threshold;  // quadratic only
};

inline constexpr double kZeroEigenTol = 1e-10;

StationaryReport classify_stability(const TensionModel& m);

using ReducedState = Eigen::Matrix<double, 5, 1>;  // (a, b, theta1, theta2, theta3)

/// Straight-segment model: the junction moves by the drag law with segment
/// tangents, the orientations by the rotation law with segment lengths.
ReducedState reduced_vector_field(const ReducedState& x, const TensionModel& m, double mu,
                                  double nu, double kink_tol = kDefaultKinkTol);

struct ReducedJacobian {
  Eigen::Matrix<double, 5, 5> raw;
  Eigen::Matrix4d quotient;  // coordinates (a, b, theta2 - theta1, theta3 - theta1)
  Eigen::Matrix<std::complex<double>, 5, 1> raw_eigenvalues;
  Eigen::Matrix<std::complex<double>, 4, 1> quotient_eigenvalues;
  double max_real_part = 0.0;  // over the quotient eigenvalues
};

/// Central-difference Jacobian of reduced_vector_field at the stationary
/// point, plus the quotient by the common rotation of all three grains.
ReducedJacobian reduced_ode_jacobian(const TensionModel& m, double mu, double nu,
                                     double fd_step = 1e-6);

}  // namespace tjdrag
