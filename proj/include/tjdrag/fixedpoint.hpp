#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tjdrag/flow.hpp"
#include "tjdrag/geometry.hpp"
#include "tjdrag/tension.hpp"

namespace tjdrag {

/// Network curves and orientations on the time levels t_k = k dt, k = 0..K.
struct SpaceTimeField {
  std::vector<double> t;
  std::vector<std::array<Curve, 3>> curves;  // curves[k][j]
  std::vector<OrientationState> theta;

  std::size_t levels() const noexcept { return t.size(); }
  Network network(std::size_t k) const { return Network::from_curves(curves[k]); }
};

/// One backward Euler step of u_t - D u_xx = f on the uniform grid of u,
/// with Dirichlet values at both ends. D and f are given per node.
std::vector<double> implicit_heat_step(const std::vector<double>& u, const std::vector<double>& d,
                                       const std::vector<double>& f, double left, double right,
                                       double dt);

/// Frozen-coefficient problem around an initial network. The diffusion
/// coefficient of both components of curve j is sigma_j^0 / |p_jx^0(x)|^2.
struct LinearizedProblem {
  Network initial;
  OrientationState theta0{};
  TensionModel model = TensionModel::constant(1.0);
  double mu = 1.0;
  double nu = 0.0;
  double horizon = 0.05;
  double dt = 1e-3;
  double alpha = 0.5;
  double delta = 0.0;  // min |p_x^0| over the three curves
  double kink_tol = kDefaultKinkTol;
  std::array<std::vector<double>, 3> diffusion;  // D_j at each node

  std::size_t n() const noexcept { return initial.curve(0).size(); }
  std::size_t steps() const noexcept;
};

/// Throws DegenerateFrozenCoefficient if some D_j(x) <= 0 or is not finite,
/// and InvalidArgument when horizon / dt is not (close to) an integer.
LinearizedProblem make_linearized_problem(const Network& initial, const OrientationState& theta0,
                                          const TensionModel& m, double mu, double nu,
                                          double horizon, double dt, double alpha = 0.5);

/// Time-constant extension of the initial data: the starting iterate.
SpaceTimeField constant_extension(const LinearizedProblem& prob);

/// One application of the solution operator. Forcing, junction path and
/// orientations are built from `input`; each of the six components is then
/// advanced by backward Euler with Dirichlet data.
///
/// Throws InputGridMismatch when `input` is not on the problem's grid and
/// DegenerateParametrization when |p_x| < delta/2 somewhere in `input`.
SpaceTimeField solve_linearized(const LinearizedProblem& prob, const SpaceTimeField& input);

/// sum over the six components of sup_x (sup_t |w| + <w(x, .)>_t^{alpha/2})
/// plus sum over the three angles of (sup_t |phi| + <phi>_t^{alpha/2}).
double field_distance(const SpaceTimeField& a, const SpaceTimeField& b, double alpha);

struct ContractionReport {
  double horizon = 0.0;
  double dt = 0.0;
  double alpha = 0.5;
  double tol = 0.0;
  std::vector<double> distances;  // d_k = dist(R^k x0, R^{k-1} x0), k >= 1
  std::vector<double> factors;    // d_{k+1} / d_k where d_k > 0
  double max_factor = 0.0;
  bool converged = false;
  bool non_contraction = false;  // some factor >= 1 beyond the first two iterations
  bool below_half = false;       // every factor < 1/2
  bool below_one = false;        // every factor < 1
  SpaceTimeField final_iterate;
};

ContractionReport iterate_to_fixed_point(const LinearizedProblem& prob, std::size_t max_iter,
                                         double tol);

/// max over interior nodes and levels k >= 1 of
/// |(u^k - u^{k-1})/dt - sigma/|p_x|^2 u_xx| evaluated at level k.
double pde_residual(const LinearizedProblem& prob, const SpaceTimeField& field);

}  // namespace tjdrag
