#pragma once

#include <span>
#include <vector>

namespace tjdrag {

/// Solves a tridiagonal system with the Thomas algorithm (no pivoting).
/// Row i reads lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i];
/// lower[0] and upper[n-1] are ignored. Intended for the diagonally dominant
/// systems produced by implicit diffusion steps.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

/// Periodic variant: lower[0] couples row 0 to x[n-1] and upper[n-1]
/// couples row n-1 to x[0]. Sherman-Morrison on top of the Thomas solve.
std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs);

}  // namespace tjdrag
