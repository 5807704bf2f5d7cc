#include "tjdrag/tridiag.hpp"

#include "tjdrag/error.hpp"

namespace tjdrag {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "tridiagonal bands must have matching sizes");
  }
  std::vector<double> c(n, 0.0);
  std::vector<double> x(n, 0.0);

  double pivot = diag[0];
  if (pivot == 0.0) throw Error(ErrorKind::InvalidArgument, "zero pivot in tridiagonal solve");
  c[0] = upper[0] / pivot;
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0) throw Error(ErrorKind::InvalidArgument, "zero pivot in tridiagonal solve");
    c[i] = upper[i] / pivot;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

std::vector<double> solve_cyclic_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n < 3 || lower.size() != n || upper.size() != n || rhs.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "cyclic system needs n >= 3 and matching bands");
  }
  const double alpha = upper[n - 1];  // row n-1, column 0
  const double beta = lower[0];       // row 0, column n-1
  const double gamma = -diag[0];

  std::vector<double> d(diag.begin(), diag.end());
  d[0] -= gamma;
  d[n - 1] -= alpha * beta / gamma;

  std::vector<double> lo(lower.begin(), lower.end());
  std::vector<double> up(upper.begin(), upper.end());
  lo[0] = 0.0;
  up[n - 1] = 0.0;

  const std::vector<double> x = solve_tridiagonal(lo, d, up, rhs);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  const std::vector<double> z = solve_tridiagonal(lo, d, up, u);

  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
  return out;
}

}  // namespace tjdrag
