#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "tjdrag/geometry.hpp"

namespace tjdrag::testing {

inline constexpr double kPi = std::numbers::pi;

inline Curve sample(std::size_t n, const std::function<Vec2(double)>& f) {
  std::vector<Vec2> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = f(static_cast<double>(i) / static_cast<double>(n - 1));
  return Curve(std::move(pts));
}

inline Curve segment(Vec2 a, Vec2 b, std::size_t n) {
  return sample(n, [&](double x) { return (1.0 - x) * a + x * b; });
}

inline double max_point_distance(const Curve& a, const Curve& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, norm(a[i] - b[i]));
  return d;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(gen() >> 11) * 0x1.0p-53;
  }
};

}  // namespace tjdrag::testing
