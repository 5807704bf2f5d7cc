#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "tjdrag/compat.hpp"
#include "tjdrag/error.hpp"
#include "tjdrag/scenario.hpp"
#include "tjdrag/stationary.hpp"

using namespace tjdrag;
using namespace tjdrag::testing;

namespace {

double trace_distance(const Curve& a, const Curve& b) {
  return std::max(max_distance_to_polyline(a, b), max_distance_to_polyline(b, a));
}

// Straight stationary network whose samples accelerate sharply away from
// the junction: the trace is compatible but the parameter speed is not.
Network accelerated_stationary(std::size_t n, double gamma) {
  const auto anchors = stationary_anchors();
  auto g = [gamma](double x) { return 2 * x - (1 - std::exp(-gamma * x)) / gamma; };
  const double g1 = g(1.0);
  std::array<Curve, 3> cs = {segment({0, 0}, anchors[0], n), segment({0, 0}, anchors[1], n),
                             segment({0, 0}, anchors[2], n)};
  for (std::size_t j = 0; j < 3; ++j) {
    cs[j] = sample(n, [&](double x) { return (g(x) / g1) * anchors[j]; });
  }
  return Network::from_curves(cs);
}

}  // namespace

TEST_CASE("stationary network is compatible in both senses") {
  const auto [net, th] = stationary_configuration(65);
  for (const auto& m : {TensionModel::constant(1), TensionModel::quadratic(2)}) {
    const CompatReport p = check_parametric(net, th, m, 1.0, 1e-10);
    const CompatReport g = check_geometric(net, th, m, 1.0, 1e-10);
    CHECK(p.parametric->ok);
    CHECK(g.geometric->ok);
    CHECK(p.max_parametric() < 1e-10);
    CHECK(g.max_geometric() < 1e-10);
  }
}

TEST_CASE("perturbed anchors leave an unbalanced junction") {
  const Vec2 a0{1.0, -0.2}, a1{0.1, 1.0}, a2{-0.9, -0.6};
  const Network net = Network::from_curves({segment({0, 0}, a0, 33), segment({0, 0}, a1, 33), segment({0, 0}, a2, 33)});
  const double mu = 2.0;
  const Vec2 v = (1.0 / mu) * ((1.0 / norm(a0)) * a0 + (1.0 / norm(a1)) * a1 + (1.0 / norm(a2)) * a2);
  const CompatReport r = check_parametric(net, {0, 0, 0}, TensionModel::constant(1), mu, 1e-8);
  REQUIRE(r.parametric.has_value());
  CHECK(!r.parametric->ok);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::abs(r.parametric->junction_x[j] - std::abs(v.x)) < 1e-12);
    CHECK(std::abs(r.parametric->junction_y[j] - std::abs(v.y)) < 1e-12);
    CHECK(r.parametric->anchor[j] < 1e-10);
  }
  CHECK(!check_geometric(net, {0, 0, 0}, TensionModel::constant(1), mu, 1e-8).geometric->ok);
}

TEST_CASE("quintic reparametrization endpoint conditions") {
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const Quintic q{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    CHECK(std::abs(q(0.0)) < 1e-15);
    CHECK(std::abs(q(1.0) - 1) < 1e-15);
    CHECK(std::abs(q.prime(0.0) - 1) < 1e-12);
    CHECK(std::abs(q.prime(1.0) - 1) < 1e-12);
    CHECK(std::abs(q.second(0.0) - q.a) < 1e-9);
    CHECK(std::abs(q.second(1.0) - q.b) < 1e-9);
    const double x = rng.uniform(0.1, 0.9), h = 1e-5;
    CHECK(std::abs((q(x + h) - q(x - h)) / (2 * h) - q.prime(x)) < 1e-8);
    CHECK(std::abs((q.prime(x + h) - q.prime(x - h)) / (2 * h) - q.second(x)) < 1e-7);
  }
  CHECK(Quintic{0, 0}.min_prime(1000) == doctest::Approx(1.0));
  CHECK(Quintic{25, 0}.min_prime(1000) < 0);
  CHECK(Quintic{6, 6}.min_prime(1000) > 0);
}

TEST_CASE("identity reparametrization reproduces the curve") {
  const SimState s = random_network(101, 4);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(max_point_distance(reparametrize(s.network.curve(j), Quintic{0, 0}), s.network.curve(j)) < 1e-12);
  }
  const auto [net, th] = stationary_configuration(65);
  const Network same = reparametrize_to_compatible(net, th, TensionModel::constant(1), 1.0, 1e-10);
  for (std::size_t j = 0; j < 3; ++j) CHECK(max_point_distance(same.curve(j), net.curve(j)) < 1e-12);
  CHECK(check_parametric(same, th, TensionModel::constant(1), 1.0, 1e-10).parametric->ok);
}

TEST_CASE("arc-length compatible networks become parametrically compatible") {
  const TensionModel one = TensionModel::constant(1);
  const OrientationState th{0, 0, 0};
  const std::size_t n = 801;
  for (std::uint64_t seed : {1, 3}) {
    const SimState s = compatible_network(n, seed, one, th, {1.0, false});
    const CompatReport geo = check_geometric(s.network, th, one, 1.0, 1e-8);
    CHECK(geo.geometric->ok);
    CHECK(!check_parametric(s.network, th, one, 1.0, 1e-8).parametric->ok);

    const Network out = reparametrize_to_compatible(s.network, th, one, 1.0, 1e-8);
    const CompatReport par = check_parametric(out, th, one, 1.0, 1e-8);
    CHECK(par.parametric->ok);
    const double h = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < 3; ++j) CHECK(trace_distance(out.curve(j), s.network.curve(j)) < 5 * h * h);
  }
}

TEST_CASE("parametric compatibility implies geometric compatibility") {
  const TensionModel q = TensionModel::quadratic(1);
  const OrientationState th{0.2, 2.3, 4.2};
  for (std::uint64_t seed : {0, 2, 5}) {
    const SimState s = compatible_network(801, seed, q, th, {1.5, true});
    const CompatReport par = check_parametric(s.network, th, q, 1.5, 1e-8);
    REQUIRE(par.parametric->ok);
    const double tol = std::max(par.max_parametric(), 1e-12);
    CHECK(check_geometric(s.network, th, q, 1.5, 3 * std::max(tol, 1e-9)).geometric->ok);
  }
}

TEST_CASE("geometric residual tends to sigma kappa for large mu") {
  const TensionModel q = TensionModel::quadratic(1);
  const OrientationState th{0.2, 2.3, 4.2};
  const SimState s = compatible_network(201, 9, q, th, {1.0, false});
  const auto sig = curve_tensions(q, th);
  const CompatReport r = check_geometric(s.network, th, q, 1e12, 1e-8);
  for (std::size_t j = 0; j < 3; ++j) {
    const EndJet e = end_derivatives(s.network.curve(j), End::Start, kCompatStencilOrder);
    const double kappa = norm(curvature_from_derivatives(e.d1, e.d2));
    CHECK(std::abs(r.geometric->junction[j] - sig[j] * kappa) < 1e-9);
  }
}

TEST_CASE("extreme reparametrization targets are rejected") {
  const auto [ref, th] = stationary_configuration(401);
  const Network net = accelerated_stationary(401, 40.0);
  const TensionModel one = TensionModel::constant(1);
  REQUIRE(check_geometric(net, th, one, 1.0, 1e-8).geometric->ok);
  const auto phis = compatible_reparametrizations(net, th, one, 1.0);
  CHECK(phis[0].a < -14);
  try {
    reparametrize_to_compatible(net, th, one, 1.0, 1e-8);
    FAIL("expected NonMonotoneReparametrization");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonMonotoneReparametrization);
  }

  // Geometrically incompatible input is refused outright.
  const Network bent = Network::from_curves(
      {segment({0, 0}, {1, -0.2}, 33), segment({0, 0}, {0.1, 1}, 33), segment({0, 0}, {-0.9, -0.6}, 33)});
  try {
    reparametrize_to_compatible(bent, th, one, 1.0, 1e-8);
    FAIL("expected GeometricCompatibilityRequired");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GeometricCompatibilityRequired);
  }
}
