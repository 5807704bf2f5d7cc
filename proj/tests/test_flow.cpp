#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "support.hpp"
#include "tjdrag/error.hpp"
#include "tjdrag/flow.hpp"
#include "tjdrag/scenario.hpp"
#include "tjdrag/stationary.hpp"

using namespace tjdrag;
using namespace tjdrag::testing;

namespace {

Vec2 unit_start_tangent(const Curve& c) {
  const double h = c.spacing();
  const Vec2 d = (1.0 / (2 * h)) * (-3.0 * c[0] + 4.0 * c[1] - 1.0 * c[2]);
  return (1.0 / norm(d)) * d;
}

// Dense-matrix version of one step with sigma = (1, 1, 1): the junction by
// forward Euler, then either u + r D L u or (I - r D L)^{-1} u on the interior.
Network dense_reference_step(const Network& net, double mu, double dt, bool implicit) {
  Vec2 v{0, 0};
  for (std::size_t j = 0; j < 3; ++j) v += unit_start_tangent(net.curve(j));
  const Vec2 jn = net.junction() + (dt / mu) * v;
  std::array<Curve, 3> out = net.curves();
  for (std::size_t j = 0; j < 3; ++j) {
    const Curve& c = net.curve(j);
    const int n = static_cast<int>(c.size());
    const double h = c.spacing();
    const double r = dt / (h * h);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i + 1 < n; ++i) {
      const Vec2 px = (1.0 / (2 * h)) * (c[i + 1] - c[i - 1]);
      const double d = 1.0 / norm2(px);
      L(i, i - 1) = r * d;
      L(i, i) = -2 * r * d;
      L(i, i + 1) = r * d;
    }
    Eigen::MatrixXd U(n, 2);
    for (int i = 0; i < n; ++i) U.row(i) << c[i].x, c[i].y;
    Eigen::MatrixXd V;
    if (!implicit) {
      V = U + L * U;
      V.row(0) << jn.x, jn.y;
    } else {
      // Interior rows of (I - L) with the new boundary values moved right.
      Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - L;
      Eigen::MatrixXd rhs = U;
      rhs.row(0) << jn.x, jn.y;
      rhs.row(n - 1) << c[n - 1].x, c[n - 1].y;
      A.row(0).setZero();
      A(0, 0) = 1;
      A.row(n - 1).setZero();
      A(n - 1, n - 1) = 1;
      V = A.partialPivLu().solve(rhs);
    }
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = {V(i, 0), V(i, 1)};
    pts[0] = jn;
    pts[n - 1] = c[n - 1];
    out[j] = Curve(pts);
  }
  return Network(out, net.anchors(), 1e-9);
}

Network perturbed_segments(std::size_t n) {
  const auto anchors = stationary_anchors();
  std::array<Curve, 3> cs = {segment({0, 0}, anchors[0], n), segment({0, 0}, anchors[1], n),
                             segment({0, 0}, anchors[2], n)};
  for (std::size_t j = 0; j < 3; ++j) {
    const Vec2 a = anchors[j];
    const Vec2 normal{-a.y, a.x};
    cs[j] = sample(n, [&](double x) { return x * a + (0.1 * (j + 1) * std::sin(kPi * x)) * normal; });
  }
  return Network::from_curves(cs);
}

}  // namespace

TEST_CASE("special flow right-hand side") {
  for (double s : {1.0, 5.0}) {
    for (const Vec2& v : special_flow_rhs(segment({0, 0}, {1, 2}, 33), s)) CHECK(norm(v) < 1e-12);
  }
  const double R = 3.0;
  const Curve arc = sample(401, [&](double x) { return Vec2{R * std::cos(2 * kPi * x), R * std::sin(2 * kPi * x)}; });
  const auto rhs = special_flow_rhs(arc, 1.0);
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    CHECK(std::abs(norm(rhs[i]) - 1 / R) < 1e-3);
    CHECK(dot(rhs[i], arc[i + 1]) < 0);
  }
  CHECK_THROWS_AS(special_flow_rhs(arc, 0.0), Error);
}

TEST_CASE("junction velocity") {
  const auto [st, th] = stationary_configuration(33);
  CHECK(norm(junction_velocity(st, {1, 1, 1}, 1.0)) < 1e-15);

  const Network t = Network::from_curves(
      {segment({0, 0}, {1, 0}, 5), segment({0, 0}, {0, 1}, 5), segment({0, 0}, {-1, 0}, 5)});
  const Vec2 v = junction_velocity(t, {1, 1, 1}, 2.0);
  CHECK(std::abs(v.x) < 1e-15);
  CHECK(std::abs(v.y - 0.5) < 1e-15);

  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const double mu = rng.uniform(0.01, 10);
    std::array<Curve, 3> cs = t.curves();
    for (std::size_t j = 0; j < 3; ++j) {
      const double a = rng.uniform(0, 2 * kPi);
      cs[j] = segment({0, 0}, {std::cos(a), std::sin(a)}, 5);
    }
    CHECK(norm(junction_velocity(Network(cs, {cs[0].back(), cs[1].back(), cs[2].back()}), {1, 1, 1}, mu)) <=
          3 / mu + 1e-12);
  }
}

TEST_CASE("rotation right-hand side") {
  const TensionModel q = TensionModel::quadratic(1);
  const auto [st, th] = stationary_configuration(17);
  for (double d : rotation_rhs({st, th, 0.0}, q, 1.0)) CHECK(std::abs(d) < 1e-12);

  const SimState s{st, {0, kPi / 3, 2 * kPi / 3}, 0.0};
  const OrientationState r = rotation_rhs(s, q, 1.0);
  CHECK(std::abs(r[0] - 2 * kPi) < 1e-12);
  for (double d : rotation_rhs(s, q, 0.0)) CHECK(d == 0.0);
}

TEST_CASE("rotation follows the negative energy gradient in theta") {
  const TensionModel models[] = {TensionModel::quadratic(0.5), TensionModel::read_shockley(1, 1 + std::log(kPi), 1e-3)};
  Rng rng(12);
  for (const auto& m : models) {
    for (int k = 0; k < 10; ++k) {
      const SimState s = random_network(33, 100 + k);
      OrientationState th{rng.uniform(0, 6), rng.uniform(0, 6), rng.uniform(0, 6)};
      const double nu = rng.uniform(0.1, 3);
      const SimState st{s.network, th, 0.0};
      const OrientationState r = rotation_rhs(st, m, nu);
      for (std::size_t j = 0; j < 3; ++j) {
        OrientationState a = th, b = th;
        const double h = 1e-6;
        a[j] += h;
        b[j] -= h;
        const double grad = (network_energy(s.network, a, m) - network_energy(s.network, b, m)) / (2 * h);
        CHECK(std::abs(r[j] + nu * grad) <= 1e-5 * std::max(1.0, std::abs(r[j])));
      }
    }
  }
}

TEST_CASE("frozen curves integrate only the orientations") {
  const TensionModel q = TensionModel::quadratic(1);
  const SimState s0{random_network(33, 5).network, {0.1, 1.9, 4.0}, 0.0};
  FlowParams p;
  p.nu = 0.7;
  p.freeze_curves = true;
  const OrientationState r = rotation_rhs(s0, q, p.nu);
  const SimState s1 = step(s0, p, q, 1e-3);
  for (std::size_t j = 0; j < 3; ++j) CHECK(s1.network.curve(j) == s0.network.curve(j));
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(s1.theta[j] - (s0.theta[j] + 1e-3 * r[j])) < 1e-15);
}

TEST_CASE("stationary state is a fixed point of the step") {
  const auto [st, th] = stationary_configuration(65);
  FlowParams p;
  p.nu = 1.0;
  for (const auto scheme : {Scheme::SemiImplicit, Scheme::Explicit}) {
    p.scheme = scheme;
    const SimState s1 = step({st, th, 0.0}, p, TensionModel::quadratic(1), 1e-5);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(max_point_distance(s1.network.curve(j), st.curve(j)) < 1e-12);
      CHECK(std::abs(s1.theta[j] - th[j]) < 1e-12);
    }
  }
}

TEST_CASE("single steps match a dense reference stepper") {
  const Network net = perturbed_segments(41);
  FlowParams p;
  p.mu = 0.8;
  const TensionModel one = TensionModel::constant(1);
  const SimState s{net, {0, 0, 0}, 0.0};

  p.scheme = Scheme::Explicit;
  const double dte = 0.2 * std::pow(1.0 / 40, 2) * 0.5;
  const SimState e = step(s, p, one, dte);
  const Network e_ref = dense_reference_step(net, p.mu, dte, false);
  for (std::size_t j = 0; j < 3; ++j) CHECK(max_point_distance(e.network.curve(j), e_ref.curve(j)) < 1e-12);

  p.scheme = Scheme::SemiImplicit;
  const SimState si = step(s, p, one, 1e-2);
  const Network si_ref = dense_reference_step(net, p.mu, 1e-2, true);
  for (std::size_t j = 0; j < 3; ++j) CHECK(max_point_distance(si.network.curve(j), si_ref.curve(j)) < 1e-12);
}

TEST_CASE("explicit scheme rejects steps above the stability limit") {
  const Network net = perturbed_segments(41);
  FlowParams p;
  p.scheme = Scheme::Explicit;
  const double lim = explicit_dt_limit(net, {1, 1, 1}, p.explicit_safety);
  CHECK_NOTHROW(step({net, {0, 0, 0}, 0.0}, p, TensionModel::constant(1), 0.99 * lim));
  CHECK_THROWS_AS(step({net, {0, 0, 0}, 0.0}, p, TensionModel::constant(1), 1.01 * lim), Error);
}

TEST_CASE("stationary run does not drift") {
  const auto [st, th] = stationary_configuration(65);
  FlowParams p;
  p.mu = 1;
  p.nu = 1;
  p.t_end = 1;
  p.dt = 1e-3;
  const SimRecord rec = run({st, th, 0.0}, p, TensionModel::quadratic(1));
  REQUIRE(!rec.halted);
  const SimState& last = rec.snapshots.back();
  CHECK(last.time == 1.0);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(hausdorff_distance(last.network.curve(j), st.curve(j)) < 1e-8);
    CHECK(std::abs(last.theta[j] - th[j]) < 1e-10);
  }
}

TEST_CASE("large drag nearly freezes the junction") {
  FlowParams p;
  p.mu = 1e6;
  p.t_end = 0.1;
  p.dt = 1e-3;
  const Network net = perturbed_segments(65);
  const SimRecord rec = run({net, {0, 0, 0}, 0.0}, p, TensionModel::constant(1));
  REQUIRE(!rec.halted);
  CHECK(norm(rec.snapshots.back().network.junction() - net.junction()) < 1e-4);
  CHECK(norm(rec.snapshots.back().network.junction() - net.junction()) <= 0.1 * 3 / p.mu + 1e-15);
}

TEST_CASE("random runs dissipate energy, respect the speed bound and keep anchors") {
  const TensionModel models[] = {TensionModel::constant(1), TensionModel::quadratic(1)};
  for (int seed = 0; seed < 20; ++seed) {
    const TensionModel& m = models[seed % 2];
    SimState s0 = random_network(65, seed);
    s0.theta = {0.0, 2.0, 4.1};
    FlowParams p;
    p.mu = 0.5 + 0.25 * (seed % 4);
    p.nu = seed % 3 == 0 ? 0.0 : 0.5;
    p.dt = 1e-4;
    p.t_end = 0.02;
    p.snapshot_every = 10;
    const SimRecord rec = run(s0, p, m);
    REQUIRE(!rec.halted);
    for (std::size_t k = 1; k < rec.trace.size(); ++k) {
      CHECK(rec.trace[k].t > rec.trace[k - 1].t);
      CHECK(rec.trace[k].energy <= rec.trace[k - 1].energy + 1e-8 * (1 + std::abs(rec.trace[k - 1].energy)));
    }
    for (std::size_t k = 0; k < rec.trace.size(); ++k) {
      CHECK(rec.trace[k].junction_speed <= 3 * rec.max_sigma / p.mu + 1e-9);
      const Network& net = rec.snapshots[k].network;
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(net.curve(j).back() == s0.network.anchors()[j]);
        CHECK(norm(net.curve(j).front() - net.junction()) <= p.tau_junction);
      }
    }
  }
}

TEST_CASE("closed circle examples") {
  FlowParams p;
  p.n = 401;
  p.snapshot_every = 1000000;

  p.t_end = 0;
  CHECK(run_closed_circle(1.0, p).samples.back().radius == doctest::Approx(1.0).epsilon(1e-15));

  p.dt = 1e-5;
  p.t_end = 0.04;
  CHECK(std::abs(run_closed_circle(5.0, p).samples.back().radius - std::sqrt(25 - 0.08)) < 1e-3);

  p.t_end = 1.0;
  CHECK(std::abs(run_closed_circle(2.0, p).samples.back().radius - std::sqrt(2.0)) < 1e-3);

  p.t_end = 1.5;
  const CircleTrace c = run_closed_circle(2.0, p);
  CHECK(!c.halted);
  CHECK(std::abs(c.samples.back().radius - 1.0) < 1e-3);

  p.t_end = 2.0;
  CHECK_THROWS_AS(run_closed_circle(2.0, p), Error);
}

TEST_CASE("closed circle converges at second order in space") {
  std::vector<double> err;
  for (std::size_t n : {25, 50, 100}) {
    FlowParams p;
    p.n = n;
    const double h = 1.0 / static_cast<double>(n);
    p.dt = 0.05 * h * h;
    p.t_end = 0.1;
    p.snapshot_every = 1000000;
    err.push_back(std::abs(run_closed_circle(1.0, p).samples.back().radius - std::sqrt(0.8)));
  }
  for (std::size_t k = 1; k < err.size(); ++k) CHECK(std::log2(err[k - 1] / err[k]) >= 1.8);
}
