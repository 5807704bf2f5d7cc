#include "tjdrag/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tjdrag {

namespace {

// Error-free transformations (Knuth two-sum, fma two-product).
inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  y = std::fma(a, b, -x);
}

// Adds b to a nonoverlapping expansion kept in increasing magnitude order.
void grow_expansion(std::vector<double>& e, double b) {
  double q = b;
  for (double& ei : e) {
    double sum, err;
    two_sum(q, ei, sum, err);
    ei = err;
    q = sum;
  }
  e.push_back(q);
}

int exact_orient_sign(const Vec2& a, const Vec2& b, const Vec2& c) {
  double acx, acx_t, bcy, bcy_t, acy, acy_t, bcx, bcx_t;
  two_sum(a.x, -c.x, acx, acx_t);
  two_sum(b.y, -c.y, bcy, bcy_t);
  two_sum(a.y, -c.y, acy, acy_t);
  two_sum(b.x, -c.x, bcx, bcx_t);

  const double left[2] = {acx, acx_t};
  const double left2[2] = {bcy, bcy_t};
  const double right[2] = {acy, acy_t};
  const double right2[2] = {bcx, bcx_t};

  std::vector<double> e;
  e.reserve(17);
  for (double u : left) {
    for (double v : left2) {
      double p, q;
      two_product(u, v, p, q);
      grow_expansion(e, q);
      grow_expansion(e, p);
    }
  }
  for (double u : right) {
    for (double v : right2) {
      double p, q;
      two_product(u, v, p, q);
      grow_expansion(e, -q);
      grow_expansion(e, -p);
    }
  }
  for (auto it = e.rbegin(); it != e.rend(); ++it) {
    if (*it > 0.0) return 1;
    if (*it < 0.0) return -1;
  }
  return 0;
}

struct Segment {
  std::size_t curve;
  std::size_t index;
  Vec2 a;
  Vec2 b;
  double xmin, xmax, ymin, ymax;
};

bool boxes_overlap(const Segment& s, const Segment& t) {
  return s.xmin <= t.xmax && t.xmin <= s.xmax && s.ymin <= t.ymax && t.ymin <= s.ymax;
}

// p is known to be collinear with [a, b].
bool within_box(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

double param_on(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  return len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
}

}  // namespace

int orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  constexpr double eps = std::numeric_limits<double>::epsilon() / 2.0;
  constexpr double err_bound = (3.0 + 16.0 * eps) * eps;
  const double left = (a.x - c.x) * (b.y - c.y);
  const double right = (a.y - c.y) * (b.x - c.x);
  const double det = left - right;
  const double bound = err_bound * (std::abs(left) + std::abs(right));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return exact_orient_sign(a, b, c);
}

std::vector<IntersectionEvent> detect_intersections(const Network& net, double time) {
  std::vector<Segment> segs;
  for (std::size_t j = 0; j < 3; ++j) {
    const Curve& c = net.curve(j);
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
      const Vec2 a = c[k];
      const Vec2 b = c[k + 1];
      segs.push_back({j, k, a, b, std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
                      std::max(a.y, b.y)});
    }
  }

  std::vector<IntersectionEvent> events;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    for (std::size_t t = s + 1; t < segs.size(); ++t) {
      const Segment& p = segs[s];
      const Segment& q = segs[t];
      if (p.curve == q.curve) {
        if (q.index <= p.index + 1) continue;
      } else if (p.index == 0 && q.index == 0) {
        continue;
      }
      if (!boxes_overlap(p, q)) continue;

      const int d1 = orient2d(q.a, q.b, p.a);
      const int d2 = orient2d(q.a, q.b, p.b);
      const int d3 = orient2d(p.a, p.b, q.a);
      const int d4 = orient2d(p.a, p.b, q.b);

      IntersectionEvent ev;
      ev.time = time;
      ev.curve_a = p.curve;
      ev.segment_a = p.index;
      ev.curve_b = q.curve;
      ev.segment_b = q.index;
      double ta = 0.0;
      double tb = 0.0;

      if (d1 * d2 < 0 && d3 * d4 < 0) {
        const Vec2 r = p.b - p.a;
        const Vec2 u = q.b - q.a;
        const double denom = cross(r, u);
        ta = std::clamp(cross(q.a - p.a, u) / denom, 0.0, 1.0);
        tb = std::clamp(cross(q.a - p.a, r) / denom, 0.0, 1.0);
        ev.point = p.a + ta * r;
        ev.kind = ContactKind::Crossing;
      } else if (d1 == 0 && within_box(q.a, q.b, p.a)) {
        ev.point = p.a;
        ta = 0.0;
        tb = param_on(q.a, q.b, p.a);
        ev.kind = ContactKind::Touch;
      } else if (d2 == 0 && within_box(q.a, q.b, p.b)) {
        ev.point = p.b;
        ta = 1.0;
        tb = param_on(q.a, q.b, p.b);
        ev.kind = ContactKind::Touch;
      } else if (d3 == 0 && within_box(p.a, p.b, q.a)) {
        ev.point = q.a;
        ta = param_on(p.a, p.b, q.a);
        tb = 0.0;
        ev.kind = ContactKind::Touch;
      } else if (d4 == 0 && within_box(p.a, p.b, q.b)) {
        ev.point = q.b;
        ta = param_on(p.a, p.b, q.b);
        tb = 1.0;
        ev.kind = ContactKind::Touch;
      } else {
        continue;
      }
      const double ha = net.curve(p.curve).spacing();
      const double hb = net.curve(q.curve).spacing();
      ev.param_a = (static_cast<double>(p.index) + ta) * ha;
      ev.param_b = (static_cast<double>(q.index) + tb) * hb;
      events.push_back(ev);
    }
  }
  return events;
}

std::array<double, 3> junction_angles(const Network& net, double delta_min) {
  std::array<double, 3> phi{};
  for (std::size_t j = 0; j < 3; ++j) {
    const Vec2 t = tangent_at_junction(net.curve(j), delta_min);
    phi[j] = std::atan2(t.y, t.x);
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return phi[a] < phi[b]; });

  std::array<double, 3> gaps{};
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t cur = order[k];
    const std::size_t next = order[(k + 1) % 3];
    double g = phi[next] - phi[cur];
    if (k == 2) g += 2.0 * std::numbers::pi;
    gaps[cur] = g;
  }
  return gaps;
}

double network_energy(const Network& net, const std::array<double, 3>& tensions) {
  double e = 0.0;
  for (std::size_t j = 0; j < 3; ++j) e += tensions[j] * length(net.curve(j));
  return e;
}

double network_energy(const Network& net, const OrientationState& theta, const TensionModel& m) {
  return network_energy(net, curve_tensions(m, theta));
}

double discrete_c2_norm(const Curve& c) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    s0 = std::max(s0, norm(c[i]));
    s1 = std::max(s1, norm(derivative(c, i)));
    s2 = std::max(s2, norm(second_derivative(c, i)));
  }
  return s0 + s1 + s2;
}

}  // namespace tjdrag
