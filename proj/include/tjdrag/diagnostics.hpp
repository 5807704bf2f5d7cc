#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "tjdrag/geometry.hpp"
#include "tjdrag/tension.hpp"

namespace tjdrag {

/// Sign of the orientation determinant of (a, b, c): +1 counterclockwise,
/// -1 clockwise, 0 collinear. Floating-point filter with a static error
/// bound, falling back to exact expansion arithmetic when the filter cannot
/// certify the sign.
int orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

enum class ContactKind { Crossing, Touch };

/// Contact between two polyline segments of the network. Curve indices are
/// 0-based; curve_a == curve_b is a self-intersection.
struct IntersectionEvent {
  double time = 0.0;
  std::size_t curve_a = 0;
  std::size_t segment_a = 0;
  double param_a = 0.0;  // curve parameter x in [0, 1]
  std::size_t curve_b = 0;
  std::size_t segment_b = 0;
  double param_b = 0.0;
  Vec2 point;
  ContactKind kind = ContactKind::Crossing;
};

/// Brute-force test of all segment pairs. Adjacent segments of one curve
/// and the pairs of first segments that meet at the junction are skipped.
/// Proper crossings are reported as Crossing; contacts where an orientation
/// is exactly zero are reported as Touch.
std::vector<IntersectionEvent> detect_intersections(const Network& net, double time = 0.0);

/// Counterclockwise gap from each curve's outgoing junction tangent to the
/// next tangent. The three gaps sum to 2*pi.
std::array<double, 3> junction_angles(const Network& net, double delta_min = kDefaultDeltaMin);

double network_energy(const Network& net, const std::array<double, 3>& tensions);
double network_energy(const Network& net, const OrientationState& theta, const TensionModel& m);

/// sup|p| + sup|p_x| + sup|p_xx| over the samples.
double discrete_c2_norm(const Curve& c);

}  // namespace tjdrag
