#pragma once

#include <cstdint>
#include <vector>

#include "tropembed/geometry.hpp"
#include "tropembed/scalar.hpp"

namespace tropembed {

struct CreneauSpec {
  Point a;  // host segment endpoints
  Point b;
  Scalar target;   // tropical length the path must reach
  Scalar epsilon;  // corridor half-width along v, in tropical units
  bool flip = false;  // teeth on the -v side
};

/// Staircase replacing the host segment. `points` runs from a to b; the
/// rays balance every staircase vertex.
struct CreneauPath {
  PrimitiveVector u;  // host direction
  PrimitiveVector v;  // tooth direction, (-q, p) or its negative when flipped
  std::int64_t teeth = 0;  // number of v-steps, always even
  Scalar delta;            // height of each v-step
  std::vector<Point> points;
  std::vector<LatticeSegment> segments;
  std::vector<LatticeRay> rays;

  Scalar length() const;
};

struct CreneauParams {
  std::int64_t m = 0;
  Scalar delta;
};

/// Smallest even m with m * epsilon > alpha - x, and delta = (alpha - x) / m.
/// Throws InvalidTarget unless alpha > x > 0 and epsilon > 0.
CreneauParams creneau_params(const Scalar& x, const Scalar& alpha, const Scalar& epsilon);

/// Axis-aligned host only; throws FrameMismatch otherwise.
CreneauPath insert_creneau(const CreneauSpec& spec);

/// Any primitive host direction u = (p, q), teeth along v = (-q, p).
CreneauPath insert_creneau_rotated(const CreneauSpec& spec);

/// 2n teeth with n minimal such that (l - x) / 2n <= epsilon. Throws
/// NotInLambda if the host endpoints or the target fall outside the group.
CreneauPath insert_creneau_lambda(const CreneauSpec& spec, const ValueGroup& lambda);

/// Lays out a staircase with exactly m teeth of height delta (m even).
CreneauPath build_staircase(const Point& a, const Point& b, std::int64_t m, const Scalar& delta, bool flip);

}  // namespace tropembed
