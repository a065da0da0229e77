#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tropembed/geometry.hpp"
#include "tropembed/scalar.hpp"

namespace tropembed {

/// q * lambda, coefficient-wise.
Scalar lambda_scale(const Scalar& lambda, const Rational& q);

/// Tropical length of [a, b] computed coordinate-wise. Throws
/// DegenerateSegment for coincident endpoints and NonRationalSlope when the
/// direction has no rational slope.
Scalar segment_length_in_lambda(const Point& a, const Point& b);

/// start + lambda * dir. Throws NonPositiveLength unless lambda > 0.
Point advance_point(const Point& start, const PrimitiveVector& dir, const Scalar& lambda);

/// Whether p (on [a, b]) lies at a tropical distance in the group from an
/// endpoint. Throws NotOnSegment if p is off the segment.
bool point_on_segment_in_lambda(const ValueGroup& lambda, const Point& a, const Point& b, const Point& p);

/// Piecewise-affine function on a complex: a value per vertex and an integer
/// slope per segment (oriented a -> b) and per ray.
struct PAFunction {
  std::vector<Scalar> value;
  std::vector<std::int64_t> segment_slope;
  std::vector<std::int64_t> ray_slope;
};

struct ProjectionCertificate {
  PAFunction f;  // x-coordinate
  PAFunction g;  // y-coordinate
  bool slopes_integral_coprime = true;
  bool breakpoints_in_lambda = true;
  bool cycles_close = true;  // slope * length sums to zero around every cycle
  std::vector<std::string> failures;

  bool ok() const { return slopes_integral_coprime && breakpoints_in_lambda && cycles_close; }
};

/// Coordinate projections of a complex with their certificates. Computes
/// slopes from coordinate differences and integrates them along a spanning
/// forest; every non-tree segment closes a fundamental cycle that must sum
/// to zero.
ProjectionCertificate projections(const BalancedComplex& c, const ValueGroup& lambda);

}  // namespace tropembed
