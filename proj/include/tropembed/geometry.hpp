#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tropembed/scalar.hpp"

namespace tropembed {

/// Selects between the straightforward serial reference kernel and the
/// filtered OpenMP kernel. Both return identical results.
enum class Execution { Serial, Parallel };

struct Point {
  Scalar x;
  Scalar y;

  friend bool operator==(const Point&, const Point&) = default;
  friend Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(const Point& p, const Rational& s) { return {p.x * s, p.y * s}; }
};

struct PointLess {
  bool operator()(const Point& a, const Point& b) const {
    StructuralLess less;
    if (less(a.x, b.x)) return true;
    if (less(b.x, a.x)) return false;
    return less(a.y, b.y);
  }
};

struct IntVector {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const IntVector&, const IntVector&) = default;
  friend auto operator<=>(const IntVector&, const IntVector&) = default;
  friend IntVector operator+(IntVector a, IntVector b) { return {a.x + b.x, a.y + b.y}; }
  friend IntVector operator-(IntVector a, IntVector b) { return {a.x - b.x, a.y - b.y}; }
  friend IntVector operator*(std::int64_t k, IntVector a) { return {k * a.x, k * a.y}; }
  IntVector operator-() const { return {-x, -y}; }
  bool is_zero() const { return x == 0 && y == 0; }
};

/// Coprime integer direction (m, n) != (0, 0).
struct PrimitiveVector {
  std::int64_t m = 1;
  std::int64_t n = 0;

  friend bool operator==(const PrimitiveVector&, const PrimitiveVector&) = default;
  friend auto operator<=>(const PrimitiveVector&, const PrimitiveVector&) = default;
  PrimitiveVector operator-() const { return {-m, -n}; }
  IntVector vec() const { return {m, n}; }
};

/// Splits a non-zero integer vector into weight * primitive direction.
std::pair<PrimitiveVector, std::int64_t> split_primitive(IntVector v);

inline Point operator*(const PrimitiveVector& v, const Scalar& s) { return {s * v.m, s * v.n}; }
inline Point operator+(const Point& p, const PrimitiveVector& v) { return {p.x + v.m, p.y + v.n}; }

/// w x v for a value-group vector w and an integer vector v; stays in the group.
Scalar cross(const Point& w, const PrimitiveVector& v);
Scalar dot(const Point& w, const PrimitiveVector& v);
inline std::int64_t cross(const PrimitiveVector& a, const PrimitiveVector& b) { return a.m * b.n - a.n * b.m; }

struct LatticeSegment {
  Point a;
  Point b;
  std::int64_t weight = 1;
};

struct LatticeRay {
  Point apex;
  PrimitiveVector direction;
  std::int64_t weight = 1;
};

/// Throws DegenerateSegment if the points coincide and NonRationalSlope if
/// the difference has no rational slope.
PrimitiveVector primitive_vector(const Point& from, const Point& to);

/// The positive alpha with alpha * primitive = b - a.
Scalar tropical_length(const Point& a, const Point& b);
inline Scalar tropical_length(const LatticeSegment& s) { return tropical_length(s.a, s.b); }

struct BalancedComplex {
  struct Segment {
    std::size_t a = 0;
    std::size_t b = 0;
    std::int64_t weight = 1;
  };
  struct Ray {
    std::size_t apex = 0;
    PrimitiveVector direction;
    std::int64_t weight = 1;
  };

  std::vector<Point> vertices;
  std::vector<Segment> segments;
  std::vector<Ray> rays;

  std::size_t add_vertex(Point p) {
    vertices.push_back(std::move(p));
    return vertices.size() - 1;
  }
  std::size_t add_segment(std::size_t a, std::size_t b, std::int64_t weight = 1) {
    segments.push_back({a, b, weight});
    return segments.size() - 1;
  }
  std::size_t add_ray(std::size_t apex, PrimitiveVector dir, std::int64_t weight = 1) {
    rays.push_back({apex, dir, weight});
    return rays.size() - 1;
  }

  LatticeSegment segment_geometry(std::size_t i) const {
    return {vertices[segments[i].a], vertices[segments[i].b], segments[i].weight};
  }
  LatticeRay ray_geometry(std::size_t i) const {
    return {vertices[rays[i].apex], rays[i].direction, rays[i].weight};
  }
};

/// Sum over incident segments and rays of weight * outgoing primitive.
IntVector balance_defect(const BalancedComplex& c, std::size_t vertex);
std::vector<IntVector> balance_defects(const BalancedComplex& c);
bool is_balanced(const BalancedComplex& c);

struct ElementId {
  enum class Kind { Segment, Ray };
  Kind kind = Kind::Segment;
  std::size_t index = 0;

  static ElementId segment(std::size_t i) { return {Kind::Segment, i}; }
  static ElementId ray(std::size_t i) { return {Kind::Ray, i}; }
  friend bool operator==(const ElementId&, const ElementId&) = default;
  friend auto operator<=>(const ElementId&, const ElementId&) = default;
};

struct CrossingRecord {
  ElementId first;  // first < second
  ElementId second;
  Point at;
};

std::vector<ElementId> all_elements(const BalancedComplex& c);

/// Transversal crossings in the relative interiors of the selected elements,
/// sorted by element pair. Elements meeting at a shared vertex are fine.
/// Throws OverlapError (collinear overlap of positive length),
/// TouchingElements (an endpoint on another element, or two distinct
/// vertices at one point) and MultipleCrossing (three or more elements
/// through one point).
std::vector<CrossingRecord> crossings(const BalancedComplex& c, std::span<const ElementId> restrict_to,
                                      Execution exec = Execution::Parallel);

struct UnimodularMatrix {
  std::int64_t a = 1, b = 0;
  std::int64_t c = 0, d = 1;

  std::int64_t det() const { return a * d - b * c; }
  Point apply(const Point& p) const { return {p.x * a + p.y * b, p.x * c + p.y * d}; }
  PrimitiveVector apply(const PrimitiveVector& v) const { return {a * v.m + b * v.n, c * v.m + d * v.n}; }
};

/// p -> M p + t; weights unchanged. Throws NotUnimodular unless |det M| = 1.
BalancedComplex unimodular_transform(const BalancedComplex& c, const UnimodularMatrix& m, const Point& t);

/// Correspondence from the input graph to the complex. Infinite vertices
/// have no image; an infinite edge's chain ends in a ray.
struct EmbeddingMap {
  struct EdgeImage {
    std::vector<std::size_t> segments;  // head-to-tail from the image of the first vertex
    std::optional<std::size_t> ray;
    std::string from;  // graph vertex the chain starts at
  };
  std::map<std::string, std::optional<std::size_t>> vertex_image;
  std::map<std::string, EdgeImage> edge_image;
};

}  // namespace tropembed
