#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tropembed/scalar.hpp"

namespace tropembed {

/// Edge length: a positive value-group element or the distinguished tag
/// infinity. Arithmetic with infinity is limited to absorbing sums.
class Length {
 public:
  static Length finite(Scalar value) { return Length(std::move(value), false); }
  static Length infinite() { return Length(Scalar(0), true); }

  bool is_infinite() const noexcept { return infinite_; }
  /// Only meaningful for finite lengths.
  const Scalar& value() const noexcept { return value_; }

  friend Length operator+(const Length& a, const Length& b) {
    if (a.infinite_ || b.infinite_) return infinite();
    return finite(a.value_ + b.value_);
  }
  friend bool operator==(const Length& a, const Length& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  std::string str() const { return infinite_ ? "inf" : value_.str(); }

 private:
  Length(Scalar v, bool inf) : value_(std::move(v)), infinite_(inf) {}
  Scalar value_;
  bool infinite_;
};

/// Abstract metric graph. Vertex and edge ids are opaque strings that stay
/// stable across modification moves.
struct MetricGraph {
  struct Edge {
    std::string id;
    std::string u;
    std::string v;
    Length length = Length::finite(Scalar(1));
  };

  std::vector<std::string> vertices;
  std::set<std::string> infinite_vertices;
  std::vector<Edge> edges;

  bool has_vertex(std::string_view id) const;
  const Edge* find_edge(std::string_view id) const;
  std::size_t degree(std::string_view vertex) const;
  bool is_infinite(std::string_view vertex) const { return infinite_vertices.count(std::string(vertex)) > 0; }
  std::vector<const Edge*> incident(std::string_view vertex) const;
};

/// Flags the degree-1 endpoint of every infinite edge as an infinite vertex.
/// Throws SchemaError when an infinite edge has no degree-1 endpoint.
void mark_infinite_vertices(MetricGraph& g);

/// Throws SchemaError unless lengths are positive or infinite, every infinite
/// edge has exactly one infinite (degree-1) endpoint, ids are unique and the
/// graph is connected.
void validate(const MetricGraph& g);

struct Move {
  enum class Kind { Subdivide, ReverseSubdivide, AddInfiniteLeaf };
  Kind kind = Kind::Subdivide;
  std::string target;  // edge id for Subdivide, vertex id otherwise
  Length first = Length::finite(Scalar(0));
  Length second = Length::finite(Scalar(0));
};

using ModificationTrace = std::vector<Move>;

/// Replaces edge (u, v) by u -[first]- p -[second]- v through a fresh vertex.
/// The fresh vertex is "<edge>/p" and the pieces "<edge>/0", "<edge>/1".
MetricGraph subdivide(const MetricGraph& g, std::string_view edge_id, const Length& first, const Length& second);

/// Merges the two edges at a degree-2 vertex with distinct neighbours.
MetricGraph reverse_subdivide(const MetricGraph& g, std::string_view vertex);

/// Attaches "<vertex>/inf" by the infinite edge "<vertex>/ray".
MetricGraph add_infinite_leaf(const MetricGraph& g, std::string_view vertex);

MetricGraph apply(const MetricGraph& g, const Move& move);
MetricGraph replay(const MetricGraph& g, const ModificationTrace& trace);

/// Removes loops (two subdivisions at a third and two thirds) and parallel
/// edges (one midpoint each, keeping the first edge of every bundle).
std::pair<MetricGraph, ModificationTrace> normalize_simple(const MetricGraph& g);

/// Repeatedly reverse-subdivides finite degree-2 vertices.
MetricGraph smooth(const MetricGraph& g);

}  // namespace tropembed
