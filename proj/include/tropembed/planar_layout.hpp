#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tropembed/geometry.hpp"
#include "tropembed/rational.hpp"

namespace tropembed {

/// Multigraph on vertices [0, n) without loops; the input of every layout
/// stage.
struct LayoutGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

bool is_planar(const LayoutGraph& g);

/// Girth-based Euler lower bound on the crossing number.
std::size_t crossing_lower_bound(const LayoutGraph& g);

/// A planar graph obtained by replacing every crossing with a degree-4
/// dummy vertex. Vertices [0, source.n) are the input vertices; every other
/// vertex is a dummy or a bend. chains[e] lists the vertices along source
/// edge e from its first to its second endpoint.
struct Planarization {
  struct Dummy {
    std::size_t vertex = 0;
    std::size_t edge_a = 0;  // edge_a < edge_b
    std::size_t edge_b = 0;
  };

  LayoutGraph source;
  std::size_t vertex_count = 0;
  std::vector<std::vector<std::size_t>> chains;
  std::vector<Dummy> dummies;
  bool exact = false;  // crossings() is the crossing number, not only an upper bound

  std::size_t crossings() const { return dummies.size(); }
  /// Fragment edges, one per consecutive pair of every chain.
  LayoutGraph planar_graph() const;
};

/// A crossing configuration: pairs of source edges that cross, and for every
/// edge the order (by pair index) in which its crossings occur from its
/// first endpoint.
struct CrossingConfiguration {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<std::size_t>> order;
};

Planarization build_planarization(const LayoutGraph& g, const CrossingConfiguration& config);

/// Subdivides parallel fragments with bend vertices so the planar graph is
/// simple.
Planarization make_simple(const Planarization& p);

/// Drops the crossing at dummy index i, replacing the shared vertex by one
/// bend per chain.
Planarization remove_crossing(const Planarization& p, std::size_t dummy_index);

/// Exact crossing number by levelled search over crossing configurations in
/// canonical order, with planarity testing as the oracle. The first planar
/// configuration in that order is returned whatever the execution mode.
/// Throws BudgetExceeded once more than `budget` configurations would be
/// examined.
Planarization crossing_number_exact(const LayoutGraph& g, std::uint64_t budget,
                                    Execution exec = Execution::Parallel);

/// Maximal planar subgraph (edge order shuffled by seed) followed by
/// shortest dual-path insertion of every remaining edge.
Planarization planarize_heuristic(const LayoutGraph& g, std::uint64_t seed = 0);

struct RationalPoint {
  Rational x;
  Rational y;
  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
};

/// Straight-line drawing of a planarization. Each chain is a polyline over
/// drawing vertices.
struct Drawing {
  struct Crossing {
    std::size_t edge_a = 0;
    std::size_t edge_b = 0;
    RationalPoint at;
    std::optional<std::size_t> vertex;  // set while the crossing is still a dummy vertex
  };

  std::vector<RationalPoint> position;
  std::vector<std::vector<std::size_t>> chains;
  std::vector<std::vector<char>> rigid;  // per chain segment: length must not change
  std::vector<Crossing> crossings;
  std::size_t outer_corner = 0;  // an extreme vertex of the drawing

  std::size_t segment_count() const;
};

/// Tutte barycentric drawing of the triangulated planarization with the
/// outer triangle at (0,0), (1,0), (0,1); `corner` is placed at (0,0). The
/// interior vertices are then smoothed, each moving while that raises the
/// smallest height of the triangles around it, and the result is snapped to the coarsest
/// dyadic grid that still does (the exact barycentric solution is used if
/// no grid works). Throws NotPlanar if the planarization is not.
Drawing straight_line_draw(const Planarization& p, std::size_t corner = 0);

/// Dummy crossings whose four fragments do not alternate around the point.
std::vector<std::size_t> non_alternating_crossings(const Drawing& d);

/// Reroutes every dummy crossing inside an axis-parallel box of half-size
/// `radius` so the strands cross as a horizontal and a vertical bar. Throws
/// NeighborhoodConflict when a box meets anything but its own fragments.
Drawing orthogonalize_crossings(const Drawing& d, const Rational& radius);

/// Starts from half the minimum L-infinity distance between vertices and
/// halves the radius on every conflict.
Drawing orthogonalize_crossings(const Drawing& d);

/// Snaps floating-point positions of a straight-line drawing of g to dyadic
/// rationals without changing which edge pairs cross. Throws
/// PerturbationFailed when a vertex lies on a non-incident edge.
Drawing rationalize_vertices(const std::vector<std::pair<double, double>>& position, const LayoutGraph& g);

/// The drawing as a complex of weight-1 segments (no rays).
BalancedComplex to_complex(const Drawing& d);

/// Pairs of chains that cross, by exact intersection of their segments;
/// crossings at dummy vertices are included.
std::vector<std::pair<std::size_t, std::size_t>> crossing_pattern(const Drawing& d);

}  // namespace tropembed
