#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tropembed/geometry.hpp"
#include "tropembed/metric_graph.hpp"
#include "tropembed/planar_layout.hpp"
#include "tropembed/scalar.hpp"
#include "tropembed/verify.hpp"

namespace tropembed {

struct BalancingRay {
  PrimitiveVector direction;
  std::int64_t weight = 1;
};

/// The ray that cancels a vertex defect: direction -defect / g with weight
/// g = gcd of the coordinates; nothing for a zero defect.
std::optional<BalancingRay> balancing_ray(IntVector defect);

/// Replaces every free segment of the finite chains whose direction is not
/// a multiple of (1,0), (0,1), (1,1) or (1,-1) by a zigzag along the two
/// neighbouring directions of that list, using the fewest teeth (1, 2, 4,
/// ... 1024) for which the zigzag meets no other segment and no ray
/// (-1,-1) at the end of an infinite chain. When a zigzag from the endpoints
/// collides, one over the middle three quarters is tried, with the two end
/// eighths kept straight and rigid. Segments without such a zigzag are kept.
Drawing octilinear_refine(const Drawing& d, const std::vector<char>& infinite);

/// Scale for a drawing whose chains must reach the given lengths (nullopt
/// for infinite edges). With X_e the drawn length of chain e, the scale is
/// s = base * 2^k with base = lambda.base_scale() and k the largest integer
/// (k <= 0 unless `enlarge`) such that s X_e < l_e for every finite chain.
/// Rigid segments keep their scaled length; free segment j of chain e gets
/// s x_j + (l_e - s X_e) w_j / W_e, with weights w (one per chain segment,
/// equal when empty) and W_e the sum over the free segments of e.
struct Fit {
  Scalar scale;
  std::vector<std::vector<std::optional<Scalar>>> target;  // per chain segment; nullopt keeps the length
};

Fit scale_to_fit(const Drawing& d, const std::vector<std::optional<Scalar>>& lengths,
                 const ValueGroup& lambda = ValueGroup::rationals(), bool enlarge = false,
                 std::span<const std::vector<Rational>> weights = {});

/// The region a staircase may occupy: origin + a u + b v with a in
/// [length/3, 2 length/3] and b in [0, epsilon] (or [-epsilon, 0] when
/// flipped), matching build_staircase.
struct Corridor {
  Point origin;
  PrimitiveVector u;
  Scalar length;  // tropical length of the host segment
  Scalar epsilon;
  bool flip = false;

  PrimitiveVector v() const { return flip ? PrimitiveVector{u.n, -u.m} : PrimitiveVector{-u.n, u.m}; }
  std::vector<Point> corners() const;
};

/// Exact separating-axis tests on closed sets.
bool corridor_meets_segment(const Corridor& c, const Point& p, const Point& q);
bool corridor_meets_ray(const Corridor& c, const Point& apex, const PrimitiveVector& d);
bool corridors_meet(const Corridor& a, const Corridor& b);

/// One corridor per host segment, in host order. Widths start at the
/// smallest power-of-two multiple of the host length that reaches the
/// diameter of the complex (capped by `cap`) and are halved until the corridor is
/// disjoint from every other segment and ray of `c` and from the corridors
/// placed before it; the unflipped side is tried first at every width.
std::vector<Corridor> place_corridors(const BalancedComplex& c, std::span<const std::size_t> hosts,
                                      const std::optional<Scalar>& cap, Execution exec = Execution::Parallel);

/// Adds rays cancelling every vertex defect. A ray that would run along an
/// incident element, through another vertex or through one of `avoid` is
/// replaced by two rays whose directions sum to the same defect. Returns the
/// indices of the added rays.
std::vector<std::size_t> attach_balancing_rays(BalancedComplex& c, std::span<const Point> avoid = {});

enum class Mode { Rational, Lambda };
enum class CrossingSolver { Exact, Heuristic };

struct EmbedOptions {
  Mode mode = Mode::Rational;
  ValueGroup lambda;  // used in lambda mode
  CrossingSolver solver = CrossingSolver::Exact;
  std::uint64_t budget = 5'000'000;
  std::optional<Scalar> epsilon;  // cap on corridor widths
  std::uint64_t seed = 0;
  Execution exec = Execution::Parallel;
};

struct Embedding {
  BalancedComplex complex;
  EmbeddingMap map;
  MetricGraph modified;  // the simple graph actually embedded
  ModificationTrace trace;
  std::size_t crossings = 0;  // from the crossing solver
  bool crossings_exact = false;
  Scalar scale;
  std::vector<std::size_t> balancing_rays;
  Report report;
};

/// Normalize, planarize, draw, orthogonalize crossings, scale, widen every
/// free segment into a staircase inside its corridor, balance. The report
/// comes from the independent verifier.
Embedding embed_isometric(const MetricGraph& g, const EmbedOptions& options = {});

}  // namespace tropembed
