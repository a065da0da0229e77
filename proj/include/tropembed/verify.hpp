#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tropembed/geometry.hpp"
#include "tropembed/metric_graph.hpp"
#include "tropembed/scalar.hpp"

namespace tropembed {

enum class FailureCategory {
  Unbalanced,
  NonIsometric,
  BrokenChain,
  WeightNotOne,
  InfiniteEdgeWithoutRay,
  CrossingMismatch,
  InvalidGeometry,
  NonRationalSlope,
  NotInLambda,
};

std::string_view to_string(FailureCategory c) noexcept;
std::optional<FailureCategory> failure_category_from_string(std::string_view s);

struct Failure {
  FailureCategory category;
  std::string subject;  // vertex index, edge id or element
  std::string detail;
};

struct Report {
  bool balanced = true;
  bool isometric = true;
  bool chains_valid = true;
  bool weights_one = true;
  bool infinite_edges_ok = true;
  bool geometry_valid = true;
  std::size_t crossings_on_gamma = 0;  // recounted among edge images
  std::size_t crossings_claimed = 0;   // from the crossing solver
  bool crossings_exact = false;        // claimed count is the crossing number
  std::size_t ray_crossings = 0;       // balancing rays against edge images
  std::optional<bool> lambda_certified;
  std::vector<Failure> failures;

  bool ok() const { return failures.empty(); }
  bool has(FailureCategory c) const;
};

struct VerifyOptions {
  std::size_t claimed_crossings = 0;
  bool crossings_exact = false;
  std::optional<ValueGroup> lambda;  // set in lambda mode
};

/// Re-derives every certificate from the complex, the map and the graph
/// with its own predicates. Never throws on bad input; every problem is a
/// failure entry.
Report verify(const BalancedComplex& c, const EmbeddingMap& map, const MetricGraph& g, const VerifyOptions& options);

}  // namespace tropembed
