#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "tropembed/balancer.hpp"
#include "tropembed/geometry.hpp"
#include "tropembed/metric_graph.hpp"
#include "tropembed/scalar.hpp"
#include "tropembed/verify.hpp"

namespace tropembed {

/// A graph file: the graph plus the value group its lengths live in.
struct GraphDocument {
  MetricGraph graph;
  std::optional<ValueGroup> lambda;
};

/// Reads {"vertices": [...], "edges": [{"id","u","v","length"}...],
/// "lambda": {...}}. Lengths are "p/q" strings or "inf"; an edge whose
/// length is listed under lambda.lengths_in_lambda as a coefficient map may
/// omit "length". Infinite vertices are marked. Throws ParseError for
/// malformed JSON or fields and SchemaError for documents that parse but do
/// not describe a valid graph.
GraphDocument parse_graph_document(std::string_view text);
MetricGraph parse_graph(std::string_view text);

std::string emit_graph(const GraphDocument& doc);

/// Everything `embed` writes and `verify` reads back.
struct EmbeddingDocument {
  GraphDocument input;
  Mode mode = Mode::Rational;
  MetricGraph modified;
  ModificationTrace trace;
  BalancedComplex complex;
  EmbeddingMap map;
  std::size_t claimed_crossings = 0;
  bool crossings_exact = false;
  Scalar scale;
  Report report;
};

EmbeddingDocument make_document(const GraphDocument& input, const Embedding& e, Mode mode);

/// Exact JSON: rationals as "p/q", scalars with generator terms as
/// coefficient maps such as {"1": "1/2", "g": "3/1"}.
std::string emit_embedding(const EmbeddingDocument& doc);
EmbeddingDocument parse_embedding(std::string_view text);

/// The certificates alone, as emitted inside an embedding document.
std::string emit_report(const Report& report);

/// Runs the verifier on a parsed document (the stored report is ignored).
Report reverify(const EmbeddingDocument& doc);

struct SvgOptions {
  double padding = 0.1;      // fraction of the bounding box added on every side
  double ray_length = 0.25;  // rays are cut at this fraction of the box size past the box
  double width = 800;        // pixels
  bool overlay_chains = true;
  bool mark_crossings = true;
};

/// Deterministic SVG 1.1. Weights above one are labelled; crossings of edge
/// images are marked; edge chains are overlaid in colour when requested.
std::string render_svg(const BalancedComplex& c, const EmbeddingMap* map = nullptr, const SvgOptions& options = {});

}  // namespace tropembed
