#include "tropembed/metric_graph.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "tropembed/errors.hpp"

namespace tropembed {

bool MetricGraph::has_vertex(std::string_view id) const {
  return std::find(vertices.begin(), vertices.end(), id) != vertices.end();
}

const MetricGraph::Edge* MetricGraph::find_edge(std::string_view id) const {
  for (const auto& e : edges) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::size_t MetricGraph::degree(std::string_view vertex) const {
  std::size_t d = 0;
  for (const auto& e : edges) {
    if (e.u == vertex) ++d;
    if (e.v == vertex) ++d;
  }
  return d;
}

std::vector<const MetricGraph::Edge*> MetricGraph::incident(std::string_view vertex) const {
  std::vector<const Edge*> out;
  for (const auto& e : edges) {
    if (e.u == vertex || e.v == vertex) out.push_back(&e);
  }
  return out;
}

void mark_infinite_vertices(MetricGraph& g) {
  g.infinite_vertices.clear();
  for (const auto& e : g.edges) {
    if (!e.length.is_infinite()) continue;
    if (e.u != e.v && g.degree(e.v) == 1) {
      g.infinite_vertices.insert(e.v);
    } else if (e.u != e.v && g.degree(e.u) == 1) {
      g.infinite_vertices.insert(e.u);
    } else {
      throw Error(ErrorCode::SchemaError, "infinite edge '" + e.id + "' has no degree-1 endpoint");
    }
  }
}

void validate(const MetricGraph& g) {
  std::set<std::string> ids(g.vertices.begin(), g.vertices.end());
  if (ids.size() != g.vertices.size()) throw Error(ErrorCode::SchemaError, "duplicate vertex id");
  if (g.vertices.empty()) throw Error(ErrorCode::SchemaError, "graph has no vertices");
  std::set<std::string> edge_ids;
  for (const auto& e : g.edges) {
    if (!edge_ids.insert(e.id).second) throw Error(ErrorCode::SchemaError, "duplicate edge id '" + e.id + "'");
    if (!ids.count(e.u) || !ids.count(e.v)) {
      throw Error(ErrorCode::SchemaError, "edge '" + e.id + "' references an unknown vertex");
    }
    if (e.length.is_infinite()) {
      bool u_inf = g.is_infinite(e.u);
      bool v_inf = g.is_infinite(e.v);
      if (u_inf == v_inf) {
        throw Error(ErrorCode::SchemaError, "infinite edge '" + e.id + "' needs exactly one infinite endpoint");
      }
      const std::string& leaf = u_inf ? e.u : e.v;
      if (g.degree(leaf) != 1) {
        throw Error(ErrorCode::SchemaError, "infinite vertex '" + leaf + "' must have degree 1");
      }
    } else if (e.length.value().sign() <= 0) {
      throw Error(ErrorCode::SchemaError, "edge '" + e.id + "' has non-positive length");
    }
  }
  for (const auto& v : g.infinite_vertices) {
    if (!ids.count(v)) throw Error(ErrorCode::SchemaError, "infinite vertex '" + v + "' is not a vertex");
    bool on_infinite_edge = false;
    for (const auto* e : g.incident(v)) on_infinite_edge = on_infinite_edge || e->length.is_infinite();
    if (!on_infinite_edge) throw Error(ErrorCode::SchemaError, "vertex '" + v + "' marked infinite without an infinite edge");
  }
  // connectivity
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::set<std::string> seen{g.vertices.front()};
  std::queue<std::string> todo;
  todo.push(g.vertices.front());
  while (!todo.empty()) {
    auto v = todo.front();
    todo.pop();
    for (const auto& w : adj[v]) {
      if (seen.insert(w).second) todo.push(w);
    }
  }
  if (seen.size() != g.vertices.size()) throw Error(ErrorCode::SchemaError, "graph is not connected");
}

namespace {

std::string fresh_vertex(const MetricGraph& g, std::string base) {
  while (g.has_vertex(base)) base += "'";
  return base;
}

std::string fresh_edge(const MetricGraph& g, std::string base) {
  while (g.find_edge(base)) base += "'";
  return base;
}

bool positive(const Length& l) { return l.is_infinite() || l.value().sign() > 0; }

}  // namespace

MetricGraph subdivide(const MetricGraph& g, std::string_view edge_id, const Length& first, const Length& second) {
  auto it = std::find_if(g.edges.begin(), g.edges.end(), [&](const auto& e) { return e.id == edge_id; });
  if (it == g.edges.end()) throw Error(ErrorCode::UnknownEdge, std::string(edge_id));
  const auto& edge = *it;
  if (!positive(first) || !positive(second)) {
    throw Error(ErrorCode::LengthMismatch, "pieces must be positive");
  }
  if (edge.length.is_infinite()) {
    // exactly the piece at the infinite vertex stays infinite
    bool inf_at_v = g.is_infinite(edge.v);
    const Length& at_inf = inf_at_v ? second : first;
    const Length& other = inf_at_v ? first : second;
    if (!at_inf.is_infinite() || other.is_infinite()) {
      throw Error(ErrorCode::LengthMismatch, "only the piece at the infinite vertex of '" + edge.id + "' may be infinite");
    }
  } else {
    if (first.is_infinite() || second.is_infinite() || first.value() + second.value() != edge.length.value()) {
      throw Error(ErrorCode::LengthMismatch, "pieces " + first.str() + " + " + second.str() +
                                                 " do not add up to " + edge.length.str() + " on '" + edge.id + "'");
    }
  }
  MetricGraph out = g;
  std::string p = fresh_vertex(g, edge.id + "/p");
  std::string e0 = fresh_edge(g, edge.id + "/0");
  std::string e1 = fresh_edge(g, edge.id + "/1");
  out.vertices.push_back(p);
  auto pos = out.edges.begin() + (it - g.edges.begin());
  MetricGraph::Edge a{e0, edge.u, p, first};
  MetricGraph::Edge b{e1, p, edge.v, second};
  *pos = a;
  out.edges.insert(pos + 1, b);
  return out;
}

MetricGraph reverse_subdivide(const MetricGraph& g, std::string_view vertex) {
  if (!g.has_vertex(vertex)) throw Error(ErrorCode::UnknownVertex, std::string(vertex));
  auto inc = g.incident(vertex);
  if (inc.size() != 2 || g.degree(vertex) != 2) {
    throw Error(ErrorCode::NotRemovable, "vertex '" + std::string(vertex) + "' does not have degree 2");
  }
  auto other = [&](const MetricGraph::Edge* e) { return e->u == vertex ? e->v : e->u; };
  std::string x = other(inc[0]);
  std::string y = other(inc[1]);
  if (x == y) {
    throw Error(ErrorCode::NotRemovable, "both edges at '" + std::string(vertex) + "' reach the same neighbour");
  }
  MetricGraph out;
  out.infinite_vertices = g.infinite_vertices;
  for (const auto& v : g.vertices) {
    if (v != vertex) out.vertices.push_back(v);
  }
  std::string merged_id = inc[0]->id + "+" + inc[1]->id;
  while (g.find_edge(merged_id)) merged_id += "'";
  for (const auto& e : g.edges) {
    if (&e == inc[0]) {
      out.edges.push_back({merged_id, x, y, inc[0]->length + inc[1]->length});
    } else if (&e != inc[1]) {
      out.edges.push_back(e);
    }
  }
  return out;
}

MetricGraph add_infinite_leaf(const MetricGraph& g, std::string_view vertex) {
  if (!g.has_vertex(vertex)) throw Error(ErrorCode::UnknownVertex, std::string(vertex));
  if (g.is_infinite(vertex)) {
    throw Error(ErrorCode::InfiniteVertex, "cannot attach an infinite edge to infinite vertex '" + std::string(vertex) + "'");
  }
  MetricGraph out = g;
  std::string leaf = fresh_vertex(g, std::string(vertex) + "/inf");
  std::string edge = fresh_edge(g, std::string(vertex) + "/ray");
  out.vertices.push_back(leaf);
  out.infinite_vertices.insert(leaf);
  out.edges.push_back({edge, std::string(vertex), leaf, Length::infinite()});
  return out;
}

MetricGraph apply(const MetricGraph& g, const Move& move) {
  switch (move.kind) {
    case Move::Kind::Subdivide: return subdivide(g, move.target, move.first, move.second);
    case Move::Kind::ReverseSubdivide: return reverse_subdivide(g, move.target);
    case Move::Kind::AddInfiniteLeaf: return add_infinite_leaf(g, move.target);
  }
  return g;
}

MetricGraph replay(const MetricGraph& g, const ModificationTrace& trace) {
  MetricGraph out = g;
  for (const auto& m : trace) out = apply(out, m);
  return out;
}

std::pair<MetricGraph, ModificationTrace> normalize_simple(const MetricGraph& g) {
  MetricGraph cur = g;
  ModificationTrace trace;
  auto push = [&](Move m) {
    cur = apply(cur, m);
    trace.push_back(std::move(m));
  };

  std::vector<std::string> loops;
  for (const auto& e : g.edges) {
    if (e.u == e.v) loops.push_back(e.id);
  }
  for (const auto& id : loops) {
    const auto* loop = cur.find_edge(id);
    const auto pos = static_cast<std::size_t>(loop - cur.edges.data());
    const Scalar len = loop->length.value();
    Scalar third = len / 3;
    push({Move::Kind::Subdivide, id, Length::finite(third), Length::finite(len - third)});
    // subdivide places the far piece right after the near one
    const std::string far = cur.edges[pos + 1].id;
    push({Move::Kind::Subdivide, far, Length::finite(third), Length::finite(third)});
  }

  std::map<std::pair<std::string, std::string>, int> seen;
  std::vector<std::string> extras;
  for (const auto& e : cur.edges) {
    auto key = std::minmax(e.u, e.v);
    if (seen[{key.first, key.second}]++ > 0) extras.push_back(e.id);
  }
  for (const auto& id : extras) {
    const Scalar len = cur.find_edge(id)->length.value();
    push({Move::Kind::Subdivide, id, Length::finite(len / 2), Length::finite(len / 2)});
  }
  return {cur, trace};
}

MetricGraph smooth(const MetricGraph& g) {
  MetricGraph cur = g;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& v : cur.vertices) {
      if (cur.is_infinite(v) || cur.degree(v) != 2) continue;
      auto inc = cur.incident(v);
      if (inc.size() != 2) continue;
      auto other = [&](const MetricGraph::Edge* e) { return e->u == v ? e->v : e->u; };
      if (other(inc[0]) == other(inc[1])) continue;
      cur = reverse_subdivide(cur, v);
      changed = true;
      break;
    }
  }
  return cur;
}

}  // namespace tropembed
