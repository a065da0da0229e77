#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/planar_face_traversal.hpp>

#include "tropembed/errors.hpp"
#include "tropembed/planar_layout.hpp"

namespace tropembed {

namespace {

using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                     boost::property<boost::vertex_index_t, int>,
                                     boost::property<boost::edge_index_t, int>>;
using BEdge = boost::graph_traits<BGraph>::edge_descriptor;

std::vector<std::pair<std::size_t, std::size_t>> simple_edges(const LayoutGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto [u, v] : g.edges) {
    if (u == v) continue;
    auto key = std::minmax(u, v);
    if (seen.insert({key.first, key.second}).second) out.push_back({u, v});
  }
  return out;
}

BGraph to_boost(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  BGraph bg(n);
  for (auto [u, v] : edges) boost::add_edge(u, v, bg);
  int i = 0;
  boost::graph_traits<BGraph>::edge_iterator it, end;
  for (boost::tie(it, end) = boost::edges(bg); it != end; ++it) boost::put(boost::edge_index, bg, *it, i++);
  return bg;
}

std::size_t girth(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::size_t best = SIZE_MAX;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> dist(n, SIZE_MAX), parent(n, SIZE_MAX);
    std::queue<std::size_t> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop();
      for (std::size_t w : adj[v]) {
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[v] + 1;
          parent[w] = v;
          q.push(w);
        } else if (parent[v] != w) {
          best = std::min(best, dist[v] + dist[w] + 1);
        }
      }
    }
  }
  return best;
}

}  // namespace

bool is_planar(const LayoutGraph& g) {
  auto edges = simple_edges(g);
  if (g.n < 5 || edges.size() < 9) return true;
  if (edges.size() > 3 * g.n - 6) return false;
  BGraph bg = to_boost(g.n, edges);
  return boost::boyer_myrvold_planarity_test(bg);
}

std::size_t crossing_lower_bound(const LayoutGraph& g) {
  auto edges = simple_edges(g);
  if (g.n < 3) return 0;
  std::size_t gi = girth(g.n, edges);
  if (gi == SIZE_MAX) return 0;
  // planar graphs of girth g have at most g(n-2)/(g-2) edges
  std::size_t cap = gi * (g.n - 2) / (gi - 2);
  return edges.size() > cap ? edges.size() - cap : 0;
}

LayoutGraph Planarization::planar_graph() const {
  LayoutGraph out;
  out.n = vertex_count;
  for (const auto& chain : chains) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) out.edges.push_back({chain[i], chain[i + 1]});
  }
  return out;
}

Planarization build_planarization(const LayoutGraph& g, const CrossingConfiguration& config) {
  Planarization p;
  p.source = g;
  p.vertex_count = g.n + config.pairs.size();
  p.chains.resize(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto& chain = p.chains[e];
    chain.push_back(g.edges[e].first);
    if (e < config.order.size()) {
      for (std::size_t pair : config.order[e]) chain.push_back(g.n + pair);
    }
    chain.push_back(g.edges[e].second);
  }
  for (std::size_t i = 0; i < config.pairs.size(); ++i) {
    auto [a, b] = std::minmax(config.pairs[i].first, config.pairs[i].second);
    p.dummies.push_back({g.n + i, a, b});
  }
  return p;
}

Planarization make_simple(const Planarization& p) {
  Planarization out = p;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto& chain : out.chains) {
    if (chain.empty()) continue;  // edge not yet inserted
    std::vector<std::size_t> next{chain.front()};
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      auto key = std::minmax(chain[i], chain[i + 1]);
      if (!seen.insert({key.first, key.second}).second) {
        std::size_t bend = out.vertex_count++;
        seen.insert({std::min(chain[i], bend), std::max(chain[i], bend)});
        seen.insert({std::min(bend, chain[i + 1]), std::max(bend, chain[i + 1])});
        next.push_back(bend);
      }
      next.push_back(chain[i + 1]);
    }
    chain = std::move(next);
  }
  return out;
}

Planarization remove_crossing(const Planarization& p, std::size_t dummy_index) {
  Planarization out = p;
  const auto dummy = out.dummies.at(dummy_index);
  // the old vertex stays on edge_a as a bend; edge_b gets a fresh bend
  std::size_t bend = out.vertex_count++;
  for (auto& v : out.chains[dummy.edge_b]) {
    if (v == dummy.vertex) v = bend;
  }
  out.dummies.erase(out.dummies.begin() + static_cast<std::ptrdiff_t>(dummy_index));
  out.exact = false;
  return out;
}

namespace {

// Enumerates crossing configurations with k crossings in canonical order:
// k-combinations of independent edge pairs lexicographically, then the
// crossing orders along every multiply-crossed edge as an odometer of
// permutations (lowest edge index varies slowest).
class ConfigGenerator {
 public:
  ConfigGenerator(std::size_t edge_count, const std::vector<std::pair<std::size_t, std::size_t>>& pairs, std::size_t k)
      : edge_count_(edge_count), pairs_(pairs), k_(k) {
    if (k_ > pairs_.size()) {
      done_ = true;
      return;
    }
    comb_.resize(k_);
    std::iota(comb_.begin(), comb_.end(), 0);
    load_combination();
  }

  bool next(CrossingConfiguration& out) {
    if (done_) return false;
    out.pairs.clear();
    for (std::size_t i : comb_) out.pairs.push_back(pairs_[i]);
    out.order = order_;
    advance();
    return true;
  }

 private:
  void load_combination() {
    order_.assign(edge_count_, {});
    for (std::size_t i = 0; i < comb_.size(); ++i) {
      order_[pairs_[comb_[i]].first].push_back(i);
      order_[pairs_[comb_[i]].second].push_back(i);
    }
    multi_.clear();
    for (std::size_t e = 0; e < edge_count_; ++e) {
      if (order_[e].size() > 1) multi_.push_back(e);
    }
  }

  void advance() {
    for (std::size_t j = multi_.size(); j-- > 0;) {
      auto& o = order_[multi_[j]];
      if (std::next_permutation(o.begin(), o.end())) return;
      // wrapped back to sorted order; carry into the next edge
    }
    // next combination
    std::size_t i = k_;
    while (i > 0) {
      --i;
      if (comb_[i] < pairs_.size() - k_ + i) {
        ++comb_[i];
        for (std::size_t j = i + 1; j < k_; ++j) comb_[j] = comb_[j - 1] + 1;
        load_combination();
        return;
      }
    }
    done_ = true;
  }

  std::size_t edge_count_;
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs_;
  std::size_t k_;
  std::vector<std::size_t> comb_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<std::size_t> multi_;
  bool done_ = false;
};

bool config_is_planar(const LayoutGraph& g, const CrossingConfiguration& c) {
  return is_planar(build_planarization(g, c).planar_graph());
}

constexpr std::size_t kChunk = 2048;

}  // namespace

Planarization crossing_number_exact(const LayoutGraph& g, std::uint64_t budget, Execution exec) {
  if (is_planar(g)) {
    auto p = build_planarization(g, {});
    p.exact = true;
    return p;
  }
  std::vector<std::pair<std::size_t, std::size_t>> independent;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    for (std::size_t f = e + 1; f < g.edges.size(); ++f) {
      auto [a, b] = g.edges[e];
      auto [c, d] = g.edges[f];
      if (a != c && a != d && b != c && b != d) independent.push_back({e, f});
    }
  }
  std::uint64_t examined = 1;
  for (std::size_t k = std::max<std::size_t>(1, crossing_lower_bound(g)); k <= independent.size(); ++k) {
    ConfigGenerator gen(g.edges.size(), independent, k);
    std::vector<CrossingConfiguration> chunk;
    while (true) {
      chunk.clear();
      CrossingConfiguration c;
      while (chunk.size() < kChunk && examined + chunk.size() < budget && gen.next(c)) chunk.push_back(c);
      if (chunk.empty()) break;
      const std::size_t count = chunk.size();
      std::size_t found = count;
      if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < count && found == count; ++i) {
          if (config_is_planar(g, chunk[i])) found = i;
        }
      } else {
#pragma omp parallel for schedule(dynamic, 16) reduction(min : found)
        for (std::size_t i = 0; i < count; ++i) {
          if (i < found && config_is_planar(g, chunk[i])) found = i;
        }
      }
      if (found < count) {
        auto p = build_planarization(g, chunk[found]);
        p.exact = true;
        return p;
      }
      examined += count;
      if (examined >= budget) {
        throw Error(ErrorCode::BudgetExceeded,
                    "no planar configuration among the first " + std::to_string(budget) + " examined");
      }
    }
  }
  throw Error(ErrorCode::NotPlanar, "no crossing configuration is planar");
}

namespace {

struct FaceCollector : public boost::planar_face_traversal_visitor {
  explicit FaceCollector(const BGraph& g) : graph(g) {}
  void begin_face() {
    vertices.emplace_back();
    edges.emplace_back();
  }
  void next_vertex(boost::graph_traits<BGraph>::vertex_descriptor v) { vertices.back().push_back(v); }
  void next_edge(BEdge e) { edges.back().push_back(static_cast<std::size_t>(boost::get(boost::edge_index, graph, e))); }

  const BGraph& graph;
  std::vector<std::vector<std::size_t>> vertices;
  std::vector<std::vector<std::size_t>> edges;
};

// Routes source edge e through the current (simple, planar) planarization.
void insert_edge(Planarization& p, std::size_t e) {
  auto fragments = p.planar_graph().edges;
  BGraph bg = to_boost(p.vertex_count, fragments);
  using Embedding = std::vector<std::vector<BEdge>>;
  Embedding embedding(p.vertex_count);
  if (!boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = bg,
                                           boost::boyer_myrvold_params::embedding = &embedding[0])) {
    throw Error(ErrorCode::NotPlanar, "partial planarization lost planarity");
  }
  // edge_index in bg follows insertion order, which is fragment order
  FaceCollector faces(bg);
  boost::planar_face_traversal(bg, &embedding[0], faces);
  const std::size_t nf = faces.vertices.size();
  std::vector<std::vector<std::size_t>> faces_of_edge(fragments.size());
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t ei : faces.edges[f]) faces_of_edge[ei].push_back(f);
  }
  auto [u, v] = p.source.edges[e];
  auto touches = [&](std::size_t f, std::size_t x) {
    const auto& vs = faces.vertices[f];
    return std::find(vs.begin(), vs.end(), x) != vs.end();
  };
  std::vector<std::size_t> dist(nf, SIZE_MAX), via_edge(nf, SIZE_MAX), prev(nf, SIZE_MAX);
  std::queue<std::size_t> q;
  for (std::size_t f = 0; f < nf; ++f) {
    if (touches(f, u)) {
      dist[f] = 0;
      q.push(f);
    }
  }
  std::size_t target = SIZE_MAX;
  while (!q.empty()) {
    std::size_t f = q.front();
    q.pop();
    if (touches(f, v)) {
      target = f;
      break;
    }
    for (std::size_t ei : faces.edges[f]) {
      for (std::size_t h : faces_of_edge[ei]) {
        if (dist[h] != SIZE_MAX) continue;
        dist[h] = dist[f] + 1;
        via_edge[h] = ei;
        prev[h] = f;
        q.push(h);
      }
    }
  }
  if (target == SIZE_MAX) throw Error(ErrorCode::NotPlanar, "endpoints lie in different components");

  std::vector<std::size_t> crossed;
  for (std::size_t f = target; dist[f] > 0; f = prev[f]) crossed.push_back(via_edge[f]);
  std::reverse(crossed.begin(), crossed.end());

  // fragment index -> (chain, position); recomputed by endpoints because
  // earlier insertions on this path shift positions
  std::vector<std::size_t> chain{u};
  for (std::size_t ei : crossed) {
    auto [a, b] = fragments[ei];
    std::size_t owner = SIZE_MAX;
    for (std::size_t c = 0; c < p.chains.size() && owner == SIZE_MAX; ++c) {
      auto& ch = p.chains[c];
      for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        if ((ch[i] == a && ch[i + 1] == b) || (ch[i] == b && ch[i + 1] == a)) {
          std::size_t d = p.vertex_count++;
          ch.insert(ch.begin() + static_cast<std::ptrdiff_t>(i) + 1, d);
          owner = c;
          chain.push_back(d);
          auto [lo, hi] = std::minmax(c, e);
          p.dummies.push_back({d, lo, hi});
          break;
        }
      }
    }
    if (owner == SIZE_MAX) throw Error(ErrorCode::NotPlanar, "crossed fragment not found");
  }
  chain.push_back(v);
  p.chains[e] = std::move(chain);
}

}  // namespace

Planarization planarize_heuristic(const LayoutGraph& g, std::uint64_t seed) {
  std::vector<std::size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  if (seed != 0) std::shuffle(order.begin(), order.end(), rng);

  LayoutGraph kept{g.n, {}};
  std::vector<std::size_t> removed;
  for (std::size_t e : order) {
    kept.edges.push_back(g.edges[e]);
    if (!is_planar(kept)) {
      kept.edges.pop_back();
      removed.push_back(e);
    }
  }
  Planarization p;
  p.source = g;
  p.vertex_count = g.n;
  p.chains.resize(g.edges.size());
  std::vector<char> is_removed(g.edges.size(), 0);
  for (std::size_t e : removed) is_removed[e] = 1;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (!is_removed[e]) p.chains[e] = {g.edges[e].first, g.edges[e].second};
  }
  p = make_simple(p);
  for (std::size_t e : removed) {
    insert_edge(p, e);
    p = make_simple(p);
  }
  std::sort(p.dummies.begin(), p.dummies.end(),
            [](const auto& a, const auto& b) { return a.vertex < b.vertex; });
  p.exact = p.crossings() == crossing_lower_bound(g);
  return p;
}

}  // namespace tropembed
