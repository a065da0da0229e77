#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/make_biconnected_planar.hpp>
#include <boost/graph/make_connected.hpp>
#include <boost/graph/make_maximal_planar.hpp>
#include <boost/graph/planar_face_traversal.hpp>

#include "tropembed/errors.hpp"
#include "tropembed/planar_layout.hpp"

namespace tropembed {

namespace {

using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                     boost::property<boost::vertex_index_t, int>,
                                     boost::property<boost::edge_index_t, int>>;
using BEdge = boost::graph_traits<BGraph>::edge_descriptor;
using Embedding = std::vector<std::vector<BEdge>>;

void reindex(BGraph& g) {
  int i = 0;
  boost::graph_traits<BGraph>::edge_iterator it, end;
  for (boost::tie(it, end) = boost::edges(g); it != end; ++it) boost::put(boost::edge_index, g, *it, i++);
}

bool embed(BGraph& g, Embedding& emb) {
  reindex(g);
  emb.assign(boost::num_vertices(g), {});
  return boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = g,
                                             boost::boyer_myrvold_params::embedding = &emb[0]);
}

struct TriangleCollector : public boost::planar_face_traversal_visitor {
  void begin_face() { faces.emplace_back(); }
  void next_vertex(boost::graph_traits<BGraph>::vertex_descriptor v) { faces.back().push_back(v); }
  std::vector<std::vector<std::size_t>> faces;
};

int orientation(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c) {
  Rational v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return v.sign();
}

// Solves A X = B for symmetric positive definite A by elimination without
// pivoting. B has two columns.
void solve_spd(std::vector<std::vector<Rational>>& a, std::vector<std::array<Rational, 2>>& b) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rational f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) {
        if (a[k][j] != 0) a[i][j] -= f * a[k][j];
      }
      b[i][0] -= f * b[k][0];
      b[i][1] -= f * b[k][1];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = k + 1; j < n; ++j) {
      if (a[k][j] == 0) continue;
      b[k][0] -= a[k][j] * b[j][0];
      b[k][1] -= a[k][j] * b[j][1];
    }
    b[k][0] /= a[k][k];
    b[k][1] /= a[k][k];
  }
}

double area2(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

// Smallest height of the triangles at v; negative when one is flipped.
double star_quality(const std::vector<std::array<double, 2>>& pos, const std::vector<std::vector<std::size_t>>& faces,
                    const std::vector<int>& sign, const std::vector<std::size_t>& star) {
  double q = std::numeric_limits<double>::infinity();
  for (std::size_t f : star) {
    const auto& t = faces[f];
    const double area = sign[f] * area2(pos[t[0]], pos[t[1]], pos[t[2]]);
    double longest = 0;
    for (int i = 0; i < 3; ++i) {
      const auto& a = pos[t[i]];
      const auto& b = pos[t[(i + 1) % 3]];
      longest = std::max(longest, std::hypot(a[0] - b[0], a[1] - b[1]));
    }
    q = std::min(q, area / std::max(longest, 1e-300));
  }
  return q;
}

// Local smoothing of the interior vertices: each one moves to the best of
// a ring of candidates when that raises the smallest height of the
// triangles around it. Orientations never flip.
std::vector<std::array<double, 2>> smooth(std::vector<std::array<double, 2>> pos,
                                          const std::vector<std::vector<std::size_t>>& faces,
                                          const std::vector<int>& sign, const std::vector<char>& fixed) {
  const std::size_t n = pos.size();
  std::vector<std::vector<std::size_t>> star(n);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (std::size_t v : faces[f]) star[v].push_back(f);
  }
  constexpr int kDirections = 16;
  const double pi = std::acos(-1.0);
  for (int round = 0; round < 200; ++round) {
    bool moved = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (fixed[v]) continue;
      const auto old = pos[v];
      double best = star_quality(pos, faces, sign, star[v]);
      auto best_at = old;
      for (double step : {4.0, 2.0, 1.0, 0.5}) {
        const double r = step * std::max(best, 1e-9);
        for (int i = 0; i < kDirections; ++i) {
          const double angle = 2 * pi * i / kDirections;
          pos[v] = {old[0] + r * std::cos(angle), old[1] + r * std::sin(angle)};
          const double q = star_quality(pos, faces, sign, star[v]);
          if (q > best * (1 + 1e-6)) {
            best = q;
            best_at = pos[v];
          }
        }
      }
      pos[v] = best_at;
      moved = moved || best_at != old;
    }
    if (!moved) break;
  }
  return pos;
}

Rational snap(const Rational& v, long k) {
  Rational scaled = v * pow2(k);
  BigInt r = floor(scaled + Rational(1, 2));
  return Rational(r) / pow2(k);
}

}  // namespace

std::size_t Drawing::segment_count() const {
  std::size_t n = 0;
  for (const auto& c : chains) n += c.empty() ? 0 : c.size() - 1;
  return n;
}

Drawing straight_line_draw(const Planarization& input, std::size_t corner) {
  Planarization p = make_simple(input);
  const std::size_t n = p.vertex_count;
  Drawing d;
  d.chains = p.chains;
  for (const auto& c : d.chains) d.rigid.emplace_back(c.empty() ? 0 : c.size() - 1, 0);
  d.outer_corner = corner;
  d.position.assign(n, {Rational(0), Rational(0)});

  if (n <= 3) {
    // the graph is a path or triangle; place it on the unit triangle
    const RationalPoint spots[3] = {{0, 0}, {1, 0}, {0, 1}};
    std::size_t next = 1;
    for (std::size_t v = 0; v < n; ++v) d.position[v] = v == corner ? spots[0] : spots[next++];
  } else {
    BGraph g(n);
    for (auto [u, v] : p.planar_graph().edges) boost::add_edge(u, v, g);
    Embedding emb;
    if (!embed(g, emb)) throw Error(ErrorCode::NotPlanar, "planarization is not planar");
    boost::make_connected(g);
    if (!embed(g, emb)) throw Error(ErrorCode::NotPlanar, "lost planarity while connecting");
    boost::make_biconnected_planar(g, &emb[0]);
    if (!embed(g, emb)) throw Error(ErrorCode::NotPlanar, "lost planarity while biconnecting");
    boost::make_maximal_planar(g, &emb[0]);
    if (!embed(g, emb)) throw Error(ErrorCode::NotPlanar, "lost planarity while triangulating");

    TriangleCollector tc;
    boost::planar_face_traversal(g, &emb[0], tc);
    std::size_t outer = tc.faces.size();
    for (std::size_t f = 0; f < tc.faces.size(); ++f) {
      if (tc.faces[f].size() != 3) throw Error(ErrorCode::NotPlanar, "triangulation left a non-triangular face");
      if (outer == tc.faces.size() && std::count(tc.faces[f].begin(), tc.faces[f].end(), corner)) outer = f;
    }
    auto tri = tc.faces[outer];
    std::rotate(tri.begin(), std::find(tri.begin(), tri.end(), corner), tri.end());
    std::vector<long> index(n, -1);
    std::vector<std::size_t> interior;
    for (std::size_t v = 0; v < n; ++v) {
      if (std::find(tri.begin(), tri.end(), v) == tri.end()) {
        index[v] = static_cast<long>(interior.size());
        interior.push_back(v);
      }
    }
    d.position[tri[0]] = {0, 0};
    d.position[tri[1]] = {1, 0};
    d.position[tri[2]] = {0, 1};

    const std::size_t m = interior.size();
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
    std::vector<std::array<Rational, 2>> b(m, {Rational(0), Rational(0)});
    for (std::size_t i = 0; i < m; ++i) {
      std::set<std::size_t> nbrs;
      boost::graph_traits<BGraph>::adjacency_iterator it, end;
      for (boost::tie(it, end) = boost::adjacent_vertices(interior[i], g); it != end; ++it) nbrs.insert(*it);
      a[i][i] = Rational(static_cast<long>(nbrs.size()));
      for (std::size_t w : nbrs) {
        if (index[w] >= 0) {
          a[i][static_cast<std::size_t>(index[w])] -= 1;
        } else {
          b[i][0] += d.position[w].x;
          b[i][1] += d.position[w].y;
        }
      }
    }
    solve_spd(a, b);
    std::vector<RationalPoint> exact = d.position;
    for (std::size_t i = 0; i < m; ++i) exact[interior[i]] = {b[i][0], b[i][1]};

    std::vector<int> sign(tc.faces.size());
    for (std::size_t f = 0; f < tc.faces.size(); ++f) {
      const auto& t = tc.faces[f];
      sign[f] = orientation(exact[t[0]], exact[t[1]], exact[t[2]]);
      if (sign[f] == 0) throw Error(ErrorCode::NotPlanar, "degenerate barycentric triangle");
    }
    std::vector<std::array<double, 2>> approx(n);
    std::vector<char> fixed(n, 0);
    for (std::size_t v = 0; v < n; ++v) approx[v] = {to_double(exact[v].x), to_double(exact[v].y)};
    for (std::size_t v : tri) fixed[v] = 1;
    approx = smooth(std::move(approx), tc.faces, sign, fixed);
    std::vector<RationalPoint> spread(n);
    for (std::size_t v = 0; v < n; ++v) spread[v] = {Rational(approx[v][0]), Rational(approx[v][1])};

    auto snapped = [&](const std::vector<RationalPoint>& from) {
      for (long k = 2; k <= 4096; ++k) {
        for (std::size_t v = 0; v < n; ++v) d.position[v] = {snap(from[v].x, k), snap(from[v].y, k)};
        bool ok = true;
        for (std::size_t f = 0; f < tc.faces.size() && ok; ++f) {
          const auto& t = tc.faces[f];
          ok = orientation(d.position[t[0]], d.position[t[1]], d.position[t[2]]) == sign[f];
        }
        if (ok) return true;
      }
      return false;
    };
    if (!snapped(spread) && !snapped(exact)) d.position = exact;
  }

  for (const auto& dm : p.dummies) {
    d.crossings.push_back({dm.edge_a, dm.edge_b, d.position[dm.vertex], dm.vertex});
  }
  return d;
}

namespace {

// Strict angular order of directions starting at the positive x-axis.
bool angle_less(const RationalPoint& a, const RationalPoint& b) {
  auto half = [](const RationalPoint& v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; };
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return (a.x * b.y - a.y * b.x) > 0;
}

std::pair<std::size_t, std::size_t> chain_neighbours(const std::vector<std::size_t>& chain, std::size_t v) {
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
    if (chain[i] == v) return {chain[i - 1], chain[i + 1]};
  }
  throw Error(ErrorCode::NotPlanar, "dummy vertex is not interior to its chain");
}

}  // namespace

std::vector<std::size_t> non_alternating_crossings(const Drawing& d) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < d.crossings.size(); ++i) {
    const auto& c = d.crossings[i];
    if (!c.vertex) continue;
    const auto& at = d.position[*c.vertex];
    auto [a1, a2] = chain_neighbours(d.chains[c.edge_a], *c.vertex);
    auto [b1, b2] = chain_neighbours(d.chains[c.edge_b], *c.vertex);
    std::vector<std::pair<RationalPoint, int>> arms;
    for (auto [v, s] : {std::pair{a1, 0}, {a2, 0}, {b1, 1}, {b2, 1}}) {
      arms.push_back({{d.position[v].x - at.x, d.position[v].y - at.y}, s});
    }
    std::sort(arms.begin(), arms.end(), [](const auto& x, const auto& y) { return angle_less(x.first, y.first); });
    bool alternating = arms[0].second != arms[1].second && arms[1].second != arms[2].second &&
                       arms[2].second != arms[3].second;
    if (!alternating) bad.push_back(i);
  }
  return bad;
}

BalancedComplex to_complex(const Drawing& d) {
  BalancedComplex c;
  for (const auto& p : d.position) c.add_vertex({Scalar(p.x), Scalar(p.y)});
  for (const auto& chain : d.chains) {
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) c.add_segment(chain[i], chain[i + 1]);
  }
  return c;
}

std::vector<std::pair<std::size_t, std::size_t>> crossing_pattern(const Drawing& d) {
  std::vector<std::size_t> owner;
  for (std::size_t e = 0; e < d.chains.size(); ++e) {
    for (std::size_t i = 0; i + 1 < d.chains[e].size(); ++i) owner.push_back(e);
  }
  BalancedComplex c = to_complex(d);
  std::vector<ElementId> all = all_elements(c);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& rec : crossings(c, all)) {
    auto pr = std::minmax(owner[rec.first.index], owner[rec.second.index]);
    out.push_back({pr.first, pr.second});
  }
  for (const auto& x : d.crossings) {
    if (x.vertex) out.push_back({x.edge_a, x.edge_b});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Drawing rationalize_vertices(const std::vector<std::pair<double, double>>& position, const LayoutGraph& g) {
  using P = std::pair<double, double>;
  auto orient = [](const P& a, const P& b, const P& c) {
    return (b.first - a.first) * (c.second - a.second) - (b.second - a.second) * (c.first - a.first);
  };
  double scale = 1e-300;
  for (const auto& p : position) scale = std::max({scale, std::abs(p.first), std::abs(p.second)});
  const double tol = 1e-9 * scale * scale;

  std::vector<std::pair<std::size_t, std::size_t>> expected;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [a, b] = g.edges[e];
    for (std::size_t v = 0; v < g.n; ++v) {
      if (v == a || v == b) continue;
      const P &pa = position[a], &pb = position[b], &pv = position[v];
      double along = (pv.first - pa.first) * (pb.first - pa.first) + (pv.second - pa.second) * (pb.second - pa.second);
      double len2 = (pb.first - pa.first) * (pb.first - pa.first) + (pb.second - pa.second) * (pb.second - pa.second);
      if (std::abs(orient(pa, pb, pv)) <= tol && along >= -tol && along <= len2 + tol) {
        throw Error(ErrorCode::PerturbationFailed, "vertex " + std::to_string(v) + " lies on edge " + std::to_string(e));
      }
    }
    for (std::size_t f = e + 1; f < g.edges.size(); ++f) {
      auto [c, dd] = g.edges[f];
      if (a == c || a == dd || b == c || b == dd) continue;
      double o1 = orient(position[a], position[b], position[c]);
      double o2 = orient(position[a], position[b], position[dd]);
      double o3 = orient(position[c], position[dd], position[a]);
      double o4 = orient(position[c], position[dd], position[b]);
      if (o1 * o2 < 0 && o3 * o4 < 0) expected.push_back({e, f});
    }
  }
  std::sort(expected.begin(), expected.end());

  for (long k = 1; k <= 60; ++k) {
    Drawing d;
    const double s = std::ldexp(1.0, static_cast<int>(k));
    if (scale * s > 1e18) break;
    for (const auto& p : position) {
      d.position.push_back({Rational(static_cast<long long>(std::llround(p.first * s))) / pow2(k),
                            Rational(static_cast<long long>(std::llround(p.second * s))) / pow2(k)});
    }
    for (auto [u, v] : g.edges) {
      d.chains.push_back({u, v});
      d.rigid.push_back({0});
    }
    try {
      if (crossing_pattern(d) == expected) return d;
    } catch (const Error&) {
      // snapped drawing is degenerate; refine
    }
  }
  throw Error(ErrorCode::PerturbationFailed, "no dyadic snapping preserves the crossing pattern");
}

}  // namespace tropembed
