#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "tropembed/errors.hpp"
#include "tropembed/planar_layout.hpp"

using namespace tropembed;

namespace {

LayoutGraph complete(std::size_t n) {
  LayoutGraph g{n, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  return g;
}

LayoutGraph k33() {
  LayoutGraph g{6, {}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 3; j < 6; ++j) g.edges.push_back({i, j});
  return g;
}

LayoutGraph petersen() {
  LayoutGraph g{10, {}};
  for (std::size_t i = 0; i < 5; ++i) {
    g.edges.push_back({i, (i + 1) % 5});
    g.edges.push_back({i, i + 5});
    g.edges.push_back({5 + i, 5 + (i + 2) % 5});
  }
  return g;
}

// Stacked triangulation then random edge deletion keeping a spanning tree.
LayoutGraph random_planar(std::mt19937& rng, std::size_t n) {
  LayoutGraph g{n, {{0, 1}, {1, 2}, {0, 2}}};
  std::vector<std::array<std::size_t, 3>> faces{{0, 1, 2}, {0, 1, 2}};
  for (std::size_t v = 3; v < n; ++v) {
    std::size_t f = std::uniform_int_distribution<std::size_t>(0, faces.size() - 1)(rng);
    auto t = faces[f];
    faces.erase(faces.begin() + static_cast<long>(f));
    for (std::size_t i = 0; i < 3; ++i) g.edges.push_back({t[i], v});
    faces.push_back({t[0], t[1], v});
    faces.push_back({t[1], t[2], v});
    faces.push_back({t[0], t[2], v});
  }
  // keep a BFS tree plus a random half of the rest
  std::vector<std::size_t> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  std::shuffle(g.edges.begin(), g.edges.end(), rng);
  LayoutGraph out{n, {}};
  std::vector<std::pair<std::size_t, std::size_t>> rest;
  for (auto e : g.edges) {
    if (find(e.first) != find(e.second)) {
      comp[find(e.first)] = find(e.second);
      out.edges.push_back(e);
    } else {
      rest.push_back(e);
    }
  }
  for (auto e : rest) {
    if (rng() % 2) out.edges.push_back(e);
  }
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::SchemaError;
}

// Independent planarity oracle for tiny graphs: Euler bound plus Kuratowski
// minors is too much, so only the edge-count bound is used where decisive.
bool euler_excludes(const LayoutGraph& g) { return g.n >= 3 && g.edges.size() > 3 * g.n - 6; }

}  // namespace

TEST(Planarity, KnownGraphs) {
  EXPECT_TRUE(is_planar(complete(4)));
  EXPECT_FALSE(is_planar(complete(5)));
  EXPECT_FALSE(is_planar(k33()));
  EXPECT_FALSE(is_planar(petersen()));
  EXPECT_TRUE(euler_excludes(complete(6)));
  EXPECT_FALSE(is_planar(complete(6)));
}

TEST(Planarity, LowerBound) {
  EXPECT_EQ(crossing_lower_bound(complete(5)), 1u);
  EXPECT_EQ(crossing_lower_bound(k33()), 1u);
  EXPECT_EQ(crossing_lower_bound(petersen()), 2u);  // girth 5: 15 - floor(40/3)
  EXPECT_EQ(crossing_lower_bound(complete(4)), 0u);
}

TEST(CrossingNumber, ExactKnownValues) {
  EXPECT_EQ(crossing_number_exact(complete(4), 100000).crossings(), 0u);
  EXPECT_EQ(crossing_number_exact(complete(5), 100000).crossings(), 1u);
  EXPECT_EQ(crossing_number_exact(k33(), 100000).crossings(), 1u);
  EXPECT_EQ(crossing_number_exact(petersen(), 1000000).crossings(), 2u);
  EXPECT_EQ(crossing_number_exact(complete(6), 1000000).crossings(), 3u);
}

TEST(CrossingNumber, SerialAndParallelAgree) {
  for (const auto& g : {complete(5), k33(), petersen(), complete(6)}) {
    auto s = crossing_number_exact(g, 1000000, Execution::Serial);
    auto p = crossing_number_exact(g, 1000000, Execution::Parallel);
    EXPECT_EQ(s.chains, p.chains);
    ASSERT_EQ(s.dummies.size(), p.dummies.size());
    for (std::size_t i = 0; i < s.dummies.size(); ++i) {
      EXPECT_EQ(s.dummies[i].edge_a, p.dummies[i].edge_a);
      EXPECT_EQ(s.dummies[i].edge_b, p.dummies[i].edge_b);
    }
  }
}

TEST(CrossingNumber, BudgetExceeded) {
  EXPECT_EQ(code_of([] { crossing_number_exact(complete(6), 5); }), ErrorCode::BudgetExceeded);
}

TEST(CrossingNumber, PlanarizationIsPlanar) {
  for (const auto& g : {complete(5), k33(), petersen()}) {
    auto p = crossing_number_exact(g, 1000000);
    EXPECT_TRUE(is_planar(p.planar_graph()));
    // removing dummies recovers the input edges
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      EXPECT_EQ(p.chains[e].front(), g.edges[e].first);
      EXPECT_EQ(p.chains[e].back(), g.edges[e].second);
      for (std::size_t i = 1; i + 1 < p.chains[e].size(); ++i) EXPECT_GE(p.chains[e][i], g.n);
    }
  }
}

TEST(Heuristic, UpperBounds) {
  EXPECT_EQ(planarize_heuristic(complete(4)).crossings(), 0u);
  EXPECT_EQ(planarize_heuristic(complete(5)).crossings(), 1u);
  EXPECT_TRUE(planarize_heuristic(complete(5)).exact);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto p = planarize_heuristic(petersen(), seed);
    EXPECT_GE(p.crossings(), 2u);
    EXPECT_TRUE(is_planar(p.planar_graph()));
  }
  for (const auto& g : {complete(6), k33()}) {
    EXPECT_GE(planarize_heuristic(g).crossings(), crossing_number_exact(g, 1000000).crossings());
  }
}

TEST(Drawing, Triangle) {
  LayoutGraph g{3, {{0, 1}, {1, 2}, {2, 0}}};
  auto d = straight_line_draw(crossing_number_exact(g, 10));
  EXPECT_EQ(d.position[0], (RationalPoint{0, 0}));
  EXPECT_TRUE(crossing_pattern(d).empty());
}

TEST(Drawing, K4HasOneInteriorVertex) {
  auto d = straight_line_draw(crossing_number_exact(complete(4), 10));
  int inside = 0;
  for (const auto& p : d.position) inside += (p.x > 0 && p.y > 0 && p.x + p.y < 1) ? 1 : 0;
  EXPECT_EQ(inside, 1);
  EXPECT_TRUE(crossing_pattern(d).empty());
}

TEST(Drawing, RandomPlanarGraphsDrawWithoutCrossings) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_planar(rng, 4 + static_cast<std::size_t>(trial % 9));
    auto p = crossing_number_exact(g, 10);
    ASSERT_EQ(p.crossings(), 0u);
    auto d = straight_line_draw(p);
    EXPECT_TRUE(crossing_pattern(d).empty()) << trial;
  }
}

TEST(Drawing, PlanarizedK5Alternates) {
  auto d = straight_line_draw(crossing_number_exact(complete(5), 1000));
  ASSERT_EQ(d.crossings.size(), 1u);
  EXPECT_TRUE(non_alternating_crossings(d).empty());
  // the dummy is an honest crossing: both strands pass through it
  auto pattern = crossing_pattern(d);
  ASSERT_EQ(pattern.size(), 1u);
}

TEST(Orthogonalize, NoCrossingsIsIdentity) {
  auto d = straight_line_draw(crossing_number_exact(complete(4), 10));
  auto o = orthogonalize_crossings(d);
  EXPECT_EQ(o.position, d.position);
  EXPECT_EQ(o.chains, d.chains);
}

namespace {

// An X through (1,1) with slopes 1 and -1, the crossing as a dummy vertex.
Drawing x_crossing() {
  Drawing d;
  d.position = {{0, 0}, {2, 2}, {0, 2}, {2, 0}, {1, 1}};
  d.chains = {{0, 4, 1}, {2, 4, 3}};
  d.rigid = {{0, 0}, {0, 0}};
  d.crossings.push_back({0, 1, {1, 1}, 4});
  return d;
}

}  // namespace

TEST(Orthogonalize, XBecomesPlus) {
  auto o = orthogonalize_crossings(x_crossing());
  auto c = to_complex(o);
  auto xs = crossings(c, all_elements(c));
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_EQ(xs[0].at, (Point{Scalar(1), Scalar(1)}));
  std::vector<PrimitiveVector> dirs;
  for (auto id : {xs[0].first, xs[0].second}) {
    auto s = c.segment_geometry(id.index);
    auto v = primitive_vector(s.a, s.b);
    dirs.push_back(v.m < 0 || (v.m == 0 && v.n < 0) ? -v : v);
  }
  std::sort(dirs.begin(), dirs.end());
  EXPECT_EQ(dirs[0], (PrimitiveVector{0, 1}));
  EXPECT_EQ(dirs[1], (PrimitiveVector{1, 0}));
  // chains still join the same endpoints
  EXPECT_EQ(o.position[o.chains[0].front()], (RationalPoint{0, 0}));
  EXPECT_EQ(o.position[o.chains[1].back()], (RationalPoint{2, 0}));
}

TEST(Orthogonalize, ConflictThenSmallerRadiusSucceeds) {
  // two small X crossings at (0,0) and (3,0)
  Drawing d;
  d.position = {{-1, -1}, {1, 1}, {-1, 1}, {1, -1}, {0, 0}, {2, -1}, {4, 1}, {2, 1}, {4, -1}, {3, 0}};
  d.chains = {{0, 4, 1}, {2, 4, 3}, {5, 9, 6}, {7, 9, 8}};
  d.rigid = {{0, 0}, {0, 0}, {0, 0}, {0, 0}};
  d.crossings = {{0, 1, {0, 0}, 4}, {2, 3, {3, 0}, 9}};
  EXPECT_EQ(code_of([&] { orthogonalize_crossings(d, Rational(1)); }), ErrorCode::NeighborhoodConflict);
  auto o = orthogonalize_crossings(d);
  auto c = to_complex(o);
  auto xs = crossings(c, all_elements(c));
  ASSERT_EQ(xs.size(), 2u);
  EXPECT_EQ(xs[0].at.y, Scalar(0));
  EXPECT_EQ(xs[1].at.y, Scalar(0));
}

TEST(Rationalize, AllRationalIsIdentity) {
  LayoutGraph g{3, {{0, 1}, {1, 2}, {2, 0}}};
  auto d = rationalize_vertices({{0, 0}, {1, 0}, {0, 1}}, g);
  EXPECT_EQ(d.position[1], (RationalPoint{1, 0}));
  EXPECT_EQ(d.position[2], (RationalPoint{0, 1}));
}

TEST(Rationalize, IrrationalVertexSnaps) {
  LayoutGraph g{4, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 2}}};
  std::vector<std::pair<double, double>> pos{{0, 0}, {std::sqrt(2.0), 0}, {0, 10}, {3, 3}};
  auto d = rationalize_vertices(pos, g);
  EXPECT_LT(std::abs(to_double(d.position[1].x) - std::sqrt(2.0)), 0.5);
  EXPECT_EQ(crossing_pattern(d).size(), 1u);  // 0-3 stays outside, 3-2 crosses 1-2
}

TEST(Rationalize, CollinearFails) {
  LayoutGraph g{3, {{0, 1}, {1, 2}, {2, 0}}};
  EXPECT_EQ(code_of([&] { rationalize_vertices({{0, 0}, {1, 0}, {2, 0}}, g); }), ErrorCode::PerturbationFailed);
}

TEST(Drawing, SmoothedPositionsAreDistinctAndInside) {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = crossing_number_exact(random_planar(rng, 8 + static_cast<std::size_t>(trial)), 10);
    auto d = straight_line_draw(p);
    std::set<std::pair<double, double>> seen;
    for (const auto& q : d.position) {
      EXPECT_TRUE(seen.insert({to_double(q.x), to_double(q.y)}).second) << trial;
      EXPECT_GE(q.x, 0);
      EXPECT_GE(q.y, 0);
      EXPECT_LE(q.x + q.y, 1);
    }
    EXPECT_TRUE(crossing_pattern(d).empty()) << trial;
  }
}
