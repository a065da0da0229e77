#include <gtest/gtest.h>

#include "tropembed/errors.hpp"
#include "tropembed/metric_graph.hpp"

using namespace tropembed;

namespace {

Length len(const char* s) { return Length::finite(Scalar(parse_rational(s))); }

MetricGraph triangle_with_tail() {
  MetricGraph g;
  g.vertices = {"a", "b", "c", "t"};
  g.edges = {{"ab", "a", "b", len("1")}, {"bc", "b", "c", len("2")}, {"ca", "c", "a", len("3/2")},
             {"ct", "c", "t", Length::infinite()}};
  mark_infinite_vertices(g);
  return g;
}

}  // namespace

TEST(MetricGraph, ValidateAcceptsWellFormed) {
  auto g = triangle_with_tail();
  EXPECT_TRUE(g.is_infinite("t"));
  EXPECT_NO_THROW(validate(g));
}

TEST(MetricGraph, ValidateRejectsDisconnected) {
  auto g = triangle_with_tail();
  g.vertices.push_back("z");
  EXPECT_THROW(validate(g), Error);
}

TEST(MetricGraph, SubdivideRequiresMatchingSum) {
  auto g = triangle_with_tail();
  auto s = subdivide(g, "bc", len("1/2"), len("3/2"));
  EXPECT_TRUE(s.has_vertex("bc/p"));
  EXPECT_EQ(s.find_edge("bc/0")->length, len("1/2"));
  EXPECT_EQ(s.find_edge("bc/1")->v, "c");
  try {
    subdivide(g, "bc", len("1"), len("3/2"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

TEST(MetricGraph, SubdivideInfiniteEdge) {
  auto g = triangle_with_tail();
  auto s = subdivide(g, "ct", len("5"), Length::infinite());
  EXPECT_NO_THROW(validate(s));
  EXPECT_THROW(subdivide(g, "ct", Length::infinite(), len("5")), Error);
  EXPECT_THROW(subdivide(g, "ct", len("5"), len("5")), Error);
}

TEST(MetricGraph, ReverseUndoesSubdivide) {
  auto g = triangle_with_tail();
  auto r = reverse_subdivide(subdivide(g, "ab", len("1/3"), len("2/3")), "ab/p");
  ASSERT_EQ(r.edges.size(), g.edges.size());
  EXPECT_EQ(r.edges[0].u, "a");
  EXPECT_EQ(r.edges[0].v, "b");
  EXPECT_EQ(r.edges[0].length, len("1"));
  EXPECT_EQ(r.vertices, g.vertices);
}

TEST(MetricGraph, ReverseRejects) {
  auto g = triangle_with_tail();
  try {
    reverse_subdivide(g, "c");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotRemovable);
  }
  MetricGraph two;
  two.vertices = {"x", "y"};
  two.edges = {{"e", "x", "y", len("1")}, {"f", "x", "y", len("1")}};
  EXPECT_THROW(reverse_subdivide(two, "y"), Error);
}

TEST(MetricGraph, InfiniteLeaf) {
  auto g = triangle_with_tail();
  auto h = add_infinite_leaf(g, "a");
  EXPECT_TRUE(h.is_infinite("a/inf"));
  EXPECT_TRUE(h.find_edge("a/ray")->length.is_infinite());
  EXPECT_NO_THROW(validate(h));
  try {
    add_infinite_leaf(g, "t");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfiniteVertex);
  }
}

TEST(MetricGraph, NormalizeRemovesLoopsAndParallels) {
  MetricGraph g;
  g.vertices = {"x", "y"};
  g.edges = {{"l", "x", "x", len("3")}, {"e", "x", "y", len("1")}, {"f", "y", "x", len("2")},
             {"h", "x", "y", len("4")}};
  auto [s, trace] = normalize_simple(g);
  EXPECT_EQ(trace.size(), 4u);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& e : s.edges) {
    EXPECT_NE(e.u, e.v);
    auto key = std::minmax(e.u, e.v);
    EXPECT_TRUE(pairs.insert({key.first, key.second}).second) << e.id;
  }
  // the loop becomes a triangle of three equal sides
  Scalar loop_total(0);
  for (const auto& e : s.edges) {
    if (e.id.rfind("l/", 0) == 0) {
      EXPECT_EQ(e.length, len("1"));
      loop_total += e.length.value();
    }
  }
  EXPECT_EQ(loop_total, Scalar(3));
  auto replayed = replay(g, trace);
  EXPECT_EQ(replayed.vertices, s.vertices);
  // smoothing cannot recreate the loop, so it stops at a 2-cycle
  EXPECT_EQ(smooth(s).edges.size(), 5u);
}
