#include <gtest/gtest.h>

#include <random>

#include "tropembed/creneau.hpp"
#include "tropembed/errors.hpp"
#include "tropembed/value_group.hpp"

using namespace tropembed;

namespace {

Rational q(const char* s) { return parse_rational(s); }
Point P(Scalar x, Scalar y) { return {std::move(x), std::move(y)}; }

// Exact length oracle: sum of per-segment lengths from coordinate deltas,
// using the L-infinity-over-gcd form valid for rational segments.
Rational rational_length(const Point& a, const Point& b) {
  Rational dx = b.x.rational_part() - a.x.rational_part();
  Rational dy = b.y.rational_part() - a.y.rational_part();
  if (dx == 0) return abs(dy);
  if (dy == 0) return abs(dx);
  Rational slope = dy / dx;
  BigInt den = boost::multiprecision::denominator(slope);
  return abs(dx) / Rational(den);
}

// Frame coordinates (along u, along v) of p relative to a, from the 2x2
// inverse of [u v].
std::pair<Scalar, Scalar> frame_coords(const CreneauPath& c, const Point& a, const Point& p) {
  Point w = p - a;
  std::int64_t det = c.u.m * c.v.n - c.u.n * c.v.m;
  Scalar s = (w.x * c.v.n - w.y * c.v.m) / det;
  Scalar t = (w.y * c.u.m - w.x * c.u.n) / det;
  return {s, t};
}

void check_contract(const CreneauPath& c, const CreneauSpec& spec) {
  ASSERT_GE(c.points.size(), 4u);
  EXPECT_EQ(c.points.front(), spec.a);
  EXPECT_EQ(c.points.back(), spec.b);
  EXPECT_EQ(c.length(), spec.target);
  EXPECT_EQ(c.teeth % 2, 0);
  EXPECT_LE(c.delta, spec.epsilon);
  Scalar x = tropical_length(spec.a, spec.b);
  for (const auto& p : c.points) {
    auto [s, t] = frame_coords(c, spec.a, p);
    EXPECT_GE(s.sign(), 0);
    EXPECT_LE(s, x);
    EXPECT_GE(t.sign(), 0);
    EXPECT_LE(t, spec.epsilon);
  }
  // alternation and quarter turns
  for (std::size_t i = 0; i + 1 < c.segments.size(); ++i) {
    auto d1 = primitive_vector(c.segments[i].a, c.segments[i].b);
    auto d2 = primitive_vector(c.segments[i + 1].a, c.segments[i + 1].b);
    bool d1u = d1 == c.u || d1 == -c.u;
    bool d2u = d2 == c.u || d2 == -c.u;
    EXPECT_NE(d1u, d2u) << i;
  }
  // local balance with the attached rays
  BalancedComplex bc;
  for (const auto& p : c.points) bc.add_vertex(p);
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) bc.add_segment(i, i + 1);
  for (std::size_t i = 0; i < c.rays.size(); ++i) bc.add_ray(i + 1, c.rays[i].direction, c.rays[i].weight);
  for (std::size_t i = 1; i + 1 < c.points.size(); ++i) EXPECT_TRUE(balance_defect(bc, i).is_zero()) << i;
}

// Turn sign of each interior vertex in the (u, v) frame: +1 left, -1 right.
std::vector<int> turn_signs(const CreneauPath& c) {
  std::vector<int> out;
  for (std::size_t i = 0; i + 1 < c.segments.size(); ++i) {
    auto d1 = primitive_vector(c.segments[i].a, c.segments[i].b);
    auto d2 = primitive_vector(c.segments[i + 1].a, c.segments[i + 1].b);
    std::int64_t cr = cross(d1, d2);
    out.push_back(cr > 0 ? 1 : -1);
  }
  return out;
}

}  // namespace

TEST(Creneau, Params) {
  auto p = creneau_params(Scalar(1), Scalar(2), Scalar(q("3/10")));
  EXPECT_EQ(p.m, 4);
  EXPECT_EQ(p.delta, Scalar(q("1/4")));
  auto r = creneau_params(Scalar(1), Scalar(q("3/2")), Scalar(q("1/2")));
  EXPECT_EQ(r.m, 2);
  EXPECT_EQ(r.delta, Scalar(q("1/4")));
  try {
    creneau_params(Scalar(1), Scalar(1), Scalar(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidTarget);
  }
}

// Formula oracle for m over random inputs.
TEST(Creneau, ParamsMatchFormula) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> n(1, 200), d(1, 30);
  for (int i = 0; i < 300; ++i) {
    Rational x(n(rng), d(rng)), gap(n(rng), d(rng)), eps(n(rng), 10 * d(rng));
    auto p = creneau_params(Scalar(x), Scalar(x + gap), Scalar(eps));
    Rational ratio = gap / eps;
    BigInt fl = floor(ratio);
    BigInt expect = fl + 1;
    if (expect % 2 != 0) expect += 1;
    EXPECT_EQ(BigInt(p.m), expect);
    EXPECT_EQ(p.delta * p.m, Scalar(gap));
  }
}

TEST(Creneau, AxisAlignedExample) {
  CreneauSpec spec{P(0, 0), P(1, 0), Scalar(2), Scalar(q("3/10"))};
  auto c = insert_creneau(spec);
  check_contract(c, spec);
  int verticals = 0;
  Rational horizontal = 0;
  for (const auto& s : c.segments) {
    if (s.a.x == s.b.x) {
      ++verticals;
      EXPECT_EQ(rational_length(s.a, s.b), q("1/4"));
    } else {
      horizontal += rational_length(s.a, s.b);
    }
  }
  EXPECT_EQ(verticals, 4);
  EXPECT_EQ(horizontal, 1);
  // the period-four turn pattern, returning to the host line
  EXPECT_EQ(turn_signs(c), (std::vector<int>{1, -1, -1, 1, 1, -1, -1, 1}));
  // diagonal rays
  EXPECT_EQ(c.rays.front().direction, (PrimitiveVector{1, -1}));
  EXPECT_EQ(c.rays.size(), 8u);
}

TEST(Creneau, AxisAlignedRejectsOtherFrames) {
  CreneauSpec spec{P(0, 0), P(2, 4), Scalar(3), Scalar(q("1/5"))};
  try {
    insert_creneau(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FrameMismatch);
  }
  CreneauSpec shorter{P(0, 0), P(3, 0), Scalar(2), Scalar(1)};
  EXPECT_THROW(insert_creneau(shorter), Error);
}

TEST(Creneau, TinyEpsilonManyTeeth) {
  CreneauSpec spec{P(0, 0), P(3, 0), Scalar(q("3001/1000")), Scalar(q("1/100000"))};
  auto c = insert_creneau(spec);
  EXPECT_EQ(c.teeth, 102);  // ratio is exactly 100, strictly greater forces 102
  check_contract(c, spec);
}

TEST(Creneau, Rotated) {
  CreneauSpec spec{P(0, 0), P(2, 4), Scalar(3), Scalar(q("1/5"))};
  auto c = insert_creneau_rotated(spec);
  EXPECT_EQ(c.u, (PrimitiveVector{1, 2}));
  EXPECT_EQ(c.v, (PrimitiveVector{-2, 1}));
  check_contract(c, spec);
  CreneauSpec diag{P(0, 0), P(-1, -1), Scalar(2), Scalar(q("1/3"))};
  check_contract(insert_creneau_rotated(diag), diag);
  CreneauSpec axis{P(0, 0), P(1, 0), Scalar(2), Scalar(q("3/10"))};
  EXPECT_EQ(insert_creneau_rotated(axis).points, insert_creneau(axis).points);
}

TEST(Creneau, LambdaStaircaseLengths) {
  CreneauSpec spec{P(0, 0), P(1, 0), Scalar(2), Scalar(q("1/4"))};
  auto c = insert_creneau_lambda(spec, ValueGroup::rationals());
  EXPECT_EQ(c.teeth, 4);
  check_contract(c, spec);
  EXPECT_EQ(rational_length(c.points[0], c.points[1]), q("1/3"));
  EXPECT_EQ(rational_length(c.points[2], c.points[3]), q("1/9"));
  EXPECT_EQ(rational_length(c.points[1], c.points[2]), q("1/4"));
  CreneauSpec bad{P(0, 0), P(2, 0), Scalar(1), Scalar(q("1/4"))};
  EXPECT_THROW(insert_creneau_lambda(bad, ValueGroup::rationals()), Error);
}

// n = 1: two verticals of (l - x)/2 and one inner horizontal of x/3.
TEST(Creneau, LambdaSingleTooth) {
  auto g = make_generator("g", "2.2360679");
  ValueGroup L(true, {g});
  Scalar x = Scalar::of(g);
  Scalar l = x + Scalar(q("1/2"));
  CreneauSpec spec{P(0, 0), P(x, 0), l, Scalar(1)};
  auto c = insert_creneau_lambda(spec, L);
  ASSERT_EQ(c.teeth, 2);
  EXPECT_EQ(tropical_length(c.points[1], c.points[2]), Scalar(q("1/4")));
  EXPECT_EQ(tropical_length(c.points[2], c.points[3]), x / 3);
  EXPECT_EQ(c.length(), l);
  for (const auto& p : c.points) {
    EXPECT_TRUE(L.contains(p.x));
    EXPECT_TRUE(L.contains(p.y));
  }
  EXPECT_THROW(insert_creneau_lambda(spec, ValueGroup::rationals()), Error);
}

// Random exact-elongation and containment over rotated hosts.
TEST(Creneau, RandomProperty) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> c(-9, 9), n(1, 50), d(1, 12);
  for (int i = 0; i < 150; ++i) {
    IntVector dir{c(rng), c(rng)};
    if (dir.is_zero()) continue;
    Point a = P(Rational(c(rng), d(rng)), Rational(c(rng), d(rng)));
    Rational len(n(rng), d(rng));
    Point b = a + primitive_vector(P(0, 0), P(dir.x, dir.y)) * Scalar(len);
    CreneauSpec spec{a, b, Scalar(len + Rational(n(rng), d(rng))), Scalar(Rational(n(rng), 20 * d(rng))), i % 2 == 1};
    check_contract(insert_creneau_rotated(spec), spec);
  }
}

// Frame equivariance for the unimodular (axis) frames.
TEST(Creneau, FrameEquivariance) {
  CreneauSpec base{P(0, 0), P(3, 0), Scalar(5), Scalar(q("1/3"))};
  auto c0 = insert_creneau(base);
  const UnimodularMatrix frames[] = {{0, -1, 1, 0}, {-1, 0, 0, -1}, {0, 1, -1, 0}, {1, 0, 0, -1}};
  for (const auto& M : frames) {
    CreneauSpec spec{M.apply(base.a), M.apply(base.b), base.target, base.epsilon, M.det() < 0};
    auto c = insert_creneau_rotated(spec);
    ASSERT_EQ(c.points.size(), c0.points.size());
    for (std::size_t i = 0; i < c.points.size(); ++i) EXPECT_EQ(c.points[i], M.apply(c0.points[i]));
    for (std::size_t i = 0; i < c.rays.size(); ++i) EXPECT_EQ(c.rays[i].direction, M.apply(c0.rays[i].direction));
  }
}
