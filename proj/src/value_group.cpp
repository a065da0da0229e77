#include "tropembed/value_group.hpp"

#include <numeric>
#include <queue>

#include "tropembed/errors.hpp"

namespace tropembed {

namespace {

struct Step {
  std::int64_t m = 0;
  std::int64_t n = 0;
  Scalar length;
};

// Primitive direction and length of b - a straight from the coordinates.
Step decompose(const Point& a, const Point& b) {
  Scalar dx = b.x - a.x;
  Scalar dy = b.y - a.y;
  if (dx.is_zero() && dy.is_zero()) throw Error(ErrorCode::DegenerateSegment, "coincident endpoints");
  if (dx.is_zero()) return {0, dy.sign(), dy.sign() > 0 ? dy : -dy};
  if (dy.is_zero()) return {dx.sign(), 0, dx.sign() > 0 ? dx : -dx};
  auto slope = dy.ratio_to(dx);
  if (!slope) throw Error(ErrorCode::NonRationalSlope, "(" + dx.str() + ", " + dy.str() + ")");
  const auto& num = boost::multiprecision::numerator(*slope);
  const auto& den = boost::multiprecision::denominator(*slope);
  if (abs(num) > INT64_MAX / 2 || den > INT64_MAX / 2) {
    throw Error(ErrorCode::NonRationalSlope, "slope out of integer range");
  }
  std::int64_t s = dx.sign();
  Step st{s * den.convert_to<std::int64_t>(), s * num.convert_to<std::int64_t>(), Scalar(0)};
  st.length = dx / Rational(st.m);
  return st;
}

}  // namespace

Scalar lambda_scale(const Scalar& lambda, const Rational& q) { return lambda * q; }

Scalar segment_length_in_lambda(const Point& a, const Point& b) { return decompose(a, b).length; }

Point advance_point(const Point& start, const PrimitiveVector& dir, const Scalar& lambda) {
  if (lambda.sign() <= 0) throw Error(ErrorCode::NonPositiveLength, lambda.str());
  return {start.x + lambda * dir.m, start.y + lambda * dir.n};
}

bool point_on_segment_in_lambda(const ValueGroup& lambda, const Point& a, const Point& b, const Point& p) {
  Step whole = decompose(a, b);
  Scalar dist;
  if (p == a) {
    dist = Scalar(0);
  } else {
    Step part;
    try {
      part = decompose(a, p);
    } catch (const Error&) {
      throw Error(ErrorCode::NotOnSegment, "point is off the segment");
    }
    if (part.m != whole.m || part.n != whole.n || part.length > whole.length) {
      throw Error(ErrorCode::NotOnSegment, "point is off the segment");
    }
    dist = part.length;
  }
  bool from_a = lambda.contains(dist);
  bool from_b = lambda.contains(whole.length - dist);
  bool endpoints_in = lambda.contains(a.x) && lambda.contains(a.y) && lambda.contains(b.x) && lambda.contains(b.y);
  if (endpoints_in) {
    bool point_in = lambda.contains(p.x) && lambda.contains(p.y);
    if (from_a != point_in || from_b != point_in) {
      throw Error(ErrorCode::NotInLambda, "distance and coordinate membership disagree");
    }
  }
  return from_a || from_b;
}

ProjectionCertificate projections(const BalancedComplex& c, const ValueGroup& lambda) {
  ProjectionCertificate cert;
  const std::size_t nv = c.vertices.size();
  cert.f.value.resize(nv);
  cert.g.value.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    cert.f.value[i] = c.vertices[i].x;
    cert.g.value[i] = c.vertices[i].y;
    if (!lambda.contains(c.vertices[i].x) || !lambda.contains(c.vertices[i].y)) {
      cert.breakpoints_in_lambda = false;
      cert.failures.push_back("vertex " + std::to_string(i) + " is not a group point");
    }
  }

  std::vector<Step> steps(c.segments.size());
  for (std::size_t s = 0; s < c.segments.size(); ++s) {
    steps[s] = decompose(c.vertices[c.segments[s].a], c.vertices[c.segments[s].b]);
    cert.f.segment_slope.push_back(steps[s].m);
    cert.g.segment_slope.push_back(steps[s].n);
    if (std::gcd(steps[s].m, steps[s].n) != 1) {
      cert.slopes_integral_coprime = false;
      cert.failures.push_back("segment " + std::to_string(s) + " slopes are not coprime");
    }
    if (!lambda.contains(steps[s].length)) {
      cert.breakpoints_in_lambda = false;
      cert.failures.push_back("segment " + std::to_string(s) + " length is not in the group");
    }
  }
  for (const auto& r : c.rays) {
    cert.f.ray_slope.push_back(r.direction.m);
    cert.g.ray_slope.push_back(r.direction.n);
    if (std::gcd(r.direction.m, r.direction.n) != 1) {
      cert.slopes_integral_coprime = false;
      cert.failures.push_back("ray slopes are not coprime");
    }
  }

  // integrate slope * length over a spanning forest
  std::vector<std::vector<std::pair<std::size_t, bool>>> adj(nv);
  for (std::size_t s = 0; s < c.segments.size(); ++s) {
    adj[c.segments[s].a].push_back({s, true});
    adj[c.segments[s].b].push_back({s, false});
  }
  std::vector<Scalar> pf(nv), pg(nv);
  std::vector<char> seen(nv, 0), tree(c.segments.size(), 0);
  for (std::size_t root = 0; root < nv; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    pf[root] = Scalar(0);
    pg[root] = Scalar(0);
    std::queue<std::size_t> todo;
    todo.push(root);
    while (!todo.empty()) {
      std::size_t v = todo.front();
      todo.pop();
      for (auto [s, forward] : adj[v]) {
        std::size_t w = forward ? c.segments[s].b : c.segments[s].a;
        if (seen[w]) continue;
        seen[w] = 1;
        tree[s] = 1;
        std::int64_t sg = forward ? 1 : -1;
        pf[w] = pf[v] + steps[s].length * (sg * steps[s].m);
        pg[w] = pg[v] + steps[s].length * (sg * steps[s].n);
        todo.push(w);
      }
    }
  }
  for (std::size_t s = 0; s < c.segments.size(); ++s) {
    if (tree[s]) continue;
    const auto& seg = c.segments[s];
    Scalar cf = pf[seg.a] + steps[s].length * steps[s].m - pf[seg.b];
    Scalar cg = pg[seg.a] + steps[s].length * steps[s].n - pg[seg.b];
    if (!cf.is_zero() || !cg.is_zero()) {
      cert.cycles_close = false;
      cert.failures.push_back("cycle through segment " + std::to_string(s) + " does not close");
    }
  }
  return cert;
}

}  // namespace tropembed
