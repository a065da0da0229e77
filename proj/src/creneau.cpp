#include "tropembed/creneau.hpp"

#include <cmath>

#include "tropembed/errors.hpp"

namespace tropembed {

namespace {

void check_target(const Scalar& x, const Scalar& alpha, const Scalar& epsilon) {
  if (x.sign() <= 0) throw Error(ErrorCode::InvalidTarget, "host length must be positive");
  if (epsilon.sign() <= 0) throw Error(ErrorCode::InvalidTarget, "corridor width must be positive");
  if (alpha <= x) {
    throw Error(ErrorCode::InvalidTarget, "target " + alpha.str() + " does not exceed host length " + x.str());
  }
}

// Smallest even m with m * eps > gap (strict) or >= gap.
std::int64_t smallest_even_cover(const Scalar& gap, const Scalar& eps, bool strict) {
  double guess = gap.approx() / eps.approx();
  std::int64_t m = 2 * std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(guess / 2)));
  auto covers = [&](std::int64_t k) {
    int s = (eps * k - gap).sign();
    return strict ? s > 0 : s >= 0;
  };
  while (m > 2 && covers(m - 2)) m -= 2;
  while (!covers(m)) m += 2;
  return m;
}

}  // namespace

Scalar CreneauPath::length() const {
  Scalar total(0);
  for (const auto& s : segments) total += tropical_length(s);
  return total;
}

CreneauParams creneau_params(const Scalar& x, const Scalar& alpha, const Scalar& epsilon) {
  check_target(x, alpha, epsilon);
  Scalar gap = alpha - x;
  std::int64_t m = smallest_even_cover(gap, epsilon, true);
  return {m, gap / m};
}

CreneauPath build_staircase(const Point& a, const Point& b, std::int64_t m, const Scalar& delta, bool flip) {
  if (m < 2 || m % 2 != 0) throw Error(ErrorCode::InvalidTarget, "tooth count must be even and positive");
  CreneauPath path;
  path.u = primitive_vector(a, b);
  path.v = flip ? PrimitiveVector{path.u.n, -path.u.m} : PrimitiveVector{-path.u.n, path.u.m};
  path.teeth = m;
  path.delta = delta;
  const Scalar x = tropical_length(a, b);
  const Scalar third = x / 3;
  const Scalar inner = third / (m - 1);

  Point cur = a;
  path.points.push_back(cur);
  auto step = [&](const PrimitiveVector& d, const Scalar& len) {
    cur = cur + d * len;
    path.points.push_back(cur);
  };
  step(path.u, third);
  for (std::int64_t i = 0; i < m; ++i) {
    step(i % 2 == 0 ? path.v : -path.v, delta);
    if (i + 1 < m) step(path.u, inner);
  }
  // land exactly on b rather than on an accumulated sum
  path.points.push_back(b);

  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    path.segments.push_back({path.points[i], path.points[i + 1], 1});
  }
  // every interior point of the polyline is a quarter turn
  for (std::size_t i = 1; i + 1 < path.points.size(); ++i) {
    PrimitiveVector back = primitive_vector(path.points[i], path.points[i - 1]);
    PrimitiveVector fwd = primitive_vector(path.points[i], path.points[i + 1]);
    auto [dir, w] = split_primitive(-(back.vec() + fwd.vec()));
    path.rays.push_back({path.points[i], dir, w});
  }
  return path;
}

CreneauPath insert_creneau_rotated(const CreneauSpec& spec) {
  const Scalar x = tropical_length(spec.a, spec.b);
  auto params = creneau_params(x, spec.target, spec.epsilon);
  return build_staircase(spec.a, spec.b, params.m, params.delta, spec.flip);
}

CreneauPath insert_creneau(const CreneauSpec& spec) {
  if (primitive_vector(spec.a, spec.b) != PrimitiveVector{1, 0}) {
    throw Error(ErrorCode::FrameMismatch, "host segment is not along (1,0)");
  }
  return insert_creneau_rotated(spec);
}

CreneauPath insert_creneau_lambda(const CreneauSpec& spec, const ValueGroup& lambda) {
  for (const auto* s : {&spec.a.x, &spec.a.y, &spec.b.x, &spec.b.y, &spec.target}) {
    if (!lambda.contains(*s)) throw Error(ErrorCode::NotInLambda, s->str());
  }
  const Scalar x = tropical_length(spec.a, spec.b);
  check_target(x, spec.target, spec.epsilon);
  const Scalar gap = spec.target - x;
  std::int64_t m = smallest_even_cover(gap, spec.epsilon, false);
  return build_staircase(spec.a, spec.b, m, gap / m, spec.flip);
}

}  // namespace tropembed
