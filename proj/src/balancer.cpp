#include "tropembed/balancer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numeric>

#include "tropembed/errors.hpp"

namespace tropembed {

std::optional<BalancingRay> balancing_ray(IntVector defect) {
  if (defect.is_zero()) return std::nullopt;
  auto [dir, weight] = split_primitive(-defect);
  return BalancingRay{dir, weight};
}

namespace {

Point to_point(const RationalPoint& p) { return {Scalar(p.x), Scalar(p.y)}; }

Rational drawing_length(const RationalPoint& a, const RationalPoint& b) {
  return tropical_length(to_point(a), to_point(b)).rational_part();
}

Scalar power_scale(const Scalar& base, long k) {
  return k >= 0 ? base * pow2(k) : base / pow2(-k);
}

}  // namespace

Fit scale_to_fit(const Drawing& d, const std::vector<std::optional<Scalar>>& lengths, const ValueGroup& lambda,
                 bool enlarge, std::span<const std::vector<Rational>> weights) {
  if (lengths.size() != d.chains.size()) {
    throw Error(ErrorCode::LengthMismatch, "one length per chain is required");
  }
  if (!weights.empty() && weights.size() != d.chains.size()) {
    throw Error(ErrorCode::LengthMismatch, "one weight list per chain is required");
  }
  struct Chain {
    std::size_t index;
    Rational total;
    Rational weight;
  };
  auto weight_of = [&](std::size_t e, std::size_t i) {
    if (weights.empty()) return Rational(1);
    if (weights[e].size() + 1 != d.chains[e].size() || weights[e][i] <= 0) {
      throw Error(ErrorCode::LengthMismatch, "weights must be positive, one per segment");
    }
    return weights[e][i];
  };
  std::vector<Chain> chains;
  for (std::size_t e = 0; e < d.chains.size(); ++e) {
    if (!lengths[e]) continue;
    Chain c{e, 0, 0};
    const auto& ch = d.chains[e];
    for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
      c.total += drawing_length(d.position[ch[i]], d.position[ch[i + 1]]);
      if (!d.rigid[e][i]) c.weight += weight_of(e, i);
    }
    if (c.weight == 0) throw Error(ErrorCode::LengthMismatch, "chain " + std::to_string(e) + " has no free segment");
    chains.push_back(std::move(c));
  }

  const Scalar base = lambda.base_scale();
  auto fits = [&](const Scalar& s) {
    for (const auto& c : chains) {
      if ((s * c.total - *lengths[c.index]).sign() >= 0) return false;
    }
    return true;
  };

  long k = 0;
  if (!chains.empty()) {
    double ratio = std::numeric_limits<double>::infinity();
    for (const auto& c : chains) {
      ratio = std::min(ratio, lengths[c.index]->approx() / (base.approx() * to_double(c.total)));
    }
    k = static_cast<long>(std::floor(std::log2(ratio)));
    if (!enlarge) k = std::min(k, 0L);
    while (!fits(power_scale(base, k))) --k;
    if (enlarge) {
      while (fits(power_scale(base, k + 1))) ++k;
    } else {
      while (k < 0 && fits(power_scale(base, k + 1))) ++k;
    }
  }

  Fit out;
  out.scale = power_scale(base, k);
  out.target.resize(d.chains.size());
  for (std::size_t e = 0; e < d.chains.size(); ++e) out.target[e].assign(d.chains[e].size() - 1, std::nullopt);
  for (const auto& c : chains) {
    const Scalar spare = *lengths[c.index] - out.scale * c.total;
    const auto& ch = d.chains[c.index];
    for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
      if (d.rigid[c.index][i]) continue;
      const Rational x = drawing_length(d.position[ch[i]], d.position[ch[i + 1]]);
      out.target[c.index][i] = out.scale * x + spare * Rational(weight_of(c.index, i) / c.weight);
    }
  }
  return out;
}

// ---- corridors ----

std::vector<Point> Corridor::corners() const {
  const Point a = origin + u * (length / 3);
  const Point b = origin + u * (length * Rational(2, 3));
  const PrimitiveVector w = v();
  return {a, b, b + w * epsilon, a + w * epsilon};
}

namespace {

struct Projection {
  Scalar lo;
  Scalar hi;
  bool lo_unbounded = false;
  bool hi_unbounded = false;
};

Projection project(std::span<const Point> pts, const PrimitiveVector& axis) {
  Projection p{dot(pts[0], axis), dot(pts[0], axis)};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Scalar t = dot(pts[i], axis);
    if (t < p.lo) p.lo = t;
    if (t > p.hi) p.hi = t;
  }
  return p;
}

bool separated(const Projection& a, const Projection& b) {
  if (!a.hi_unbounded && !b.lo_unbounded && a.hi < b.lo) return true;
  if (!b.hi_unbounded && !a.lo_unbounded && b.hi < a.lo) return true;
  return false;
}

PrimitiveVector normal(const PrimitiveVector& d) { return {-d.n, d.m}; }

}  // namespace

bool corridor_meets_segment(const Corridor& c, const Point& p, const Point& q) {
  const auto box = c.corners();
  const std::vector<Point> seg{p, q};
  std::vector<PrimitiveVector> axes{normal(c.u), normal(c.v())};
  if (!(p == q)) axes.push_back(normal(primitive_vector(p, q)));
  for (const auto& axis : axes) {
    if (separated(project(box, axis), project(seg, axis))) return false;
  }
  return true;
}

bool corridor_meets_ray(const Corridor& c, const Point& apex, const PrimitiveVector& d) {
  const auto box = c.corners();
  for (const auto& axis : {normal(c.u), normal(c.v()), normal(d)}) {
    const Point one[] = {apex};
    Projection r = project(one, axis);
    const std::int64_t slope = d.m * axis.m + d.n * axis.n;
    if (slope > 0) r.hi_unbounded = true;
    if (slope < 0) r.lo_unbounded = true;
    if (separated(project(box, axis), r)) return false;
  }
  return true;
}

bool corridors_meet(const Corridor& a, const Corridor& b) {
  const auto pa = a.corners();
  const auto pb = b.corners();
  for (const auto& axis : {normal(a.u), normal(a.v()), normal(b.u), normal(b.v())}) {
    if (separated(project(pa, axis), project(pb, axis))) return false;
  }
  return true;
}

namespace {

// Whether the candidate meets any obstacle. The parallel kernel evaluates
// every obstacle; the serial one stops at the first hit.
bool blocked(const Corridor& cand, const BalancedComplex& c, std::size_t host, std::span<const Corridor> placed,
             Execution exec) {
  const std::size_t ns = c.segments.size();
  const std::size_t nr = c.rays.size();
  const std::size_t total = ns + nr + placed.size();
  auto test = [&](std::size_t i) {
    if (i < ns) {
      if (i == host) return false;
      return corridor_meets_segment(cand, c.vertices[c.segments[i].a], c.vertices[c.segments[i].b]);
    }
    if (i < ns + nr) {
      const auto& r = c.rays[i - ns];
      return corridor_meets_ray(cand, c.vertices[r.apex], r.direction);
    }
    return corridors_meet(cand, placed[i - ns - nr]);
  };
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < total; ++i) {
      if (test(i)) return true;
    }
    return false;
  }
  bool hit = false;
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 32) reduction(|| : hit)
  for (std::size_t i = 0; i < total; ++i) {
    try {
      if (test(i)) hit = true;
    } catch (...) {
#pragma omp critical(tropembed_corridor_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return hit;
}

}  // namespace

std::vector<Corridor> place_corridors(const BalancedComplex& c, std::span<const std::size_t> hosts,
                                      const std::optional<Scalar>& cap, Execution exec) {
  std::vector<Corridor> out;
  // widths start at the power-of-two multiple of the host length just above
  // the diameter of the complex
  double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    const double x = c.vertices[v].x.approx(), y = c.vertices[v].y.approx();
    if (v == 0 || x < lo_x) lo_x = x;
    if (v == 0 || x > hi_x) hi_x = x;
    if (v == 0 || y < lo_y) lo_y = y;
    if (v == 0 || y > hi_y) hi_y = y;
  }
  const double diameter = std::max(hi_x - lo_x, hi_y - lo_y);
  for (std::size_t host : hosts) {
    const auto& s = c.segments.at(host);
    Corridor cand;
    cand.origin = c.vertices[s.a];
    cand.u = primitive_vector(c.vertices[s.a], c.vertices[s.b]);
    cand.length = tropical_length(c.vertices[s.a], c.vertices[s.b]);
    const long up = std::max(-2L, static_cast<long>(std::ceil(std::log2(diameter / cand.length.approx()))));
    Scalar eps = power_scale(cand.length, up);
    if (cap && *cap < eps) eps = *cap;
    bool done = false;
    for (int halving = 0; halving < 256 && !done; ++halving) {
      for (bool flip : {false, true}) {
        cand.epsilon = eps;
        cand.flip = flip;
        if (!blocked(cand, c, host, out, exec)) {
          done = true;
          break;
        }
      }
      if (!done) eps /= 2;
    }
    if (!done) {
      throw Error(ErrorCode::NeighborhoodConflict, "no free corridor around segment " + std::to_string(host));
    }
    out.push_back(cand);
  }
  return out;
}

// ---- balancing rays ----

namespace {

PrimitiveVector canonical_axis(const PrimitiveVector& d) {
  return (d.m > 0 || (d.m == 0 && d.n > 0)) ? d : -d;
}

// Vertices grouped by the line through them in a given direction, built on
// demand per direction.
class LineIndex {
 public:
  explicit LineIndex(const BalancedComplex& c) : c_(c) {}

  // Whether some vertex other than `apex` lies on the open ray.
  bool ray_hits_vertex(std::size_t apex, const PrimitiveVector& d) {
    const PrimitiveVector axis = canonical_axis(d);
    auto& lines = index(axis);
    const Point& p = c_.vertices[apex];
    auto it = lines.find(cross(p, axis));
    if (it == lines.end()) return false;
    for (std::size_t v : it->second) {
      if (v == apex) continue;
      if (dot(c_.vertices[v] - p, d).sign() > 0) return true;
    }
    return false;
  }

 private:
  using Lines = std::map<Scalar, std::vector<std::size_t>, StructuralLess>;

  Lines& index(const PrimitiveVector& axis) {
    auto it = by_axis_.find(axis);
    if (it != by_axis_.end()) return it->second;
    Lines lines;
    for (std::size_t v = 0; v < c_.vertices.size(); ++v) lines[cross(c_.vertices[v], axis)].push_back(v);
    return by_axis_.emplace(axis, std::move(lines)).first->second;
  }

  const BalancedComplex& c_;
  std::map<PrimitiveVector, Lines> by_axis_;
};

std::vector<PrimitiveVector> split_candidates() {
  std::vector<PrimitiveVector> out;
  for (std::int64_t r = 1; r <= 6; ++r) {
    for (std::int64_t m = -r; m <= r; ++m) {
      for (std::int64_t n = -r; n <= r; ++n) {
        if (std::max(std::abs(m), std::abs(n)) != r || std::gcd(m, n) != 1) continue;
        out.push_back({m, n});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::size_t> attach_balancing_rays(BalancedComplex& c, std::span<const Point> avoid) {
  const auto defects = balance_defects(c);
  std::vector<std::vector<PrimitiveVector>> outgoing(c.vertices.size());
  for (const auto& s : c.segments) {
    outgoing[s.a].push_back(primitive_vector(c.vertices[s.a], c.vertices[s.b]));
    outgoing[s.b].push_back(primitive_vector(c.vertices[s.b], c.vertices[s.a]));
  }
  for (const auto& r : c.rays) outgoing[r.apex].push_back(r.direction);

  LineIndex lines(c);
  auto clear = [&](std::size_t v, const PrimitiveVector& d) {
    if (std::find(outgoing[v].begin(), outgoing[v].end(), d) != outgoing[v].end()) return false;
    if (lines.ray_hits_vertex(v, d)) return false;
    const Point& p = c.vertices[v];
    for (const auto& q : avoid) {
      const Point w = q - p;
      if (cross(w, d).is_zero() && dot(w, d).sign() > 0) return false;
    }
    return true;
  };

  static const std::vector<PrimitiveVector> candidates = split_candidates();
  std::vector<std::size_t> added;
  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    auto ray = balancing_ray(defects[v]);
    if (!ray) continue;
    if (clear(v, ray->direction)) {
      added.push_back(c.add_ray(v, ray->direction, ray->weight));
      outgoing[v].push_back(ray->direction);
      continue;
    }
    // two rays w and -defect - w in free directions
    const IntVector total = -defects[v];
    bool placed = false;
    for (const auto& w : candidates) {
      const IntVector rest = total - w.vec();
      if (rest.is_zero()) continue;
      auto [dir, weight] = split_primitive(rest);
      if (dir == w || !clear(v, w) || !clear(v, dir)) continue;
      added.push_back(c.add_ray(v, w, 1));
      added.push_back(c.add_ray(v, dir, weight));
      outgoing[v].push_back(w);
      outgoing[v].push_back(dir);
      placed = true;
      break;
    }
    if (!placed) throw Error(ErrorCode::NeighborhoodConflict, "no free directions for the rays at vertex " + std::to_string(v));
  }
  return added;
}

}  // namespace tropembed
