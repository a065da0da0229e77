#include "tropembed/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include <omp.h>

#include "tropembed/errors.hpp"

namespace tropembed {

std::pair<PrimitiveVector, std::int64_t> split_primitive(IntVector v) {
  if (v.is_zero()) throw Error(ErrorCode::DegenerateSegment, "zero vector has no primitive direction");
  std::int64_t g = std::gcd(std::abs(v.x), std::abs(v.y));
  return {PrimitiveVector{v.x / g, v.y / g}, g};
}

Scalar cross(const Point& w, const PrimitiveVector& v) { return w.x * v.n - w.y * v.m; }
Scalar dot(const Point& w, const PrimitiveVector& v) { return w.x * v.m + w.y * v.n; }

PrimitiveVector primitive_vector(const Point& from, const Point& to) {
  Point d = to - from;
  if (d.x.is_zero() && d.y.is_zero()) {
    throw Error(ErrorCode::DegenerateSegment, "segment endpoints coincide");
  }
  if (d.x.is_zero()) return {0, d.y.sign() > 0 ? 1 : -1};
  if (d.y.is_zero()) return {d.x.sign() > 0 ? 1 : -1, 0};
  auto slope = d.y.ratio_to(d.x);
  if (!slope) throw Error(ErrorCode::NonRationalSlope, "segment direction " + d.x.str() + ", " + d.y.str());
  BigInt num = boost::multiprecision::numerator(*slope);
  BigInt den = boost::multiprecision::denominator(*slope);
  if (boost::multiprecision::abs(num) > std::numeric_limits<std::int64_t>::max() / 2 ||
      den > std::numeric_limits<std::int64_t>::max() / 2) {
    throw Error(ErrorCode::NonRationalSlope, "slope " + format_rational(*slope) + " exceeds 64-bit lattice range");
  }
  std::int64_t m = den.convert_to<std::int64_t>();
  std::int64_t n = num.convert_to<std::int64_t>();
  if (d.x.sign() < 0) {
    m = -m;
    n = -n;
  }
  return {m, n};
}

Scalar tropical_length(const Point& a, const Point& b) {
  PrimitiveVector v = primitive_vector(a, b);
  return v.m != 0 ? (b.x - a.x) / v.m : (b.y - a.y) / v.n;
}

IntVector balance_defect(const BalancedComplex& c, std::size_t vertex) {
  if (vertex >= c.vertices.size()) {
    throw Error(ErrorCode::UnknownVertex, "vertex " + std::to_string(vertex) + " not in complex");
  }
  IntVector sum;
  for (const auto& s : c.segments) {
    if (s.a == vertex) sum = sum + s.weight * primitive_vector(c.vertices[s.a], c.vertices[s.b]).vec();
    if (s.b == vertex) sum = sum + s.weight * primitive_vector(c.vertices[s.b], c.vertices[s.a]).vec();
  }
  for (const auto& r : c.rays) {
    if (r.apex == vertex) sum = sum + r.weight * r.direction.vec();
  }
  return sum;
}

std::vector<IntVector> balance_defects(const BalancedComplex& c) {
  std::vector<IntVector> out(c.vertices.size());
  for (const auto& s : c.segments) {
    PrimitiveVector v = primitive_vector(c.vertices[s.a], c.vertices[s.b]);
    out[s.a] = out[s.a] + s.weight * v.vec();
    out[s.b] = out[s.b] - s.weight * v.vec();
  }
  for (const auto& r : c.rays) out[r.apex] = out[r.apex] + r.weight * r.direction.vec();
  return out;
}

bool is_balanced(const BalancedComplex& c) {
  auto d = balance_defects(c);
  return std::all_of(d.begin(), d.end(), [](const IntVector& v) { return v.is_zero(); });
}

std::vector<ElementId> all_elements(const BalancedComplex& c) {
  std::vector<ElementId> out;
  out.reserve(c.segments.size() + c.rays.size());
  for (std::size_t i = 0; i < c.segments.size(); ++i) out.push_back(ElementId::segment(i));
  for (std::size_t i = 0; i < c.rays.size(); ++i) out.push_back(ElementId::ray(i));
  return out;
}

namespace {

constexpr std::size_t kNoVertex = std::numeric_limits<std::size_t>::max();

/// Parametric form origin + s * dir, s in [0, length] (or [0, inf) for rays).
struct Element {
  ElementId id;
  Point origin;
  PrimitiveVector dir;
  std::optional<Scalar> length;
  std::size_t start = kNoVertex;
  std::size_t end = kNoVertex;
  // double bounding box, infinite for rays
  double lo_x, hi_x, lo_y, hi_y;
  double ox, oy, len_d, magnitude;
};

Element make_element(const BalancedComplex& c, ElementId id) {
  Element e;
  e.id = id;
  if (id.kind == ElementId::Kind::Segment) {
    const auto& s = c.segments.at(id.index);
    e.origin = c.vertices[s.a];
    e.dir = primitive_vector(c.vertices[s.a], c.vertices[s.b]);
    e.length = tropical_length(c.vertices[s.a], c.vertices[s.b]);
    e.start = s.a;
    e.end = s.b;
    double ax = c.vertices[s.a].x.approx(), ay = c.vertices[s.a].y.approx();
    double bx = c.vertices[s.b].x.approx(), by = c.vertices[s.b].y.approx();
    e.lo_x = std::min(ax, bx);
    e.hi_x = std::max(ax, bx);
    e.lo_y = std::min(ay, by);
    e.hi_y = std::max(ay, by);
    e.len_d = e.length->approx();
  } else {
    const auto& r = c.rays.at(id.index);
    e.origin = c.vertices[r.apex];
    e.dir = r.direction;
    e.start = r.apex;
    double ax = e.origin.x.approx(), ay = e.origin.y.approx();
    constexpr double inf = std::numeric_limits<double>::infinity();
    e.lo_x = e.dir.m < 0 ? -inf : ax;
    e.hi_x = e.dir.m > 0 ? inf : ax;
    e.lo_y = e.dir.n < 0 ? -inf : ay;
    e.hi_y = e.dir.n > 0 ? inf : ay;
    e.len_d = inf;
  }
  e.ox = e.origin.x.approx();
  e.oy = e.origin.y.approx();
  e.magnitude = 1.0 + std::abs(e.ox) + std::abs(e.oy) + (std::isfinite(e.len_d) ? e.len_d * (std::abs(e.dir.m) + std::abs(e.dir.n)) : 0.0);
  return e;
}

enum class PairKind { Disjoint, SharedEndpoint, Crossing, Touch, Overlap };

struct PairResult {
  PairKind kind = PairKind::Disjoint;
  Point at;
};

/// -1 below 0, 0 at 0, 1 strictly inside, 2 at the end, 3 beyond.
int locate(const Scalar& s, const std::optional<Scalar>& length) {
  int s0 = s.sign();
  if (s0 < 0) return -1;
  if (s0 == 0) return 0;
  if (!length) return 1;
  int s1 = (s - *length).sign();
  if (s1 < 0) return 1;
  if (s1 == 0) return 2;
  return 3;
}

std::size_t endpoint_vertex(const Element& e, int where) { return where == 0 ? e.start : e.end; }

PairResult classify(const Element& p, const Element& q) {
  PairResult out;
  Point w = q.origin - p.origin;
  std::int64_t det = cross(p.dir, q.dir);
  if (det != 0) {
    Scalar s = cross(w, q.dir) / det;
    Scalar t = cross(w, p.dir) / det;
    int ls = locate(s, p.length);
    if (ls < 0 || ls > 2) return out;
    int lt = locate(t, q.length);
    if (lt < 0 || lt > 2) return out;
    if (ls == 1 && lt == 1) {
      out.kind = PairKind::Crossing;
      out.at = p.origin + p.dir * s;
      return out;
    }
    if (ls != 1 && lt != 1) {
      std::size_t vp = endpoint_vertex(p, ls);
      std::size_t vq = endpoint_vertex(q, lt);
      out.kind = (vp == vq && vp != kNoVertex) ? PairKind::SharedEndpoint : PairKind::Touch;
      out.at = p.origin + p.dir * s;
      return out;
    }
    out.kind = PairKind::Touch;
    out.at = p.origin + p.dir * s;
    return out;
  }
  if (!cross(w, p.dir).is_zero()) return out;

  // collinear: express q in p's parameter
  auto param = [&p](const Point& x) {
    Point d = x - p.origin;
    return p.dir.m != 0 ? d.x / p.dir.m : d.y / p.dir.n;
  };
  bool same = (q.dir == p.dir);
  Scalar q0 = param(q.origin);
  // interval of q as [lo, hi] with optional infinite ends
  std::optional<Scalar> qlo, qhi;
  if (same) {
    qlo = q0;
    if (q.length) qhi = q0 + *q.length;
  } else {
    qhi = q0;
    if (q.length) qlo = q0 - *q.length;
  }
  std::optional<Scalar> plo = Scalar(0);
  std::optional<Scalar> phi = p.length;
  // intersection [max lo, min hi]
  std::optional<Scalar> lo = plo;
  if (qlo && (*qlo > *lo)) lo = qlo;
  std::optional<Scalar> hi = phi;
  if (qhi && (!hi || *qhi < *hi)) hi = qhi;
  if (hi && *hi < *lo) return out;
  if (!hi || *hi > *lo) {
    out.kind = PairKind::Overlap;
    out.at = p.origin + p.dir * *lo;
    return out;
  }
  // single common point
  Point at = p.origin + p.dir * *lo;
  auto vertex_at = [&at](const Element& e) {
    if (e.origin == at) return e.start;
    if (e.length && e.origin + e.dir * *e.length == at) return e.end;
    return kNoVertex;
  };
  std::size_t vp = vertex_at(p);
  std::size_t vq = vertex_at(q);
  out.kind = (vp == vq && vp != kNoVertex) ? PairKind::SharedEndpoint : PairKind::Touch;
  out.at = at;
  return out;
}

/// Cheap floating rejection; never rejects a pair that meets.
bool certainly_disjoint(const Element& p, const Element& q) {
  double slack = 1e-9 * (p.magnitude + q.magnitude);
  if (p.hi_x + slack < q.lo_x || q.hi_x + slack < p.lo_x) return true;
  if (p.hi_y + slack < q.lo_y || q.hi_y + slack < p.lo_y) return true;
  std::int64_t det = cross(p.dir, q.dir);
  if (det == 0) return false;
  double wx = q.ox - p.ox, wy = q.oy - p.oy;
  double s = (wx * q.dir.n - wy * q.dir.m) / static_cast<double>(det);
  double t = (wx * p.dir.n - wy * p.dir.m) / static_cast<double>(det);
  double tol_s = 1e-7 * (p.magnitude + q.magnitude) * static_cast<double>(std::abs(q.dir.m) + std::abs(q.dir.n)) /
                 static_cast<double>(std::abs(det));
  double tol_t = 1e-7 * (p.magnitude + q.magnitude) * static_cast<double>(std::abs(p.dir.m) + std::abs(p.dir.n)) /
                 static_cast<double>(std::abs(det));
  if (s < -tol_s || t < -tol_t) return true;
  if (s > p.len_d + tol_s || t > q.len_d + tol_t) return true;
  return false;
}

struct PairFailure {
  std::size_t i = kNoVertex;
  std::size_t j = kNoVertex;
  PairKind kind = PairKind::Disjoint;
  Point at;
  bool operator<(const PairFailure& o) const { return std::tie(i, j) < std::tie(o.i, o.j); }
};

[[noreturn]] void raise(const PairFailure& f, const std::vector<Element>& elems) {
  auto name = [](const ElementId& id) {
    return std::string(id.kind == ElementId::Kind::Segment ? "segment " : "ray ") + std::to_string(id.index);
  };
  std::string where = name(elems[f.i].id) + " and " + name(elems[f.j].id) + " at (" + f.at.x.str() + ", " +
                      f.at.y.str() + ")";
  if (f.kind == PairKind::Overlap) throw Error(ErrorCode::OverlapError, where);
  throw Error(ErrorCode::TouchingElements, where);
}

void record(const Element& p, const Element& q, std::vector<CrossingRecord>& out, const PairResult& r) {
  if (p.id < q.id) {
    out.push_back({p.id, q.id, r.at});
  } else {
    out.push_back({q.id, p.id, r.at});
  }
}

std::vector<CrossingRecord> crossings_serial(const std::vector<Element>& elems) {
  std::vector<CrossingRecord> out;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      PairResult r = classify(elems[i], elems[j]);
      if (r.kind == PairKind::Crossing) {
        record(elems[i], elems[j], out, r);
      } else if (r.kind == PairKind::Touch || r.kind == PairKind::Overlap) {
        raise({i, j, r.kind, r.at}, elems);
      }
    }
  }
  return out;
}

std::vector<CrossingRecord> crossings_parallel(const std::vector<Element>& elems) {
  // sweep in x: order by lower x, stop scanning once boxes separate
  std::vector<std::size_t> order(elems.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (elems[a].lo_x != elems[b].lo_x) return elems[a].lo_x < elems[b].lo_x;
    return a < b;
  });
  std::vector<CrossingRecord> out;
  std::optional<PairFailure> failure;
  const auto n = static_cast<std::int64_t>(order.size());
#pragma omp parallel
  {
    std::vector<CrossingRecord> local;
    std::optional<PairFailure> local_failure;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::int64_t a = 0; a < n; ++a) {
      const Element& p = elems[order[a]];
      double reach = p.hi_x + 1e-9 * (p.magnitude + 1.0);
      for (std::int64_t b = a + 1; b < n; ++b) {
        const Element& q = elems[order[b]];
        if (q.lo_x > reach + 1e-9 * q.magnitude) break;
        if (certainly_disjoint(p, q)) continue;
        PairResult r = classify(p, q);
        if (r.kind == PairKind::Crossing) {
          record(p, q, local, r);
        } else if (r.kind == PairKind::Touch || r.kind == PairKind::Overlap) {
          PairFailure f{std::min(order[a], order[b]), std::max(order[a], order[b]), r.kind, r.at};
          if (!local_failure || f < *local_failure) local_failure = f;
        }
      }
    }
#pragma omp critical(tropembed_crossings_merge)
    {
      out.insert(out.end(), local.begin(), local.end());
      if (local_failure && (!failure || *local_failure < *failure)) failure = local_failure;
    }
  }
  if (failure) raise(*failure, elems);
  return out;
}

}  // namespace

std::vector<CrossingRecord> crossings(const BalancedComplex& c, std::span<const ElementId> restrict_to,
                                      Execution exec) {
  std::vector<ElementId> ids(restrict_to.begin(), restrict_to.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Element> elems;
  elems.reserve(ids.size());
  for (const auto& id : ids) elems.push_back(make_element(c, id));

  std::vector<CrossingRecord> out =
      exec == Execution::Serial ? crossings_serial(elems) : crossings_parallel(elems);
  std::sort(out.begin(), out.end(), [](const CrossingRecord& a, const CrossingRecord& b) {
    return std::tie(a.first, a.second) < std::tie(b.first, b.second);
  });

  // a point shared by two crossing records means at least three elements meet there
  std::map<Point, std::size_t, PointLess> seen;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto [it, inserted] = seen.emplace(out[i].at, i);
    if (!inserted) {
      throw Error(ErrorCode::MultipleCrossing,
                  "three or more elements meet at (" + out[i].at.x.str() + ", " + out[i].at.y.str() + ")");
    }
  }
  return out;
}

BalancedComplex unimodular_transform(const BalancedComplex& c, const UnimodularMatrix& m, const Point& t) {
  if (std::abs(m.det()) != 1) {
    throw Error(ErrorCode::NotUnimodular, "determinant " + std::to_string(m.det()));
  }
  BalancedComplex out = c;
  for (auto& v : out.vertices) v = m.apply(v) + t;
  for (auto& r : out.rays) r.direction = m.apply(r.direction);
  return out;
}

}  // namespace tropembed
