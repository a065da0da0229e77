#include "tropembed/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "tropembed/errors.hpp"
#include "tropembed/value_group.hpp"

namespace tropembed {

namespace {

constexpr std::array<std::pair<FailureCategory, std::string_view>, 9> kCategoryNames{{
    {FailureCategory::Unbalanced, "Unbalanced"},
    {FailureCategory::NonIsometric, "NonIsometric"},
    {FailureCategory::BrokenChain, "BrokenChain"},
    {FailureCategory::WeightNotOne, "WeightNotOne"},
    {FailureCategory::InfiniteEdgeWithoutRay, "InfiniteEdgeWithoutRay"},
    {FailureCategory::CrossingMismatch, "CrossingMismatch"},
    {FailureCategory::InvalidGeometry, "InvalidGeometry"},
    {FailureCategory::NonRationalSlope, "NonRationalSlope"},
    {FailureCategory::NotInLambda, "NotInLambda"},
}};

}  // namespace

std::string_view to_string(FailureCategory c) noexcept {
  for (const auto& [k, name] : kCategoryNames) {
    if (k == c) return name;
  }
  return "Unknown";
}

std::optional<FailureCategory> failure_category_from_string(std::string_view s) {
  for (const auto& [k, name] : kCategoryNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

bool Report::has(FailureCategory c) const {
  return std::any_of(failures.begin(), failures.end(), [c](const Failure& f) { return f.category == c; });
}

namespace {

struct Dir {
  std::int64_t m = 0;
  std::int64_t n = 0;
  friend bool operator==(const Dir&, const Dir&) = default;
  friend auto operator<=>(const Dir&, const Dir&) = default;
};

std::int64_t det(const Dir& a, const Dir& b) { return a.m * b.n - a.n * b.m; }
Scalar det(const Point& w, const Dir& d) { return w.x * d.n - w.y * d.m; }
Scalar inner(const Point& w, const Dir& d) { return w.x * d.m + w.y * d.n; }
Point along(const Point& p, const Dir& d, const Scalar& t) { return {p.x + t * Rational(d.m), p.y + t * Rational(d.n)}; }

enum class StepError { None, Degenerate, Irrational, TooSteep };

struct Step {
  Dir dir;
  Scalar length;
  StepError error = StepError::None;
};

// Integer direction and lattice length of b - a.
Step lattice_step(const Point& a, const Point& b) {
  const Scalar dx = b.x - a.x;
  const Scalar dy = b.y - a.y;
  Step s;
  if (dx.is_zero() && dy.is_zero()) {
    s.error = StepError::Degenerate;
    return s;
  }
  if (dx.is_zero()) {
    const int sy = dy.sign();
    s.dir = {0, sy};
    s.length = sy > 0 ? dy : -dy;
    return s;
  }
  auto r = dy.ratio_to(dx);
  if (!r) {
    s.error = StepError::Irrational;
    return s;
  }
  const BigInt p = numerator(*r);
  const BigInt q = denominator(*r);
  const BigInt limit(std::int64_t{1} << 40);
  if (abs(p) > limit || q > limit) {
    s.error = StepError::TooSteep;
    return s;
  }
  const int sx = dx.sign();
  s.dir = {sx * q.convert_to<std::int64_t>(), sx * p.convert_to<std::int64_t>()};
  s.length = dx / Rational(s.dir.m);
  return s;
}

bool primitive(const Dir& d) { return !(d.m == 0 && d.n == 0) && std::gcd(d.m, d.n) == 1; }

// Oriented element: origin + t dir, t in [0, length] or [0, inf).
struct Piece {
  Point origin;
  Dir dir;
  std::optional<Scalar> length;
  std::size_t from = 0;
  std::optional<std::size_t> to;
  double lo_x = 0, hi_x = 0;
};

enum class Meet { None, AtSharedVertex, Cross, Touch, Overlap };

struct MeetResult {
  Meet kind = Meet::None;
  Point at;
};

// -1 before the start, 0 at it, 1 inside, 2 at the end, 3 past the end.
int where(const Scalar& t, const std::optional<Scalar>& length) {
  const int s = t.sign();
  if (s <= 0) return s;
  if (!length) return 1;
  const int e = (t - *length).sign();
  return e < 0 ? 1 : (e == 0 ? 2 : 3);
}

MeetResult meet(const Piece& a, const Piece& b) {
  MeetResult out;
  const Point w{b.origin.x - a.origin.x, b.origin.y - a.origin.y};
  const std::int64_t dd = det(a.dir, b.dir);
  if (dd != 0) {
    const Scalar s = det(w, b.dir) / Rational(dd);
    const Scalar t = det(w, a.dir) / Rational(dd);
    const int ws = where(s, a.length);
    const int wt = where(t, b.length);
    if (ws < 0 || ws > 2 || wt < 0 || wt > 2) return out;
    out.at = along(a.origin, a.dir, s);
    if (ws == 1 && wt == 1) {
      out.kind = Meet::Cross;
    } else if (ws != 1 && wt != 1) {
      const std::optional<std::size_t> va = ws == 0 ? std::optional(a.from) : a.to;
      const std::optional<std::size_t> vb = wt == 0 ? std::optional(b.from) : b.to;
      out.kind = (va && vb && *va == *vb) ? Meet::AtSharedVertex : Meet::Touch;
    } else {
      out.kind = Meet::Touch;
    }
    return out;
  }
  if (!det(w, a.dir).is_zero()) return out;
  // collinear: b as an interval of a's parameter
  const int same = (a.dir == b.dir) ? 1 : -1;
  const Scalar b0 = inner(w, a.dir) / Rational(a.dir.m * a.dir.m + a.dir.n * a.dir.n);
  std::optional<Scalar> lo, hi;
  if (same > 0) {
    lo = b0;
    if (b.length) hi = b0 + *b.length;
  } else {
    hi = b0;
    if (b.length) lo = b0 - *b.length;
  }
  Scalar from = Scalar(0);
  if (lo && *lo > from) from = *lo;
  std::optional<Scalar> to = a.length;
  if (hi && (!to || *hi < *to)) to = hi;
  if (to && *to < from) return out;
  out.at = along(a.origin, a.dir, from);
  if (!to || *to > from) {
    out.kind = Meet::Overlap;
    return out;
  }
  auto vertex_at = [&](const Piece& p) -> std::optional<std::size_t> {
    if (p.origin == out.at) return p.from;
    if (p.length && along(p.origin, p.dir, *p.length) == out.at) return p.to;
    return std::nullopt;
  };
  const auto va = vertex_at(a);
  const auto vb = vertex_at(b);
  out.kind = (va && vb && *va == *vb) ? Meet::AtSharedVertex : Meet::Touch;
  return out;
}

// Floating-point filter in front of meet(): decides clear-cut crossings and
// misses from approximate orientations whose error bound excludes zero;
// everything else is left to the exact predicate.
struct Approx {
  double x = 0;
  double y = 0;
};

struct Orientation {
  double value = 0;
  double bound = 0;
  int sign() const { return value > bound ? 1 : (value < -bound ? -1 : 0); }  // 0: undecided
};

// (b - a) x (c - a) with coordinate error at most err.
Orientation orient(const Approx& a, const Approx& b, const Approx& c, double err) {
  const double bx = b.x - a.x, by = b.y - a.y, cx = c.x - a.x, cy = c.y - a.y;
  const double p = bx * cy, q = by * cx;
  return {p - q, 1e-12 * (std::abs(p) + std::abs(q)) + 2 * err * (std::abs(bx) + std::abs(by) + std::abs(cx) + std::abs(cy)) +
                     8 * err * err + 1e-300};
}

// d x (c - a) for an exact integer direction d.
Orientation orient(const Dir& d, const Approx& a, const Approx& c, double err) {
  const double wx = c.x - a.x, wy = c.y - a.y;
  const double p = static_cast<double>(d.m) * wy, q = static_cast<double>(d.n) * wx;
  return {p - q, 1e-12 * (std::abs(p) + std::abs(q)) + 2 * err * static_cast<double>(std::abs(d.m) + std::abs(d.n)) + 1e-300};
}

// e x d for a segment direction e = b - a and integer d.
Orientation orient(const Approx& a, const Approx& b, const Dir& d, double err) {
  const double ex = b.x - a.x, ey = b.y - a.y;
  const double p = ex * static_cast<double>(d.n), q = ey * static_cast<double>(d.m);
  return {p - q, 1e-12 * (std::abs(p) + std::abs(q)) + 2 * err * static_cast<double>(std::abs(d.m) + std::abs(d.n)) + 1e-300};
}

std::optional<Meet> quick_segments(const Approx& p1, const Approx& q1, const Approx& p2, const Approx& q2, double err) {
  const int o1 = orient(p1, q1, p2, err).sign(), o2 = orient(p1, q1, q2, err).sign();
  if (o1 != 0 && o1 == o2) return Meet::None;
  const int o3 = orient(p2, q2, p1, err).sign(), o4 = orient(p2, q2, q1, err).sign();
  if (o3 != 0 && o3 == o4) return Meet::None;
  if (o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return Meet::Cross;
  return std::nullopt;
}

std::optional<Meet> quick_ray_segment(const Approx& a, const Dir& d, const Approx& p, const Approx& q, double err) {
  const int o1 = orient(d, a, p, err).sign(), o2 = orient(d, a, q, err).sign();
  if (o1 != 0 && o1 == o2) return Meet::None;
  // a + s d meets the segment line at s = -o3 / o4
  const int o3 = orient(p, q, a, err).sign(), o4 = orient(p, q, d, err).sign();
  if (o3 != 0 && o3 == o4) return Meet::None;
  if (o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return Meet::Cross;
  return std::nullopt;
}

class Checker {
 public:
  Checker(const BalancedComplex& c, const EmbeddingMap& map, const MetricGraph& g, const VerifyOptions& o)
      : c_(c), map_(map), g_(g), o_(o) {}

  Report run() {
    report_.crossings_claimed = o_.claimed_crossings;
    report_.crossings_exact = o_.crossings_exact;
    if (!indices_valid()) return report_;
    elements();
    balance();
    chains();
    geometry();
    if (o_.lambda) lambda();
    return report_;
  }

 private:
  void fail(FailureCategory cat, std::string subject, std::string detail) {
    switch (cat) {
      case FailureCategory::Unbalanced: report_.balanced = false; break;
      case FailureCategory::NonIsometric: report_.isometric = false; break;
      case FailureCategory::BrokenChain: report_.chains_valid = false; break;
      case FailureCategory::WeightNotOne: report_.weights_one = false; break;
      case FailureCategory::InfiniteEdgeWithoutRay: report_.infinite_edges_ok = false; break;
      case FailureCategory::CrossingMismatch: break;
      case FailureCategory::InvalidGeometry:
      case FailureCategory::NonRationalSlope: report_.geometry_valid = false; break;
      case FailureCategory::NotInLambda: report_.lambda_certified = false; break;
    }
    report_.failures.push_back({cat, std::move(subject), std::move(detail)});
  }

  static std::string seg_name(std::size_t i) { return "segment " + std::to_string(i); }
  static std::string ray_name(std::size_t i) { return "ray " + std::to_string(i); }

  bool indices_valid() {
    const std::size_t nv = c_.vertices.size();
    bool ok = true;
    for (std::size_t i = 0; i < c_.segments.size(); ++i) {
      const auto& s = c_.segments[i];
      if (s.a >= nv || s.b >= nv) {
        fail(FailureCategory::InvalidGeometry, seg_name(i), "endpoint index out of range");
        ok = false;
      }
    }
    for (std::size_t i = 0; i < c_.rays.size(); ++i) {
      if (c_.rays[i].apex >= nv) {
        fail(FailureCategory::InvalidGeometry, ray_name(i), "apex index out of range");
        ok = false;
      }
    }
    return ok;
  }

  void elements() {
    approx_.resize(c_.vertices.size());
    for (std::size_t v = 0; v < c_.vertices.size(); ++v) {
      approx_[v] = {c_.vertices[v].x.approx(), c_.vertices[v].y.approx()};
      for (const Scalar* s : {&c_.vertices[v].x, &c_.vertices[v].y}) {
        if (s->is_rational()) continue;
        auto [lo, hi] = s->enclosure();
        err_ = std::max(err_, to_double(hi - lo));
      }
    }
    seg_.resize(c_.segments.size());
    seg_ok_.assign(c_.segments.size(), 0);
    for (std::size_t i = 0; i < c_.segments.size(); ++i) {
      const auto& s = c_.segments[i];
      if (s.weight < 1) fail(FailureCategory::InvalidGeometry, seg_name(i), "weight " + std::to_string(s.weight));
      Step st = lattice_step(c_.vertices[s.a], c_.vertices[s.b]);
      if (st.error == StepError::Degenerate) {
        fail(FailureCategory::InvalidGeometry, seg_name(i), "degenerate");
        continue;
      }
      if (st.error == StepError::Irrational) {
        fail(FailureCategory::NonRationalSlope, seg_name(i), "slope is not rational");
        continue;
      }
      if (st.error == StepError::TooSteep) {
        fail(FailureCategory::InvalidGeometry, seg_name(i), "direction out of range");
        continue;
      }
      Piece& p = seg_[i];
      p.origin = c_.vertices[s.a];
      p.dir = st.dir;
      p.length = st.length;
      p.from = s.a;
      p.to = s.b;
      const double ax = c_.vertices[s.a].x.approx();
      const double bx = c_.vertices[s.b].x.approx();
      p.lo_x = std::min(ax, bx);
      p.hi_x = std::max(ax, bx);
      seg_ok_[i] = 1;
    }
    ray_.resize(c_.rays.size());
    ray_ok_.assign(c_.rays.size(), 0);
    for (std::size_t i = 0; i < c_.rays.size(); ++i) {
      const auto& r = c_.rays[i];
      if (r.weight < 1) fail(FailureCategory::InvalidGeometry, ray_name(i), "weight " + std::to_string(r.weight));
      const Dir d{r.direction.m, r.direction.n};
      if (!primitive(d)) {
        fail(FailureCategory::InvalidGeometry, ray_name(i), "direction is not primitive");
        continue;
      }
      ray_[i] = {c_.vertices[r.apex], d, std::nullopt, r.apex, std::nullopt, 0, 0};
      ray_ok_[i] = 1;
    }
  }

  void balance() {
    std::vector<std::array<std::int64_t, 2>> sum(c_.vertices.size(), {0, 0});
    for (std::size_t i = 0; i < c_.segments.size(); ++i) {
      if (!seg_ok_[i]) continue;
      const auto& s = c_.segments[i];
      const Dir& d = seg_[i].dir;
      sum[s.a][0] += s.weight * d.m;
      sum[s.a][1] += s.weight * d.n;
      sum[s.b][0] -= s.weight * d.m;
      sum[s.b][1] -= s.weight * d.n;
    }
    for (std::size_t i = 0; i < c_.rays.size(); ++i) {
      if (!ray_ok_[i]) continue;
      const auto& r = c_.rays[i];
      sum[r.apex][0] += r.weight * ray_[i].dir.m;
      sum[r.apex][1] += r.weight * ray_[i].dir.n;
    }
    for (std::size_t v = 0; v < sum.size(); ++v) {
      if (sum[v][0] != 0 || sum[v][1] != 0) {
        fail(FailureCategory::Unbalanced, "vertex " + std::to_string(v),
             "defect (" + std::to_string(sum[v][0]) + ", " + std::to_string(sum[v][1]) + ")");
      }
    }
  }

  void chains() {
    owner_.assign(c_.segments.size(), kNone);
    ray_owner_.assign(c_.rays.size(), kNone);
    std::map<std::size_t, std::string> image_of;
    for (const auto& v : g_.vertices) {
      auto it = map_.vertex_image.find(v);
      if (g_.is_infinite(v)) {
        if (it != map_.vertex_image.end() && it->second) {
          fail(FailureCategory::BrokenChain, v, "infinite vertex has an image");
        }
        continue;
      }
      if (it == map_.vertex_image.end() || !it->second) {
        fail(FailureCategory::BrokenChain, v, "vertex has no image");
        continue;
      }
      if (*it->second >= c_.vertices.size()) {
        fail(FailureCategory::BrokenChain, v, "image out of range");
        continue;
      }
      auto [slot, fresh] = image_of.emplace(*it->second, v);
      if (!fresh) fail(FailureCategory::BrokenChain, v, "shares its image with " + slot->second);
    }
    auto image = [&](const std::string& v) -> std::optional<std::size_t> {
      auto it = map_.vertex_image.find(v);
      if (it == map_.vertex_image.end() || !it->second || *it->second >= c_.vertices.size()) return std::nullopt;
      return *it->second;
    };

    for (std::size_t e = 0; e < g_.edges.size(); ++e) {
      const auto& edge = g_.edges[e];
      auto it = map_.edge_image.find(edge.id);
      if (it == map_.edge_image.end()) {
        fail(FailureCategory::BrokenChain, edge.id, "edge has no image");
        continue;
      }
      const auto& im = it->second;
      const bool inf = edge.length.is_infinite();
      if (im.from != edge.u && im.from != edge.v) {
        fail(FailureCategory::BrokenChain, edge.id, "chain starts at a vertex off the edge");
        continue;
      }
      const std::string& other = im.from == edge.u ? edge.v : edge.u;
      if (inf && g_.is_infinite(im.from)) {
        fail(FailureCategory::BrokenChain, edge.id, "chain starts at the infinite end");
        continue;
      }
      auto start = image(im.from);
      if (!start) continue;  // already reported
      std::size_t cur = *start;
      std::set<std::size_t> visited{cur};
      Scalar total(0);
      bool broken = false;
      for (std::size_t s : im.segments) {
        if (s >= c_.segments.size()) {
          fail(FailureCategory::BrokenChain, edge.id, seg_name(s) + " does not exist");
          broken = true;
          break;
        }
        if (owner_[s] != kNone) {
          fail(FailureCategory::BrokenChain, edge.id, seg_name(s) + " is also on " + g_.edges[owner_[s]].id);
          broken = true;
          break;
        }
        owner_[s] = e;
        const auto& seg = c_.segments[s];
        std::size_t next;
        if (seg.a == cur) {
          next = seg.b;
        } else if (seg.b == cur) {
          next = seg.a;
        } else {
          fail(FailureCategory::BrokenChain, edge.id, seg_name(s) + " does not continue the chain");
          broken = true;
          break;
        }
        if (!visited.insert(next).second) {
          fail(FailureCategory::BrokenChain, edge.id, "chain revisits vertex " + std::to_string(next));
          broken = true;
          break;
        }
        if (seg.weight != 1) fail(FailureCategory::WeightNotOne, edge.id, seg_name(s) + " has weight " + std::to_string(seg.weight));
        if (seg_ok_[s]) total += *seg_[s].length;
        cur = next;
      }
      if (broken) continue;
      if (inf) {
        if (!im.ray || *im.ray >= c_.rays.size()) {
          fail(FailureCategory::InfiniteEdgeWithoutRay, edge.id, "chain does not end in a ray");
          continue;
        }
        const auto& r = c_.rays[*im.ray];
        if (r.apex != cur) fail(FailureCategory::InfiniteEdgeWithoutRay, edge.id, "ray does not start at the chain end");
        if (ray_owner_[*im.ray] != kNone) fail(FailureCategory::BrokenChain, edge.id, "ray is shared");
        ray_owner_[*im.ray] = e;
        if (r.weight != 1) fail(FailureCategory::WeightNotOne, edge.id, "ray has weight " + std::to_string(r.weight));
        continue;
      }
      if (im.ray) fail(FailureCategory::BrokenChain, edge.id, "finite edge ends in a ray");
      auto end = image(other);
      if (!end || *end != cur) {
        fail(FailureCategory::BrokenChain, edge.id, "chain does not end at the image of " + other);
        continue;
      }
      if (total != edge.length.value()) {
        fail(FailureCategory::NonIsometric, edge.id,
             "image length " + total.str() + " differs from " + edge.length.value().str());
      }
    }
    for (std::size_t s = 0; s < c_.segments.size(); ++s) {
      if (owner_[s] == kNone) fail(FailureCategory::BrokenChain, seg_name(s), "segment is on no edge image");
    }
  }

  void geometry() {
    distinct_vertices();
    star_directions();
    gamma_pairs();
    rays_against_gamma();
    report_.crossings_on_gamma = crossing_pairs_;
    if (report_.crossings_on_gamma != o_.claimed_crossings) {
      fail(FailureCategory::CrossingMismatch, "complex",
           std::to_string(report_.crossings_on_gamma) + " crossings among edge images, " +
               std::to_string(o_.claimed_crossings) + " claimed");
    }
  }

  void distinct_vertices() {
    std::map<std::pair<Scalar, Scalar>, std::size_t, PairLess> seen;
    for (std::size_t v = 0; v < c_.vertices.size(); ++v) {
      auto [it, fresh] = seen.emplace(std::pair{c_.vertices[v].x, c_.vertices[v].y}, v);
      if (!fresh) {
        fail(FailureCategory::InvalidGeometry, "vertex " + std::to_string(v), "coincides with vertex " + std::to_string(it->second));
      }
    }
  }

  // Two elements leaving a vertex in the same direction overlap.
  void star_directions() {
    std::vector<std::vector<Dir>> star(c_.vertices.size());
    for (std::size_t i = 0; i < c_.segments.size(); ++i) {
      if (!seg_ok_[i]) continue;
      star[c_.segments[i].a].push_back(seg_[i].dir);
      star[c_.segments[i].b].push_back({-seg_[i].dir.m, -seg_[i].dir.n});
    }
    for (std::size_t i = 0; i < c_.rays.size(); ++i) {
      if (ray_ok_[i]) star[c_.rays[i].apex].push_back(ray_[i].dir);
    }
    for (std::size_t v = 0; v < star.size(); ++v) {
      auto dirs = star[v];
      std::sort(dirs.begin(), dirs.end());
      if (std::adjacent_find(dirs.begin(), dirs.end()) != dirs.end()) {
        fail(FailureCategory::InvalidGeometry, "vertex " + std::to_string(v), "two elements leave in the same direction");
      }
    }
  }

  // Gamma elements: chain segments and the rays of infinite edges.
  void gamma_pairs() {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < seg_.size(); ++i) {
      if (seg_ok_[i]) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return seg_[a].lo_x < seg_[b].lo_x; });
    double span = 1.0;
    for (const auto& p : c_.vertices) span = std::max(span, std::abs(p.x.approx()) + std::abs(p.y.approx()));
    const double tol = 1e-9 * span;

    for (std::size_t a = 0; a < order.size(); ++a) {
      const std::size_t i = order[a];
      const auto& si = c_.segments[i];
      for (std::size_t b = a + 1; b < order.size() && seg_[order[b]].lo_x <= seg_[i].hi_x + tol; ++b) {
        const std::size_t j = order[b];
        const auto& sj = c_.segments[j];
        if (quick_segments(approx_[si.a], approx_[si.b], approx_[sj.a], approx_[sj.b], err_) == Meet::None) continue;
        pair(seg_[i], owner_[i], seg_name(i), seg_[j], owner_[j], seg_name(j));
      }
    }
    for (std::size_t r = 0; r < c_.rays.size(); ++r) {
      if (!ray_ok_[r] || ray_owner_[r] == kNone) continue;
      for (std::size_t i = 0; i < seg_.size(); ++i) {
        if (seg_ok_[i]) pair(ray_[r], ray_owner_[r], ray_name(r), seg_[i], owner_[i], seg_name(i));
      }
      for (std::size_t q = r + 1; q < c_.rays.size(); ++q) {
        if (ray_ok_[q] && ray_owner_[q] != kNone) pair(ray_[r], ray_owner_[r], ray_name(r), ray_[q], ray_owner_[q], ray_name(q));
      }
    }
    std::sort(crossing_points_.begin(), crossing_points_.end(), PointOrder{});
    for (std::size_t i = 0; i + 1 < crossing_points_.size(); ++i) {
      if (crossing_points_[i] == crossing_points_[i + 1]) {
        fail(FailureCategory::InvalidGeometry, "complex", "three or more edge images meet at one point");
        break;
      }
    }
  }

  void pair(const Piece& a, std::size_t oa, const std::string& na, const Piece& b, std::size_t ob, const std::string& nb) {
    const MeetResult m = meet(a, b);
    switch (m.kind) {
      case Meet::None:
      case Meet::AtSharedVertex: return;
      case Meet::Overlap: fail(FailureCategory::InvalidGeometry, na, "overlaps " + nb); return;
      case Meet::Touch: fail(FailureCategory::InvalidGeometry, na, "touches " + nb); return;
      case Meet::Cross:
        if (oa == ob) {
          fail(FailureCategory::InvalidGeometry, na, "crosses " + nb + " on the same edge image");
          return;
        }
        ++crossing_pairs_;
        crossing_points_.push_back(m.at);
        return;
    }
  }

  // Balancing rays: none may pass through a vertex or a crossing of edge
  // images; crossings with edge images are counted.
  void rays_against_gamma() {
    std::map<Dir, std::vector<std::size_t>> by_axis;
    for (std::size_t r = 0; r < c_.rays.size(); ++r) {
      if (!ray_ok_[r] || ray_owner_[r] != kNone) continue;
      Dir d = ray_[r].dir;
      if (d.m < 0 || (d.m == 0 && d.n < 0)) d = {-d.m, -d.n};
      by_axis[d].push_back(r);
    }
    double span = 1.0;
    for (const auto& p : c_.vertices) span = std::max(span, std::abs(p.x.approx()) + std::abs(p.y.approx()));
    const double tol = 1e-9 * span;

    for (const auto& [axis, rays] : by_axis) {
      // vertices on each line of this direction
      std::map<Scalar, std::vector<std::size_t>, StructuralLess> lines;
      for (std::size_t v = 0; v < c_.vertices.size(); ++v) lines[det(c_.vertices[v], axis)].push_back(v);
      std::vector<std::pair<double, std::size_t>> keyed;
      for (std::size_t r : rays) {
        const Piece& p = ray_[r];
        const Scalar key = det(p.origin, axis);
        for (std::size_t v : lines[key]) {
          if (v != p.from && inner(c_.vertices[v] - p.origin, p.dir).sign() > 0) {
            fail(FailureCategory::InvalidGeometry, ray_name(r), "passes through vertex " + std::to_string(v));
          }
        }
        for (const auto& x : crossing_points_) {
          const Point w = x - p.origin;
          if (det(w, p.dir).is_zero() && inner(w, p.dir).sign() > 0) {
            fail(FailureCategory::InvalidGeometry, ray_name(r), "passes through a crossing of edge images");
          }
        }
        keyed.push_back({key.approx(), r});
      }
      std::sort(keyed.begin(), keyed.end());
      auto count_against = [&](const Piece& target, double k0, double k1) {
        if (k0 > k1) std::swap(k0, k1);
        auto lo = std::lower_bound(keyed.begin(), keyed.end(), std::pair{k0 - tol, std::size_t{0}});
        for (auto it = lo; it != keyed.end() && it->first <= k1 + tol; ++it) {
          const Piece& r = ray_[it->second];
          if (target.to) {
            auto quick = quick_ray_segment(approx_[r.from], r.dir, approx_[target.from], approx_[*target.to], err_);
            if (quick == Meet::None) continue;
            if (quick == Meet::Cross) {
              ++report_.ray_crossings;
              continue;
            }
          }
          const MeetResult m = meet(r, target);
          if (m.kind == Meet::Cross) ++report_.ray_crossings;
          if (m.kind == Meet::Overlap) fail(FailureCategory::InvalidGeometry, ray_name(it->second), "overlaps an edge image");
          if (m.kind == Meet::Touch) fail(FailureCategory::InvalidGeometry, ray_name(it->second), "touches an edge image");
        }
      };
      const double am = static_cast<double>(axis.m), an = static_cast<double>(axis.n);
      for (std::size_t i = 0; i < seg_.size(); ++i) {
        if (!seg_ok_[i]) continue;
        const auto& s = c_.segments[i];
        auto key = [&](std::size_t v) { return c_.vertices[v].x.approx() * an - c_.vertices[v].y.approx() * am; };
        count_against(seg_[i], key(s.a), key(s.b));
      }
      for (std::size_t q = 0; q < c_.rays.size(); ++q) {
        if (!ray_ok_[q] || ray_owner_[q] == kNone) continue;
        for (std::size_t r : rays) {
          if (meet(ray_[r], ray_[q]).kind == Meet::Cross) ++report_.ray_crossings;
        }
      }
    }
  }

  void lambda() {
    const ValueGroup& group = *o_.lambda;
    bool ok = true;
    for (std::size_t v = 0; v < c_.vertices.size(); ++v) {
      if (!group.contains(c_.vertices[v].x) || !group.contains(c_.vertices[v].y)) {
        fail(FailureCategory::NotInLambda, "vertex " + std::to_string(v), "coordinates outside the value group");
        ok = false;
      }
    }
    for (const auto& e : g_.edges) {
      if (!e.length.is_infinite() && !group.contains(e.length.value())) {
        fail(FailureCategory::NotInLambda, e.id, "length outside the value group");
        ok = false;
      }
    }
    if (ok && report_.geometry_valid) {
      auto cert = projections(c_, group);
      for (const auto& f : cert.failures) fail(FailureCategory::NotInLambda, "projection", f);
      ok = cert.ok();
    }
    report_.lambda_certified = ok;
  }

  struct PairLess {
    bool operator()(const std::pair<Scalar, Scalar>& a, const std::pair<Scalar, Scalar>& b) const {
      StructuralLess less;
      if (less(a.first, b.first)) return true;
      if (less(b.first, a.first)) return false;
      return less(a.second, b.second);
    }
  };
  struct PointOrder {
    bool operator()(const Point& a, const Point& b) const { return PairLess{}({a.x, a.y}, {b.x, b.y}); }
  };

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  const BalancedComplex& c_;
  const EmbeddingMap& map_;
  const MetricGraph& g_;
  const VerifyOptions& o_;
  Report report_;
  std::vector<Approx> approx_;
  double err_ = 0;  // bound on the error of every approximate coordinate
  std::vector<Piece> seg_;
  std::vector<char> seg_ok_;
  std::vector<Piece> ray_;
  std::vector<char> ray_ok_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> ray_owner_;
  std::size_t crossing_pairs_ = 0;
  std::vector<Point> crossing_points_;
};

}  // namespace

Report verify(const BalancedComplex& c, const EmbeddingMap& map, const MetricGraph& g, const VerifyOptions& options) {
  try {
    return Checker(c, map, g, options).run();
  } catch (const Error& e) {
    Report r;
    r.crossings_claimed = options.claimed_crossings;
    r.crossings_exact = options.crossings_exact;
    r.geometry_valid = false;
    r.failures.push_back({FailureCategory::InvalidGeometry, "complex", e.what()});
    return r;
  }
}

}  // namespace tropembed
