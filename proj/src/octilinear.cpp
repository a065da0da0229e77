#include <array>

#include "tropembed/errors.hpp"

#include "tropembed/balancer.hpp"

namespace tropembed {

namespace {

using Vec = std::array<Rational, 2>;

const std::array<std::array<int, 2>, 8> kOctilinear = {
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

Rational cross(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }
Vec sub(const RationalPoint& a, const RationalPoint& b) { return {a.x - b.x, a.y - b.y}; }

int orient(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c) {
  const Rational v = cross(sub(b, a), sub(c, a));
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

bool on_segment(const RationalPoint& p, const RationalPoint& a, const RationalPoint& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_meet(const RationalPoint& p1, const RationalPoint& q1, const RationalPoint& p2, const RationalPoint& q2) {
  const int o1 = orient(p1, q1, p2), o2 = orient(p1, q1, q2), o3 = orient(p2, q2, p1), o4 = orient(p2, q2, q1);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(p2, p1, q1)) || (o2 == 0 && on_segment(q2, p1, q1)) ||
         (o3 == 0 && on_segment(p1, p2, q2)) || (o4 == 0 && on_segment(q1, p2, q2));
}

// Segments sharing the endpoint x meet elsewhere only when they leave x in the same direction.
bool overlap_at(const RationalPoint& x, const RationalPoint& a, const RationalPoint& b) {
  const Vec u = sub(a, x), w = sub(b, x);
  return cross(u, w) == 0 && u[0] * w[0] + u[1] * w[1] > 0;
}

// Pieces may share only the host endpoints a and b with other segments.
bool conflict(const RationalPoint& p, const RationalPoint& q, const RationalPoint& a, const RationalPoint& b,
              const RationalPoint& host_a, const RationalPoint& host_b) {
  auto shared = [&](const RationalPoint& x) { return x == host_a || x == host_b; };
  if (p == a && shared(p)) return overlap_at(p, q, b);
  if (p == b && shared(p)) return overlap_at(p, q, a);
  if (q == a && shared(q)) return overlap_at(q, p, b);
  if (q == b && shared(q)) return overlap_at(q, p, a);
  return segments_meet(p, q, a, b);
}

bool is_octilinear(const Vec& w) { return w[0] == 0 || w[1] == 0 || w[0] == w[1] || w[0] == -w[1]; }

// The two consecutive octilinear directions bracketing w and the
// coefficients of w in that basis (the basis has determinant one).
std::pair<std::array<Vec, 2>, std::array<Rational, 2>> bracket(const Vec& w) {
  for (std::size_t i = 0; i < kOctilinear.size(); ++i) {
    const auto& s = kOctilinear[i];
    const auto& t = kOctilinear[(i + 1) % kOctilinear.size()];
    Vec d1{Rational(s[0]), Rational(s[1])}, d2{Rational(t[0]), Rational(t[1])};
    Rational a = cross(w, d2), b = cross(d1, w);
    if (a > 0 && b > 0) return {{d1, d2}, {a, b}};
  }
  throw Error(ErrorCode::DegenerateSegment, "zero-length segment");
}

std::vector<RationalPoint> zigzag(const RationalPoint& a, const std::array<Vec, 2>& d,
                                  const std::array<Rational, 2>& coef, int teeth, bool swap) {
  const std::size_t f = swap ? 1 : 0, s = 1 - f;
  const Rational k(teeth);
  std::vector<RationalPoint> pts{a};
  RationalPoint p = a;
  for (int i = 0; i < teeth; ++i) {
    p = {p.x + d[f][0] * coef[f] / k, p.y + d[f][1] * coef[f] / k};
    pts.push_back(p);
    p = {p.x + d[s][0] * coef[s] / k, p.y + d[s][1] * coef[s] / k};
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

Drawing octilinear_refine(const Drawing& input, const std::vector<char>& infinite) {
  Drawing d = input;
  Rational span(1);
  for (const auto& p : d.position) span += abs(p.x) + abs(p.y);
  span *= 4;

  // everything a zigzag must avoid, refreshed as chains change
  auto obstacles = [&](std::size_t skip_chain, std::size_t skip_index) {
    std::vector<std::pair<RationalPoint, RationalPoint>> out;
    for (std::size_t e = 0; e < d.chains.size(); ++e) {
      const auto& ch = d.chains[e];
      for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        if (e == skip_chain && i == skip_index) continue;
        out.push_back({d.position[ch[i]], d.position[ch[i + 1]]});
      }
      if (infinite[e]) {
        const RationalPoint q = d.position[ch.back()];
        out.push_back({q, {q.x - span, q.y - span}});
      }
    }
    return out;
  };

  for (std::size_t e = 0; e < d.chains.size(); ++e) {
    if (infinite[e]) continue;
    for (std::size_t i = 0; i + 1 < d.chains[e].size(); ++i) {
      if (d.rigid[e][i]) continue;
      const RationalPoint a = d.position[d.chains[e][i]], b = d.position[d.chains[e][i + 1]];
      const Vec w = sub(b, a);
      if (is_octilinear(w)) continue;
      const auto [dirs, coef] = bracket(w);
      const auto others = obstacles(e, i);
      std::optional<std::vector<RationalPoint>> found;
      bool stubs = false;
      auto clear = [&](const std::vector<RationalPoint>& pts) {
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
          for (const auto& [p, q] : others) {
            if (conflict(pts[j], pts[j + 1], p, q, a, b)) return false;
          }
        }
        return true;
      };
      for (int teeth = 1; teeth <= 1024 && !found; teeth *= 2) {
        for (bool with_stubs : {false, true}) {
          for (bool swap : {false, true}) {
            std::vector<RationalPoint> pts;
            if (with_stubs) {
              // straight eighths at both ends, the zigzag in between
              const RationalPoint a1{a.x + w[0] / 8, a.y + w[1] / 8};
              const std::array<Rational, 2> inner{coef[0] * Rational(3, 4), coef[1] * Rational(3, 4)};
              pts = zigzag(a1, dirs, inner, teeth, swap);
              pts.insert(pts.begin(), a);
              pts.push_back(b);
            } else {
              pts = zigzag(a, dirs, coef, teeth, swap);
            }
            if (clear(pts)) {
              found = std::move(pts);
              stubs = with_stubs;
              break;
            }
          }
          if (found) break;
        }
      }
      if (!found) continue;
      std::vector<std::size_t> inner;
      for (std::size_t j = 1; j + 1 < found->size(); ++j) {
        d.position.push_back((*found)[j]);
        inner.push_back(d.position.size() - 1);
      }
      auto& ch = d.chains[e];
      ch.insert(ch.begin() + static_cast<std::ptrdiff_t>(i) + 1, inner.begin(), inner.end());
      auto& rg = d.rigid[e];
      rg.insert(rg.begin() + static_cast<std::ptrdiff_t>(i) + 1, inner.size(), 0);
      if (stubs) {
        rg[i] = 1;
        rg[i + inner.size()] = 1;
      }
      i += inner.size();
    }
  }
  return d;
}

}  // namespace tropembed
