#include <algorithm>
#include <array>

#include "tropembed/errors.hpp"
#include "tropembed/planar_layout.hpp"

namespace tropembed {

namespace {

Rational linf(const RationalPoint& a, const RationalPoint& b) {
  return std::max(abs(a.x - b.x), abs(a.y - b.y));
}

// Closed segment [p, q] meets the closed box |z - c|_inf <= r.
bool segment_meets_box(const RationalPoint& p, const RationalPoint& q, const RationalPoint& c, const Rational& r) {
  Rational t0 = 0, t1 = 1;
  auto clip = [&](const Rational& start, const Rational& delta, const Rational& lo, const Rational& hi) {
    if (delta == 0) return start >= lo && start <= hi;
    Rational a = (lo - start) / delta;
    Rational b = (hi - start) / delta;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
    return t0 <= t1;
  };
  return clip(p.x, q.x - p.x, c.x - r, c.x + r) && clip(p.y, q.y - p.y, c.y - r, c.y + r);
}

// Perimeter parameter of a point on the unit L-infinity circle, in [-1, 7):
// east side around 0, north 2, west 4, south 6.
Rational perimeter_param(const RationalPoint& w) {
  if (w.x == 1 && w.y < 1) return w.y;
  if (w.y == 1) return Rational(2) - w.x;
  if (w.x == -1) return Rational(4) - w.y;
  return Rational(6) + w.x;
}

RationalPoint perimeter_point(Rational tau, const Rational& rho) {
  while (tau >= 7) tau -= 8;
  while (tau < -1) tau += 8;
  if (tau < 1) return {rho, rho * tau};
  if (tau < 3) return {rho * (Rational(2) - tau), rho};
  if (tau < 5) return {-rho, rho * (Rational(4) - tau)};
  return {rho * (tau - Rational(6)), -rho};
}

struct Arm {
  std::size_t chain = 0;
  bool before = false;  // arm precedes the crossing along its chain
  std::size_t far = 0;  // vertex at the other end of the fragment
  Rational tau;
  Rational target;
};

bool collinear(const RationalPoint& a, const RationalPoint& b, const RationalPoint& c) {
  return (b.x - a.x) * (c.y - a.y) == (b.y - a.y) * (c.x - a.x);
}

Drawing reroute(const Drawing& d, const Rational& r, long levels) {
  Drawing out;
  out.position = d.position;
  out.outer_corner = d.outer_corner;
  const Rational h = r / 4;

  // per chain, replacement paths keyed by dummy vertex
  struct Detour {
    std::vector<RationalPoint> in;   // from exit point inwards, ending at the bar end
    std::vector<RationalPoint> out;  // from the other bar end outwards to the exit point
  };
  std::vector<std::vector<std::pair<std::size_t, Detour>>> detours(d.chains.size());

  for (const auto& x : d.crossings) {
    if (!x.vertex) {
      out.crossings.push_back(x);
      continue;
    }
    const std::size_t cv = *x.vertex;
    const RationalPoint c = d.position[cv];
    std::vector<Arm> arms;
    for (std::size_t e : {x.edge_a, x.edge_b}) {
      const auto& ch = d.chains[e];
      auto it = std::find(ch.begin() + 1, ch.end() - 1, cv);
      std::size_t i = static_cast<std::size_t>(it - ch.begin());
      arms.push_back({e, true, ch[i - 1], 0, 0});
      arms.push_back({e, false, ch[i + 1], 0, 0});
    }
    for (auto& a : arms) {
      const auto& xp = d.position[a.far];
      Rational dist = linf(xp, c);
      a.tau = perimeter_param({(xp.x - c.x) / dist, (xp.y - c.y) / dist});
    }
    std::sort(arms.begin(), arms.end(), [](const Arm& p, const Arm& q) { return p.tau < q.tau; });
    // first strand takes east/west (targets = 0 mod 4), second north/south
    const bool first_is_a = arms[0].chain == x.edge_a;
    Rational best_cost = -1;
    long best_t0 = 0;
    for (long t0 = -4; t0 <= 8; t0 += 2) {
      if (((t0 % 4) + 4) % 4 != (first_is_a ? 0 : 2)) continue;
      Rational cost = 0;
      for (long j = 0; j < 4; ++j) cost += abs(Rational(t0 + 2 * j) - arms[static_cast<std::size_t>(j)].tau);
      if (best_cost < 0 || cost < best_cost) {
        best_cost = cost;
        best_t0 = t0;
      }
    }
    for (long j = 0; j < 4; ++j) arms[static_cast<std::size_t>(j)].target = Rational(best_t0 + 2 * j);

    for (const auto& a : arms) {
      std::vector<RationalPoint> path;  // exit point inwards
      for (long j = 0; j <= levels; ++j) {
        Rational t(j, levels);
        Rational rho = r - (r - h) * t;
        Rational tau = a.tau + (a.target - a.tau) * t;
        RationalPoint off = perimeter_point(tau, rho);
        path.push_back({c.x + off.x, c.y + off.y});
      }
      auto& list = detours[a.chain];
      auto slot = std::find_if(list.begin(), list.end(), [&](const auto& p) { return p.first == cv; });
      if (slot == list.end()) {
        list.push_back({cv, {}});
        slot = list.end() - 1;
      }
      if (a.before) {
        slot->second.in = path;
      } else {
        std::reverse(path.begin(), path.end());
        slot->second.out = path;
      }
    }
    out.crossings.push_back({x.edge_a, x.edge_b, c, std::nullopt});
  }

  for (std::size_t e = 0; e < d.chains.size(); ++e) {
    const auto& ch = d.chains[e];
    std::vector<std::size_t> chain{ch.front()};
    std::vector<char> rigid;
    auto push = [&](std::size_t v, char flag) {
      chain.push_back(v);
      rigid.push_back(flag);
    };
    auto add_point = [&](const RationalPoint& p, char flag) {
      out.position.push_back(p);
      push(out.position.size() - 1, flag);
    };
    bool after_detour = false;
    for (std::size_t i = 1; i < ch.size(); ++i) {
      auto slot = std::find_if(detours[e].begin(), detours[e].end(), [&](const auto& p) { return p.first == ch[i]; });
      if (slot == detours[e].end()) {
        // the stretch from an exit point to the next vertex is free
        push(ch[i], after_detour ? 0 : d.rigid[e][i - 1]);
        after_detour = false;
        continue;
      }
      const auto& in = slot->second.in;
      const auto& outward = slot->second.out;
      add_point(in.front(), 0);
      for (std::size_t k = 1; k < in.size(); ++k) add_point(in[k], 1);
      for (const auto& p : outward) add_point(p, 1);  // the first of these closes the bar
      after_detour = true;
    }
    out.chains.push_back(std::move(chain));
    out.rigid.push_back(std::move(rigid));
  }

  // merge collinear runs of rigid segments
  for (std::size_t e = 0; e < out.chains.size(); ++e) {
    auto& ch = out.chains[e];
    auto& rg = out.rigid[e];
    std::vector<std::size_t> nc{ch.front()};
    std::vector<char> nr;
    for (std::size_t i = 1; i < ch.size(); ++i) {
      const char flag = rg[i - 1];
      if (nc.size() >= 2 && flag && nr.back() && collinear(out.position[nc[nc.size() - 2]], out.position[nc.back()], out.position[ch[i]])) {
        nc.back() = ch[i];
        continue;
      }
      nc.push_back(ch[i]);
      nr.push_back(flag);
    }
    ch = std::move(nc);
    rg = std::move(nr);
  }

  // drop vertices no chain uses any more, keeping the order of the rest
  std::vector<char> used(out.position.size(), 0);
  for (const auto& ch : out.chains) {
    for (auto v : ch) used[v] = 1;
  }
  used[d.outer_corner] = 1;
  std::vector<long> remap(out.position.size(), -1);
  std::vector<RationalPoint> kept;
  for (std::size_t v = 0; v < out.position.size(); ++v) {
    if (!used[v]) continue;
    remap[v] = static_cast<long>(kept.size());
    kept.push_back(out.position[v]);
  }
  for (auto& ch : out.chains) {
    for (auto& v : ch) v = static_cast<std::size_t>(remap[v]);
  }
  out.outer_corner = static_cast<std::size_t>(remap[d.outer_corner]);
  out.position = std::move(kept);
  return out;
}

}  // namespace

Drawing orthogonalize_crossings(const Drawing& d, const Rational& radius) {
  bool any = false;
  for (const auto& x : d.crossings) any = any || x.vertex.has_value();
  if (!any) return d;

  std::vector<std::size_t> centres;
  for (const auto& x : d.crossings) {
    if (x.vertex) centres.push_back(*x.vertex);
  }
  const auto& corner = d.position[d.outer_corner];
  bool corner_is_minimum = true;
  for (std::size_t v = 0; v < d.position.size(); ++v) {
    if (v != d.outer_corner && d.position[v].x + d.position[v].y <= corner.x + corner.y) corner_is_minimum = false;
  }
  for (std::size_t i = 0; i < centres.size(); ++i) {
    const auto& c = d.position[centres[i]];
    // keep the outer corner the unique minimum of x + y
    if (corner_is_minimum && c.x + c.y - 2 * radius <= corner.x + corner.y) {
      throw Error(ErrorCode::NeighborhoodConflict, "a crossing neighbourhood reaches the outer corner");
    }
    for (std::size_t j = i + 1; j < centres.size(); ++j) {
      if (linf(c, d.position[centres[j]]) <= 2 * radius) {
        throw Error(ErrorCode::NeighborhoodConflict, "crossing neighbourhoods overlap");
      }
    }
    for (std::size_t v = 0; v < d.position.size(); ++v) {
      if (v != centres[i] && linf(c, d.position[v]) <= radius) {
        throw Error(ErrorCode::NeighborhoodConflict, "a vertex lies in a crossing neighbourhood");
      }
    }
    for (const auto& ch : d.chains) {
      for (std::size_t k = 0; k + 1 < ch.size(); ++k) {
        if (ch[k] == centres[i] || ch[k + 1] == centres[i]) continue;
        if (segment_meets_box(d.position[ch[k]], d.position[ch[k + 1]], c, radius)) {
          throw Error(ErrorCode::NeighborhoodConflict, "a segment passes through a crossing neighbourhood");
        }
      }
    }
  }

  const std::size_t expected = d.crossings.size();
  for (long levels = 4; levels <= 32; levels *= 2) {
    Drawing out = reroute(d, radius, levels);
    try {
      auto complex = to_complex(out);
      auto all = all_elements(complex);
      if (crossings(complex, all).size() == expected) return out;
    } catch (const Error&) {
      // detours touch each other at this resolution
    }
  }
  throw Error(ErrorCode::NeighborhoodConflict, "could not reroute crossings inside their neighbourhoods");
}

Drawing orthogonalize_crossings(const Drawing& d) {
  Rational r = -1;
  for (std::size_t i = 0; i < d.position.size(); ++i) {
    for (std::size_t j = i + 1; j < d.position.size(); ++j) {
      Rational dist = linf(d.position[i], d.position[j]);
      if (dist > 0 && (r < 0 || dist < r)) r = dist;
    }
  }
  if (r < 0) return d;
  r /= 2;
  for (int attempt = 0; attempt < 64; ++attempt) {
    try {
      return orthogonalize_crossings(d, r);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NeighborhoodConflict) throw;
      r /= 2;
    }
  }
  throw Error(ErrorCode::NeighborhoodConflict, "no radius isolates the crossings");
}

}  // namespace tropembed
