#include <algorithm>
#include <exception>
#include <map>

#include "tropembed/balancer.hpp"
#include "tropembed/creneau.hpp"
#include "tropembed/errors.hpp"

namespace tropembed {

namespace {

struct Layout {
  LayoutGraph graph;
  std::vector<std::string> finite;       // layout vertex -> graph vertex
  std::map<std::string, std::size_t> index;
  std::optional<std::size_t> apex;       // shared far end of every infinite edge
};

Layout build_layout(const MetricGraph& g) {
  Layout out;
  for (const auto& v : g.vertices) {
    if (g.is_infinite(v)) continue;
    out.index[v] = out.finite.size();
    out.finite.push_back(v);
  }
  out.graph.n = out.finite.size();
  for (const auto& e : g.edges) {
    if (e.length.is_infinite()) {
      if (!out.apex) out.apex = out.graph.n++;
      const std::string& base = g.is_infinite(e.v) ? e.u : e.v;
      out.graph.edges.push_back({out.index.at(base), *out.apex});
    } else {
      out.graph.edges.push_back({out.index.at(e.u), out.index.at(e.v)});
    }
  }
  return out;
}

Planarization solve_crossings(const LayoutGraph& g, const EmbedOptions& options) {
  if (options.solver == CrossingSolver::Heuristic) return planarize_heuristic(g, options.seed);
  try {
    return crossing_number_exact(g, options.budget, options.exec);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded) throw;
    return planarize_heuristic(g, options.seed);
  }
}

// Straight-line drawing with every remaining crossing a proper one.
std::pair<Drawing, Planarization> draw(Planarization p, std::size_t corner) {
  for (;;) {
    p = make_simple(p);
    Drawing d = straight_line_draw(p, corner);
    auto bad = non_alternating_crossings(d);
    if (bad.empty()) return {d, p};
    const std::size_t vertex = *d.crossings[bad.front()].vertex;
    auto it = std::find_if(p.dummies.begin(), p.dummies.end(), [&](const auto& x) { return x.vertex == vertex; });
    p = remove_crossing(p, static_cast<std::size_t>(it - p.dummies.begin()));
    p.exact = false;
  }
}

// Cuts every chain into the apex by the line x + y = eta halfway between
// the apex and the rest of the drawing; the chain then ends on that line.
void cut_at_apex(Drawing& d, std::size_t apex, const std::vector<char>& infinite) {
  const RationalPoint o = d.position[apex];
  const Rational base = o.x + o.y;
  std::optional<Rational> low;
  for (std::size_t v = 0; v < d.position.size(); ++v) {
    if (v == apex) continue;
    Rational s = d.position[v].x + d.position[v].y;
    if (!low || s < *low) low = s;
  }
  if (!low || *low <= base) throw Error(ErrorCode::NeighborhoodConflict, "the apex is not the lowest point of the drawing");
  const Rational eta = (base + *low) / 2;
  for (std::size_t e = 0; e < d.chains.size(); ++e) {
    if (!infinite[e]) continue;
    auto& ch = d.chains[e];
    const RationalPoint p = d.position[ch[ch.size() - 2]];
    const Rational t = (eta - base) / (p.x + p.y - base);
    d.position.push_back({o.x + (p.x - o.x) * t, o.y + (p.y - o.y) * t});
    ch.back() = d.position.size() - 1;
  }
}

void check_in_group(const ValueGroup& lambda, const Scalar& s, const std::string& what) {
  if (!lambda.contains(s)) throw Error(ErrorCode::NotInLambda, what + " = " + s.str());
}

}  // namespace

Embedding embed_isometric(const MetricGraph& input, const EmbedOptions& options) {
  validate(input);
  Embedding out;
  std::tie(out.modified, out.trace) = normalize_simple(input);
  const MetricGraph& g = out.modified;
  const bool lambda_mode = options.mode == Mode::Lambda;
  const ValueGroup group = lambda_mode ? options.lambda : ValueGroup::rationals();
  for (const auto& e : g.edges) {
    if (!e.length.is_infinite()) check_in_group(group, e.length.value(), "length of " + e.id);
  }
  if (options.epsilon) check_in_group(group, *options.epsilon, "corridor cap");

  const Layout layout = build_layout(g);
  std::vector<char> infinite(g.edges.size(), 0);
  std::vector<std::optional<Scalar>> lengths(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    infinite[e] = g.edges[e].length.is_infinite();
    if (!infinite[e]) lengths[e] = g.edges[e].length.value();
  }

  BalancedComplex& c = out.complex;
  std::vector<Point> crossing_points;
  if (layout.graph.edges.empty()) {
    // a single vertex
    for (const auto& v : g.vertices) out.map.vertex_image[v] = c.add_vertex({Scalar(0), Scalar(0)});
    out.crossings_exact = true;
    out.scale = group.base_scale();
  } else {
    Planarization p = solve_crossings(layout.graph, options);
    auto [drawing, final_p] = draw(std::move(p), layout.apex.value_or(0));
    out.crossings = final_p.crossings();
    out.crossings_exact = final_p.exact;
    Drawing d = orthogonalize_crossings(drawing);
    if (layout.apex) cut_at_apex(d, *layout.apex, infinite);
    d = octilinear_refine(d, infinite);

    // complex before the staircases, in drawing units
    std::vector<std::optional<std::size_t>> image(d.position.size());
    auto vertex_of = [&](std::size_t v) {
      if (!image[v]) image[v] = c.add_vertex({Scalar(d.position[v].x), Scalar(d.position[v].y)});
      return *image[v];
    };
    for (std::size_t v = 0; v < layout.finite.size(); ++v) vertex_of(v);
    std::vector<std::vector<std::size_t>> chain_segments(d.chains.size());
    std::vector<std::size_t> hosts;
    std::vector<std::pair<std::size_t, std::size_t>> host_slot;  // (chain, position)
    std::vector<std::optional<std::size_t>> chain_ray(d.chains.size());
    for (std::size_t e = 0; e < d.chains.size(); ++e) {
      const auto& ch = d.chains[e];
      for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
        std::size_t s = c.add_segment(vertex_of(ch[i]), vertex_of(ch[i + 1]));
        chain_segments[e].push_back(s);
        if (!infinite[e] && !d.rigid[e][i]) {
          hosts.push_back(s);
          host_slot.push_back({e, i});
        }
      }
      if (infinite[e]) chain_ray[e] = c.add_ray(vertex_of(ch.back()), PrimitiveVector{-1, -1});
    }

    // corridors do not depend on the scale; wide ones take a larger share
    auto corridors = place_corridors(c, hosts, std::nullopt, options.exec);
    std::vector<std::vector<Rational>> weight(d.chains.size());
    for (std::size_t e = 0; e < d.chains.size(); ++e) weight[e].assign(d.chains[e].size() - 1, Rational(1));
    for (std::size_t h = 0; h < hosts.size(); ++h) {
      weight[host_slot[h].first][host_slot[h].second] = corridors[h].epsilon.rational_part();
    }
    Fit fit = scale_to_fit(d, lengths, group, true, weight);
    out.scale = fit.scale;
    for (auto& v : c.vertices) v = {fit.scale * v.x.rational_part(), fit.scale * v.y.rational_part()};
    for (auto& cor : corridors) {
      cor.epsilon = fit.scale * cor.epsilon.rational_part();
      if (options.epsilon && (*options.epsilon - cor.epsilon).sign() < 0) cor.epsilon = *options.epsilon;
    }
    for (const auto& x : d.crossings) crossing_points.push_back({fit.scale * x.at.x, fit.scale * x.at.y});

    // staircases, generated independently and merged in host order
    std::vector<CreneauPath> paths(hosts.size());
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) if (options.exec == Execution::Parallel)
    for (std::size_t h = 0; h < hosts.size(); ++h) {
      try {
        const auto& seg = c.segments[hosts[h]];
        const auto& [e, i] = host_slot[h];
        CreneauSpec spec{c.vertices[seg.a], c.vertices[seg.b], *fit.target[e][i], corridors[h].epsilon,
                         corridors[h].flip};
        paths[h] = lambda_mode ? insert_creneau_lambda(spec, group) : insert_creneau_rotated(spec);
      } catch (...) {
#pragma omp critical(tropembed_staircase_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);

    BalancedComplex full;
    full.vertices = c.vertices;
    std::vector<std::size_t> host_index(c.segments.size(), hosts.size());
    for (std::size_t h = 0; h < hosts.size(); ++h) host_index[hosts[h]] = h;
    for (std::size_t e = 0; e < d.chains.size(); ++e) {
      std::vector<std::size_t> segs;
      for (std::size_t s : chain_segments[e]) {
        const auto& seg = c.segments[s];
        const std::size_t h = host_index[s];
        if (h == hosts.size()) {
          segs.push_back(full.add_segment(seg.a, seg.b));
          continue;
        }
        const auto& pts = paths[h].points;
        std::size_t prev = seg.a;
        for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
          std::size_t next = full.add_vertex(pts[k]);
          segs.push_back(full.add_segment(prev, next));
          prev = next;
        }
        segs.push_back(full.add_segment(prev, seg.b));
      }
      chain_segments[e] = std::move(segs);
    }
    for (std::size_t e = 0; e < d.chains.size(); ++e) {
      if (chain_ray[e]) {
        const auto& r = c.rays[*chain_ray[e]];
        chain_ray[e] = full.add_ray(r.apex, r.direction, r.weight);
      }
    }
    c = std::move(full);

    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto& edge = g.edges[e];
      const std::string& from = infinite[e] && g.is_infinite(edge.u) ? edge.v : edge.u;
      out.map.edge_image[edge.id] = {chain_segments[e], chain_ray[e], from};
    }
    for (const auto& v : g.vertices) {
      out.map.vertex_image[v] = g.is_infinite(v) ? std::nullopt : std::optional<std::size_t>(*image[layout.index.at(v)]);
    }
  }

  out.balancing_rays = attach_balancing_rays(c, crossing_points);

  VerifyOptions vo;
  vo.claimed_crossings = out.crossings;
  vo.crossings_exact = out.crossings_exact;
  if (lambda_mode) vo.lambda = group;
  out.report = verify(c, out.map, g, vo);
  return out;
}

}  // namespace tropembed
