// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "tropembed/balancer.hpp"
#include "tropembed/creneau.hpp"
#include "tropembed/errors.hpp"
#include "tropembed/io.hpp"
#include "tropembed/planar_layout.hpp"
#include "tropembed/value_group.hpp"

using namespace tropembed;
using json = nlohmann::ordered_json;

namespace {

// Pinned limits.
constexpr double kTriangleSeconds = 1.0;
constexpr double kCrossingSeconds = 60.0;
constexpr int kCreneauInstances = 500;
constexpr int kLambdaGraphs = 50;
constexpr int kTransforms = 200;
constexpr int kFaults = 50;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void fail(const std::string& why) {
    pass = false;
    if (problems.size() < 8) problems.push_back(why);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- independent oracles -------------------------------------------------

// Direction and lattice length of b - a computed from coefficient vectors:
// every component pair (rational part, each generator) must be proportional
// to one integer direction.
struct OracleDirection {
  std::int64_t m = 0;
  std::int64_t n = 0;
  Scalar length;
};

std::optional<OracleDirection> oracle_direction(const Point& a, const Point& b) {
  const Scalar dx = b.x - a.x, dy = b.y - a.y;
  std::vector<std::pair<Rational, Rational>> parts{{dx.rational_part(), dy.rational_part()}};
  std::set<std::string> labels;
  for (const auto& [g, c] : dx.terms()) labels.insert(g->label);
  for (const auto& [g, c] : dy.terms()) labels.insert(g->label);
  for (const auto& l : labels) parts.emplace_back(dx.coefficient(l), dy.coefficient(l));

  std::optional<std::pair<BigInt, BigInt>> dir;
  for (const auto& [X, Y] : parts) {
    if (X == 0 && Y == 0) continue;
    const BigInt L = boost::multiprecision::lcm(boost::multiprecision::denominator(X),
                                                boost::multiprecision::denominator(Y));
    BigInt xi = boost::multiprecision::numerator(X) * (L / boost::multiprecision::denominator(X));
    BigInt yi = boost::multiprecision::numerator(Y) * (L / boost::multiprecision::denominator(Y));
    const BigInt g = boost::multiprecision::gcd(abs(xi), abs(yi));
    xi /= g;
    yi /= g;
    if (!dir) {
      dir = {xi, yi};
    } else if (X * Rational(dir->second) != Y * Rational(dir->first)) {
      return std::nullopt;
    }
  }
  if (!dir) return std::nullopt;
  OracleDirection out;
  out.m = dir->first.convert_to<std::int64_t>();
  out.n = dir->second.convert_to<std::int64_t>();
  out.length = out.m != 0 ? dx / out.m : dy / out.n;
  if (out.length.sign() < 0) {
    out.m = -out.m;
    out.n = -out.n;
    out.length = -out.length;
  }
  return out;
}

// Weighted sum of outgoing primitive vectors at every vertex.
std::vector<std::pair<std::int64_t, std::int64_t>> oracle_defects(const BalancedComplex& c) {
  std::vector<std::pair<std::int64_t, std::int64_t>> d(c.vertices.size(), {0, 0});
  for (const auto& s : c.segments) {
    const auto dir = oracle_direction(c.vertices[s.a], c.vertices[s.b]);
    if (!dir) {
      d[s.a].first += 1 << 20;  // poison: no rational slope
      continue;
    }
    d[s.a].first += s.weight * dir->m;
    d[s.a].second += s.weight * dir->n;
    d[s.b].first -= s.weight * dir->m;
    d[s.b].second -= s.weight * dir->n;
  }
  for (const auto& r : c.rays) {
    d[r.apex].first += r.weight * r.direction.m;
    d[r.apex].second += r.weight * r.direction.n;
  }
  return d;
}

bool oracle_in_group(const Scalar& v, const ValueGroup& lambda) {
  if (v.rational_part() != 0 && !lambda.contains_rationals()) return false;
  for (const auto& [g, c] : v.terms()) {
    const auto& gens = lambda.generators();
    if (std::none_of(gens.begin(), gens.end(), [&](const GeneratorRef& h) { return h->label == g->label; })) {
      return false;
    }
  }
  return true;
}

// Lattice length of an edge's image chain, from the oracle.
std::optional<Scalar> oracle_chain_length(const BalancedComplex& c, const EmbeddingMap::EdgeImage& img) {
  Scalar total;
  for (std::size_t s : img.segments) {
    const auto dir = oracle_direction(c.vertices[c.segments[s].a], c.vertices[c.segments[s].b]);
    if (!dir) return std::nullopt;
    total += dir->length;
  }
  return total;
}

std::vector<ElementId> gamma_segments(const EmbeddingMap& map) {
  std::vector<ElementId> out;
  for (const auto& [id, img] : map.edge_image) {
    for (std::size_t s : img.segments) out.push_back(ElementId::segment(s));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Balance, exact unit lengths on finite edges and the Γ crossing count.
void check_embedding(const MetricGraph& g, const Embedding& e, std::size_t expected_crossings, Outcome& out,
                     const std::string& name) {
  const auto defects = oracle_defects(e.complex);
  for (std::size_t v = 0; v < defects.size(); ++v) {
    if (defects[v] != std::pair<std::int64_t, std::int64_t>{0, 0}) {
      out.fail(name + ": vertex " + std::to_string(v) + " unbalanced");
      break;
    }
  }
  for (const auto& edge : e.modified.edges) {
    if (edge.length.is_infinite()) continue;
    const auto it = e.map.edge_image.find(edge.id);
    if (it == e.map.edge_image.end()) {
      out.fail(name + ": edge " + edge.id + " has no image");
      continue;
    }
    const auto len = oracle_chain_length(e.complex, it->second);
    if (!len || *len != edge.length.value()) out.fail(name + ": edge " + edge.id + " not isometric");
  }
  for (const auto& edge : g.edges) {
    if (edge.length.is_infinite() && !e.map.edge_image.count(edge.id)) {
      out.fail(name + ": infinite edge " + edge.id + " missing");
    }
  }
  const auto gamma = gamma_segments(e.map);
  std::size_t xs = 0;
  try {
    xs = crossings(e.complex, gamma, Execution::Serial).size();
  } catch (const Error& err) {
    out.fail(name + ": " + err.what());
  }
  if (xs != expected_crossings) {
    out.fail(name + ": " + std::to_string(xs) + " crossings, expected " + std::to_string(expected_crossings));
  }
  if (!e.report.ok()) out.fail(name + ": verifier reports " + std::string(to_string(e.report.failures[0].category)));
}

// ---- criterion 1 --------------------------------------------------------

MetricGraph tripod_with_leaves() {
  MetricGraph g;
  g.vertices = {"o", "a", "b", "c"};
  for (const char* v : {"a", "b", "c"}) g.edges.push_back({std::string("o") + v, "o", v, Length::finite(Scalar(1))});
  int k = 0;
  for (const char* v : {"a", "b", "c"}) {
    for (int j = 0; j < 2; ++j) {
      const std::string leaf = "inf" + std::to_string(k++);
      g.vertices.push_back(leaf);
      g.edges.push_back({std::string(v) + "_" + leaf, v, leaf, Length::infinite()});
    }
  }
  mark_infinite_vertices(g);
  return g;
}

Outcome criterion_triangle() {
  Outcome out;
  const MetricGraph tri = corpus::triangle_with_leaves();
  const auto t0 = std::chrono::steady_clock::now();
  const Embedding e = embed_isometric(tri);
  const double secs = seconds_since(t0);
  check_embedding(tri, e, 0, out, "triangle");
  if (secs >= kTriangleSeconds) out.fail("triangle took " + std::to_string(secs) + " s");

  const MetricGraph tripod = tripod_with_leaves();
  const auto t1 = std::chrono::steady_clock::now();
  const Embedding f = embed_isometric(tripod);
  const double secs2 = seconds_since(t1);
  check_embedding(tripod, f, 0, out, "tripod");
  if (secs2 >= kTriangleSeconds) out.fail("tripod took " + std::to_string(secs2) + " s");

  char buf[160];
  std::snprintf(buf, sizeof buf, "triangle %.3f s (%zu vertices), tripod %.3f s (%zu vertices)", secs,
                e.complex.vertices.size(), secs2, f.complex.vertices.size());
  out.detail = buf;
  return out;
}

// ---- criterion 2 --------------------------------------------------------

LayoutGraph layout_complete(int n) {
  LayoutGraph g;
  g.n = static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
  return g;
}

LayoutGraph layout_bipartite(int a, int b) {
  LayoutGraph g;
  g.n = static_cast<std::size_t>(a + b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) g.edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(a + j)});
  return g;
}

Outcome criterion_crossing_numbers() {
  Outcome out;
  struct Case {
    const char* name;
    LayoutGraph g;
    std::size_t expected;
  };
  const Case cases[] = {{"K4", layout_complete(4), 0}, {"K5", layout_complete(5), 1}, {"K3,3", layout_bipartite(3, 3), 1}};
  std::ostringstream detail;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const Planarization p = crossing_number_exact(c.g, EmbedOptions{}.budget, Execution::Parallel);
    const double secs = seconds_since(t0);
    if (!p.exact) out.fail(std::string(c.name) + ": not exact");
    if (p.crossings() != c.expected) {
      out.fail(std::string(c.name) + ": " + std::to_string(p.crossings()) + " crossings");
    }
    if (secs >= kCrossingSeconds) out.fail(std::string(c.name) + " took " + std::to_string(secs) + " s");
    detail << c.name << "=" << p.crossings() << " ";
  }
  const MetricGraph k5 = corpus::complete(5);
  const auto t0 = std::chrono::steady_clock::now();
  const Embedding e = embed_isometric(k5);
  const double secs = seconds_since(t0);
  check_embedding(k5, e, 1, out, "K5 embed");
  if (e.report.crossings_on_gamma != 1) out.fail("K5 embed: verifier counts " + std::to_string(e.report.crossings_on_gamma));
  if (secs >= kCrossingSeconds) out.fail("K5 embed took " + std::to_string(secs) + " s");
  char buf[96];
  std::snprintf(buf, sizeof buf, "embed K5 %.2f s, 1 crossing", secs);
  out.detail = detail.str() + buf;
  return out;
}

// ---- criterion 3 --------------------------------------------------------

Rational uniform_open_closed(std::mt19937_64& rng, const Rational& lo, const Rational& width) {
  // lo + width * k / 1000 with k in [1, 1000]
  std::uniform_int_distribution<int> k(1, 1000);
  return lo + width * Rational(k(rng), 1000);
}

Outcome criterion_creneau() {
  Outcome out;
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<int> comp(-7, 7), coord(-50, 50), den(1, 9);
  std::int64_t max_teeth = 0;
  for (int i = 0; i < kCreneauInstances; ++i) {
    std::int64_t p = 0, q = 0;
    while ((p == 0 && q == 0) || gcd64(p, q) != 1) {
      p = comp(rng);
      q = comp(rng);
    }
    const Rational x = uniform_open_closed(rng, 0, 10);
    const Rational alpha = uniform_open_closed(rng, x, 10);
    const Rational eps = uniform_open_closed(rng, 0, 1);
    const Point a{Scalar(Rational(coord(rng), den(rng))), Scalar(Rational(coord(rng), den(rng)))};
    const Point b{a.x + Scalar(x * p), a.y + Scalar(x * q)};
    const bool flip = i % 2 == 1;
    const CreneauSpec spec{a, b, Scalar(alpha), Scalar(eps), flip};
    const std::string tag = "instance " + std::to_string(i);
    CreneauPath c;
    try {
      c = insert_creneau_rotated(spec);
    } catch (const Error& err) {
      out.fail(tag + ": " + err.what());
      continue;
    }
    max_teeth = std::max(max_teeth, c.teeth);
    if (c.points.front() != a || c.points.back() != b) out.fail(tag + ": endpoints moved");

    // length
    Scalar total;
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k) {
      const auto d = oracle_direction(c.points[k], c.points[k + 1]);
      if (!d) {
        out.fail(tag + ": irrational slope");
        break;
      }
      total += d->length;
    }
    if (total != Scalar(alpha)) out.fail(tag + ": length " + total.str());

    // containment: a + s u + t v with 0 <= s <= x and t between 0 and +-eps
    const std::int64_t vm = flip ? q : -q, vn = flip ? -p : p;
    const std::int64_t det = p * vn - q * vm;
    for (const auto& pt : c.points) {
      const Rational wx = (pt.x - a.x).rational_part(), wy = (pt.y - a.y).rational_part();
      const Rational s = (wx * vn - wy * vm) / det;
      const Rational t = (wy * p - wx * q) / det;
      if (s < 0 || s > x || t < 0 || t > eps) {
        out.fail(tag + ": point outside corridor");
        break;
      }
    }

    // balance after rays, at every interior staircase vertex
    BalancedComplex bc;
    std::map<Point, std::size_t, PointLess> index;
    for (const auto& pt : c.points) index.emplace(pt, bc.add_vertex(pt));
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k) bc.add_segment(index.at(c.points[k]), index.at(c.points[k + 1]));
    for (const auto& r : c.rays) bc.add_ray(index.at(r.apex), r.direction, r.weight);
    const auto defects = oracle_defects(bc);
    for (std::size_t k = 1; k + 1 < c.points.size(); ++k) {
      if (defects[index.at(c.points[k])] != std::pair<std::int64_t, std::int64_t>{0, 0}) {
        out.fail(tag + ": staircase vertex " + std::to_string(k) + " unbalanced");
        break;
      }
    }

    // m even, delta <= eps, and delta * m covers the surplus
    if (c.teeth <= 0 || c.teeth % 2 != 0) out.fail(tag + ": m = " + std::to_string(c.teeth));
    if (c.delta > Scalar(eps)) out.fail(tag + ": delta above epsilon");
    if (c.delta * c.teeth != Scalar(alpha - x)) out.fail(tag + ": m delta != alpha - x");
  }
  out.detail = std::to_string(kCreneauInstances) + " instances, up to " + std::to_string(max_teeth) + " teeth";
  return out;
}

// ---- criteria 4 and 5 ----------------------------------------------------

struct LambdaOutput {
  std::string name;
  ValueGroup lambda;
  BalancedComplex complex;
};

std::vector<LambdaOutput>& lambda_outputs() {
  static std::vector<LambdaOutput> outputs;
  return outputs;
}

void certify_lambda(const MetricGraph& g, const ValueGroup& lambda, const std::string& name, Outcome& out) {
  EmbedOptions o;
  o.mode = Mode::Lambda;
  o.lambda = lambda;
  Embedding e;
  try {
    e = embed_isometric(g, o);
  } catch (const Error& err) {
    out.fail(name + ": " + err.what());
    return;
  }
  for (std::size_t v = 0; v < e.complex.vertices.size(); ++v) {
    const auto& p = e.complex.vertices[v];
    if (!oracle_in_group(p.x, lambda) || !oracle_in_group(p.y, lambda)) {
      out.fail(name + ": vertex " + std::to_string(v) + " outside the group");
      break;
    }
  }
  for (const auto& edge : e.modified.edges) {
    if (edge.length.is_infinite()) continue;
    const auto it = e.map.edge_image.find(edge.id);
    const auto len = it == e.map.edge_image.end() ? std::nullopt : oracle_chain_length(e.complex, it->second);
    if (!len || *len != edge.length.value()) out.fail(name + ": edge " + edge.id + " not isometric");
  }
  if (!e.report.ok()) out.fail(name + ": verifier reports " + std::string(to_string(e.report.failures[0].category)));
  if (e.report.lambda_certified != std::optional<bool>(true)) out.fail(name + ": lambda certificate missing");
  lambda_outputs().push_back({name, lambda, std::move(e.complex)});
}

// Piece lengths of the Λ staircase for n = 1..10, and their symbolic sum.
void check_staircase_identity(Outcome& out) {
  const auto gx = make_generator("x", "2.2360679775");
  const auto gl = make_generator("l", "7.3890560989");
  const Scalar x = Scalar::of(gx), l = Scalar::of(gl);
  for (std::int64_t n = 1; n <= 10; ++n) {
    const Scalar sum = x / 3 + x / 3 + (2 * n - 1) * (x / (6 * n - 3)) + 2 * n * ((l - x) / (2 * n));
    if (sum != l) out.fail("identity fails symbolically for n = " + std::to_string(n));

    const ValueGroup lambda(true, {gx});
    const Scalar target = x + Scalar(Rational(1, 2));
    const Scalar eps = (target - x) / (2 * n);
    const CreneauSpec spec{{Scalar(0), Scalar(0)}, {x, Scalar(0)}, target, eps};
    const CreneauPath c = insert_creneau_lambda(spec, lambda);
    std::multiset<Scalar, StructuralLess> got, want;
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k) {
      const auto d = oracle_direction(c.points[k], c.points[k + 1]);
      if (d) got.insert(d->length);
    }
    want.insert(x / 3);
    want.insert(x / 3);
    for (std::int64_t k = 0; k < 2 * n - 1; ++k) want.insert(x / (6 * n - 3));
    for (std::int64_t k = 0; k < 2 * n; ++k) want.insert((target - x) / (2 * n));
    if (c.teeth != 2 * n || got != want) out.fail("staircase pieces differ from the identity for n = " + std::to_string(n));
    Scalar total;
    for (const auto& v : got) total += v;
    if (total != target) out.fail("staircase length for n = " + std::to_string(n));
  }
}

Outcome criterion_lambda() {
  Outcome out;
  lambda_outputs().clear();
  std::mt19937_64 rng(77);
  for (int i = 0; i < kLambdaGraphs; ++i) {
    certify_lambda(corpus::random_graph(rng), ValueGroup::rationals(), "Q graph " + std::to_string(i), out);
  }
  const auto g = make_generator("g", "1.41421356237");
  const ValueGroup two(true, {g});
  for (int i = 0; i < kLambdaGraphs; ++i) {
    certify_lambda(corpus::random_lambda_graph(rng, g), two, "Q+Qg graph " + std::to_string(i), out);
  }
  check_staircase_identity(out);
  out.detail = std::to_string(2 * kLambdaGraphs) + " graphs over Q and Q + Qg, identity n = 1..10";
  return out;
}

Outcome criterion_projections() {
  Outcome out;
  std::size_t segments = 0;
  if (lambda_outputs().empty()) out.fail("no lambda outputs");
  for (const auto& o : lambda_outputs()) {
    const ProjectionCertificate cert = projections(o.complex, o.lambda);
    if (!cert.ok()) out.fail(o.name + ": certificate " + (cert.failures.empty() ? "" : cert.failures[0]));
    const auto& c = o.complex;
    if (cert.f.value.size() != c.vertices.size() || cert.f.segment_slope.size() != c.segments.size() ||
        cert.f.ray_slope.size() != c.rays.size()) {
      out.fail(o.name + ": projection sizes");
      continue;
    }
    for (std::size_t s = 0; s < c.segments.size(); ++s, ++segments) {
      const auto& seg = c.segments[s];
      const auto d = oracle_direction(c.vertices[seg.a], c.vertices[seg.b]);
      const std::int64_t fs = cert.f.segment_slope[s], gs = cert.g.segment_slope[s];
      // slopes along the oriented segment a -> b
      const bool forward = d && c.vertices[seg.a].x + d->length * d->m == c.vertices[seg.b].x &&
                           c.vertices[seg.a].y + d->length * d->n == c.vertices[seg.b].y;
      if (!d || !forward || fs != d->m || gs != d->n || gcd64(fs, gs) != 1) {
        out.fail(o.name + ": segment " + std::to_string(s) + " slopes");
        break;
      }
      // slope times length integrates exactly, so every cycle sum vanishes
      if (cert.f.value[seg.b] - cert.f.value[seg.a] != d->length * fs ||
          cert.g.value[seg.b] - cert.g.value[seg.a] != d->length * gs) {
        out.fail(o.name + ": segment " + std::to_string(s) + " does not integrate");
        break;
      }
    }
    for (std::size_t r = 0; r < c.rays.size(); ++r) {
      if (cert.f.ray_slope[r] != c.rays[r].direction.m || cert.g.ray_slope[r] != c.rays[r].direction.n) {
        out.fail(o.name + ": ray " + std::to_string(r) + " slopes");
        break;
      }
    }
    for (std::size_t v = 0; v < c.vertices.size(); ++v) {
      if (cert.f.value[v] != c.vertices[v].x || cert.g.value[v] != c.vertices[v].y) {
        out.fail(o.name + ": projection value at vertex " + std::to_string(v));
        break;
      }
    }
  }
  out.detail = std::to_string(lambda_outputs().size()) + " outputs, " + std::to_string(segments) + " segments";
  return out;
}

// ---- criterion 6 --------------------------------------------------------

UnimodularMatrix random_unimodular(std::mt19937_64& rng) {
  const UnimodularMatrix moves[] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {1, 0, 1, 1}, {1, 0, -1, 1},
                                    {0, 1, 1, 0}, {-1, 0, 0, 1}, {0, -1, 1, 0}};
  std::uniform_int_distribution<int> pick(0, 6), count(1, 6);
  UnimodularMatrix m;
  for (int k = count(rng); k > 0; --k) {
    const auto& e = moves[pick(rng)];
    m = {e.a * m.a + e.b * m.c, e.a * m.b + e.b * m.d, e.c * m.a + e.d * m.c, e.c * m.b + e.d * m.d};
  }
  return m;
}

Outcome criterion_invariance() {
  Outcome out;
  struct Source {
    std::string name;
    BalancedComplex complex;
    std::vector<ElementId> elements;
    std::vector<Scalar> lengths;
    std::vector<CrossingRecord> records;
  };
  std::vector<Source> sources;
  std::mt19937_64 rng(606);
  std::vector<std::pair<std::string, MetricGraph>> graphs = {{"triangle", corpus::triangle_with_leaves()},
                                                             {"K5", corpus::complete(5)},
                                                             {"K3,3", corpus::complete_bipartite(3, 3)}};
  for (int i = 0; i < 3; ++i) graphs.emplace_back("random " + std::to_string(i), corpus::random_graph(rng, 7, 3));
  for (auto& [name, g] : graphs) {
    const Embedding e = embed_isometric(g);
    Source s{name, e.complex, all_elements(e.complex), {}, {}};
    try {
      s.records = crossings(s.complex, s.elements, Execution::Parallel);
    } catch (const Error&) {
      s.elements = gamma_segments(e.map);  // balancing rays may meet in a triple point
      s.records = crossings(s.complex, s.elements, Execution::Parallel);
    }
    for (std::size_t k = 0; k < s.complex.segments.size(); ++k) s.lengths.push_back(tropical_length(s.complex.segment_geometry(k)));
    sources.push_back(std::move(s));
  }

  std::uniform_int_distribution<int> num(-40, 40), den(1, 13);
  std::size_t records = 0;
  for (int i = 0; i < kTransforms; ++i) {
    const Source& s = sources[i % sources.size()];
    const UnimodularMatrix m = random_unimodular(rng);
    const Point t{Scalar(Rational(num(rng), den(rng))), Scalar(Rational(num(rng), den(rng)))};
    const BalancedComplex moved = unimodular_transform(s.complex, m, t);
    const std::string tag = s.name + " transform " + std::to_string(i);
    for (std::size_t k = 0; k < moved.segments.size(); ++k) {
      if (tropical_length(moved.segment_geometry(k)) != s.lengths[k]) {
        out.fail(tag + ": length of segment " + std::to_string(k));
        break;
      }
    }
    for (std::size_t k = 0; k < moved.vertices.size(); ++k) {
      if (moved.vertices[k] != m.apply(s.complex.vertices[k]) + t) {
        out.fail(tag + ": vertex " + std::to_string(k) + " not mapped");
        break;
      }
    }
    std::vector<CrossingRecord> got;
    try {
      got = crossings(moved, s.elements, i % 2 == 0 ? Execution::Parallel : Execution::Serial);
    } catch (const Error& err) {
      out.fail(tag + ": " + err.what());
      continue;
    }
    if (got.size() != s.records.size()) {
      out.fail(tag + ": " + std::to_string(got.size()) + " crossings instead of " + std::to_string(s.records.size()));
      continue;
    }
    for (std::size_t k = 0; k < got.size(); ++k) {
      const auto& a = s.records[k];
      const auto& b = got[k];
      if (a.first != b.first || a.second != b.second || b.at != m.apply(a.at) + t) {
        out.fail(tag + ": crossing record " + std::to_string(k));
        break;
      }
    }
    records += got.size();
  }
  out.detail = std::to_string(kTransforms) + " transforms over " + std::to_string(sources.size()) + " complexes, " +
               std::to_string(records) + " crossing records compared";
  return out;
}

// ---- criterion 7 --------------------------------------------------------

Rational wire_rational(const json& j) { return parse_rational(j.get<std::string>()); }

Outcome criterion_faults() {
  Outcome out;
  std::mt19937_64 rng(4242);
  std::vector<GraphDocument> inputs = {{corpus::triangle_with_leaves(), std::nullopt},
                                       {corpus::complete(5), std::nullopt},
                                       {corpus::complete_bipartite(3, 3), std::nullopt}};
  for (int i = 0; i < 2; ++i) inputs.push_back({corpus::random_graph(rng, 6, 2), std::nullopt});
  std::vector<EmbeddingDocument> docs;
  std::vector<json> wire;
  for (const auto& in : inputs) {
    docs.push_back(make_document(in, embed_isometric(in.graph), Mode::Rational));
    wire.push_back(json::parse(emit_embedding(docs.back())));
    if (!reverify(docs.back()).ok()) out.fail("clean document fails verification");
  }

  std::map<std::string, int> injected, caught;
  int attempts = 0;
  for (int f = 0; f < kFaults && attempts < 20 * kFaults; ++attempts) {
    const std::size_t which = rng() % docs.size();
    const EmbeddingDocument& doc = docs[which];
    json j = wire[which];
    const int kind = f % 3;  // 0 weight, 1 coordinate, 2 length
    FailureCategory expected = FailureCategory::Unbalanced;
    std::string label;
    if (kind == 0) {
      const std::size_t ns = doc.complex.segments.size(), nr = doc.complex.rays.size();
      const std::size_t k = rng() % (ns + nr);
      json& w = k < ns ? j["complex"]["segments"][k]["weight"] : j["complex"]["rays"][k - ns]["weight"];
      w = w.get<std::int64_t>() + 1 + static_cast<std::int64_t>(rng() % 2);
      label = "weight";
    } else if (kind == 1) {
      const std::size_t v = rng() % doc.complex.vertices.size();
      const Rational delta(1 + static_cast<int>(rng() % 5), 3 + static_cast<int>(rng() % 11));
      json& x = j["complex"]["vertices"][v][rng() % 2];
      const bool along_x = &x == &j["complex"]["vertices"][v][0];
      x = format_rational(wire_rational(x) + delta);
      // oracle verdict for the moved vertex
      BalancedComplex moved = doc.complex;
      (along_x ? moved.vertices[v].x : moved.vertices[v].y) += Scalar(delta);
      const auto defects = oracle_defects(moved);
      const bool unbalanced = std::any_of(defects.begin(), defects.end(), [](const auto& d) {
        return d != std::pair<std::int64_t, std::int64_t>{0, 0};
      });
      if (unbalanced) {
        expected = FailureCategory::Unbalanced;
      } else {
        bool changed = false;
        for (const auto& [id, img] : doc.map.edge_image) {
          changed = changed || oracle_chain_length(moved, img) != oracle_chain_length(doc.complex, img);
        }
        if (!changed) continue;  // not a detectable corruption; draw again
        expected = FailureCategory::NonIsometric;
      }
      label = "coordinate";
    } else {
      std::vector<std::size_t> finite;
      for (std::size_t e = 0; e < doc.modified.edges.size(); ++e) {
        if (!doc.modified.edges[e].length.is_infinite()) finite.push_back(e);
      }
      json& len = j["modified"]["edges"][finite[rng() % finite.size()]]["length"];
      len = format_rational(wire_rational(len) + Rational(1 + static_cast<int>(rng() % 4), 7));
      expected = FailureCategory::NonIsometric;
      label = "length";
    }
    ++f;
    ++injected[label];
    Report r;
    try {
      r = reverify(parse_embedding(j.dump(2)));
    } catch (const Error& err) {
      out.fail(label + " fault rejected by the parser: " + err.what());
      continue;
    }
    if (r.ok() || !r.has(expected)) {
      out.fail(label + " fault missed, expected " + std::string(to_string(expected)) +
               (r.failures.empty() ? "" : ", got " + std::string(to_string(r.failures[0].category))));
      continue;
    }
    ++caught[label];
  }
  std::ostringstream d;
  int total = 0, hits = 0;
  for (const auto& [label, n] : injected) {
    d << label << " " << caught[label] << "/" << n << " ";
    total += n;
    hits += caught[label];
  }
  if (total != kFaults) out.fail("only " + std::to_string(total) + " faults injected");
  d << "detected " << hits << "/" << total;
  out.detail = d.str();
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "triangle with infinite leaves", criterion_triangle},
      {2, "crossing-number corpus", criterion_crossing_numbers},
      {3, "creneau elongation", criterion_creneau},
      {4, "lambda-mode certification", criterion_lambda},
      {5, "projection certificates", criterion_projections},
      {6, "unimodular invariance", criterion_invariance},
      {7, "fault injection", criterion_faults},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.number, c.name, o.detail.c_str(),
                secs);
    for (const auto& p : o.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
