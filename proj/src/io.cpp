#include "tropembed/io.hpp"

#include <json.hpp>

#include <map>
#include <set>

#include "tropembed/errors.hpp"

namespace tropembed {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string text_of(const Json& j, const std::string& where) {
  if (!j.is_string()) parse_fail(where, "expected a string");
  return j.get<std::string>();
}

std::size_t index_of(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) parse_fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::int64_t integer_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) parse_fail(where, "expected an integer");
  return j.get<std::int64_t>();
}

bool flag_of(const Json& j, const std::string& where) {
  if (!j.is_boolean()) parse_fail(where, "expected true or false");
  return j.get<bool>();
}

Rational rational_of(const Json& j, const std::string& where) {
  const std::string s = text_of(j, where);
  try {
    return parse_rational(s);
  } catch (const Error& e) {
    parse_fail(where, e.what());
  }
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

// ---- value groups and scalars ----

struct Group {
  std::optional<ValueGroup> group;
  std::map<std::string, Rational> exact;  // rational generators by label
};

Json enclosure_json(const Rational& lo, const Rational& hi) {
  return Json{{"lower", format_rational(lo)}, {"upper", format_rational(hi)}};
}

Group group_of(const Json& j, const std::string& where) {
  Group out;
  const Json& gens = field(j, "generators", where);
  if (!gens.is_array()) parse_fail(where + ".generators", "expected an array");
  bool rationals = false;
  std::vector<GeneratorRef> irrational;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const std::string at = where + ".generators[" + std::to_string(i) + "]";
    const std::string label = text_of(field(gens[i], "label", at), at + ".label");
    if (!labels.insert(label).second) throw Error(ErrorCode::SchemaError, at + ": duplicate label " + label);
    if (gens[i].contains("exact")) {
      out.exact[label] = rational_of(gens[i]["exact"], at + ".exact");
      if (out.exact[label] == 0) throw Error(ErrorCode::SchemaError, at + ": exact generator is zero");
      rationals = true;
      continue;
    }
    if (label == "1") throw Error(ErrorCode::SchemaError, at + ": label \"1\" is reserved for the rationals");
    const Json& enc = field(gens[i], "enclosure", at);
    if (enc.is_string()) {
      try {
        irrational.push_back(make_generator(label, enc.get<std::string>()));
      } catch (const Error& e) {
        parse_fail(at + ".enclosure", e.what());
      }
    } else {
      Rational lo = rational_of(field(enc, "lower", at + ".enclosure"), at + ".enclosure.lower");
      Rational hi = rational_of(field(enc, "upper", at + ".enclosure"), at + ".enclosure.upper");
      if (lo >= hi) throw Error(ErrorCode::SchemaError, at + ": empty enclosure");
      irrational.push_back(make_generator(label, lo, hi));
    }
  }
  out.group = ValueGroup(rationals, irrational);
  return out;
}

Json group_json(const ValueGroup& g) {
  Json gens = Json::array();
  if (g.contains_rationals()) {
    gens.push_back(Json{{"label", "1"}, {"enclosure", enclosure_json(1, 1)}, {"exact", "1/1"}});
  }
  for (const auto& gen : g.generators()) {
    gens.push_back(Json{{"label", gen->label}, {"enclosure", enclosure_json(gen->lower, gen->upper)}});
  }
  return Json{{"generators", gens}};
}

Scalar scalar_of(const Json& j, const Group& g, const std::string& where) {
  if (j.is_string()) return Scalar(rational_of(j, where));
  if (!j.is_object()) parse_fail(where, "expected \"p/q\" or a coefficient map");
  Scalar out;
  for (const auto& [label, coef] : j.items()) {
    const Rational c = rational_of(coef, where + "." + label);
    if (label == "1") {
      out += Scalar(c);
    } else if (auto it = g.exact.find(label); it != g.exact.end()) {
      out += Scalar(c * it->second);
    } else if (GeneratorRef gen = g.group ? g.group->find(label) : nullptr) {
      out += Scalar::of(gen, c);
    } else {
      throw Error(ErrorCode::SchemaError, where + ": undeclared generator " + label);
    }
  }
  return out;
}

Json scalar_json(const Scalar& s) {
  if (s.is_rational()) return format_rational(s.rational_part());
  Json out = Json::object();
  if (s.rational_part() != 0) out["1"] = format_rational(s.rational_part());
  for (const auto& [gen, coef] : s.terms()) out[gen->label] = format_rational(coef);
  return out;
}

Length length_of(const Json& j, const Group& g, const std::string& where) {
  if (j.is_string() && j.get<std::string>() == "inf") return Length::infinite();
  return Length::finite(scalar_of(j, g, where));
}

Json length_json(const Length& l) { return l.is_infinite() ? Json("inf") : scalar_json(l.value()); }

Group group_from(const std::optional<ValueGroup>& v) {
  Group g;
  g.group = v;
  return g;
}

// ---- graphs ----

// With `shared`, the value group comes from elsewhere and lengths in it are
// listed under a top-level "lengths_in_lambda".
GraphDocument graph_of(const Json& j, const std::string& where, const Group* shared = nullptr) {
  GraphDocument doc;
  Group g;
  if (shared) {
    g = *shared;
    doc.lambda = g.group;
  } else if (j.is_object() && j.contains("lambda") && !j["lambda"].is_null()) {
    g = group_of(j["lambda"], where + ".lambda");
    doc.lambda = g.group;
  }
  const Json& vs = field(j, "vertices", where);
  if (!vs.is_array()) parse_fail(where + ".vertices", "expected an array");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    doc.graph.vertices.push_back(text_of(vs[i], where + ".vertices[" + std::to_string(i) + "]"));
  }
  const Json* in_lambda = nullptr;
  if (shared) {
    if (j.contains("lengths_in_lambda")) in_lambda = &j["lengths_in_lambda"];
  } else if (doc.lambda && j["lambda"].contains("lengths_in_lambda")) {
    in_lambda = &j["lambda"]["lengths_in_lambda"];
  }
  if (in_lambda && !in_lambda->is_object()) parse_fail(where + ".lengths_in_lambda", "expected an object");
  const Json& es = field(j, "edges", where);
  if (!es.is_array()) parse_fail(where + ".edges", "expected an array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string at = where + ".edges[" + std::to_string(i) + "]";
    MetricGraph::Edge e;
    e.id = text_of(field(es[i], "id", at), at + ".id");
    e.u = text_of(field(es[i], "u", at), at + ".u");
    e.v = text_of(field(es[i], "v", at), at + ".v");
    if (in_lambda && in_lambda->contains(e.id)) {
      if (es[i].contains("length")) throw Error(ErrorCode::SchemaError, at + ": length given twice");
      e.length = Length::finite(scalar_of((*in_lambda)[e.id], g, where + ".lambda.lengths_in_lambda." + e.id));
    } else {
      e.length = length_of(field(es[i], "length", at), g, at + ".length");
    }
    doc.graph.edges.push_back(std::move(e));
  }
  if (in_lambda) {
    for (const auto& [id, value] : in_lambda->items()) {
      if (!doc.graph.find_edge(id)) throw Error(ErrorCode::SchemaError, where + ": lengths_in_lambda names unknown edge " + id);
    }
  }
  mark_infinite_vertices(doc.graph);
  validate(doc.graph);
  return doc;
}

Json graph_json(const MetricGraph& graph, const std::optional<ValueGroup>& lambda) {
  Json out;
  out["vertices"] = graph.vertices;
  Json edges = Json::array();
  Json in_lambda = Json::object();
  for (const auto& e : graph.edges) {
    Json ej{{"id", e.id}, {"u", e.u}, {"v", e.v}};
    if (!e.length.is_infinite() && !e.length.value().is_rational()) {
      in_lambda[e.id] = scalar_json(e.length.value());
    } else {
      ej["length"] = length_json(e.length);
    }
    edges.push_back(std::move(ej));
  }
  out["edges"] = std::move(edges);
  if (lambda) {
    Json l = group_json(*lambda);
    if (!in_lambda.empty()) l["lengths_in_lambda"] = std::move(in_lambda);
    out["lambda"] = std::move(l);
  } else if (!in_lambda.empty()) {
    throw Error(ErrorCode::SchemaError, "irrational lengths need a value group");
  }
  return out;
}

// ---- traces ----

const char* kind_name(Move::Kind k) {
  switch (k) {
    case Move::Kind::Subdivide:
      return "subdivide";
    case Move::Kind::ReverseSubdivide:
      return "reverse_subdivide";
    case Move::Kind::AddInfiniteLeaf:
      return "add_infinite_leaf";
  }
  return "subdivide";
}

Move::Kind kind_of(const std::string& s, const std::string& where) {
  if (s == "subdivide") return Move::Kind::Subdivide;
  if (s == "reverse_subdivide") return Move::Kind::ReverseSubdivide;
  if (s == "add_infinite_leaf") return Move::Kind::AddInfiniteLeaf;
  parse_fail(where, "unknown move " + s);
}

// ---- reports ----

Json report_json(const Report& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back(Json{{"category", std::string(to_string(f.category))}, {"subject", f.subject}, {"detail", f.detail}});
  }
  return Json{{"ok", r.ok()},
              {"balanced", r.balanced},
              {"isometric", r.isometric},
              {"chains_valid", r.chains_valid},
              {"weights_one", r.weights_one},
              {"infinite_edges_ok", r.infinite_edges_ok},
              {"geometry_valid", r.geometry_valid},
              {"crossings_on_gamma", r.crossings_on_gamma},
              {"crossings_claimed", r.crossings_claimed},
              {"crossings_exact_flag", r.crossings_exact},
              {"ray_crossings", r.ray_crossings},
              {"lambda_certified", r.lambda_certified ? Json(*r.lambda_certified) : Json(nullptr)},
              {"failures", failures}};
}

Report report_of(const Json& j, const std::string& where) {
  Report r;
  r.balanced = flag_of(field(j, "balanced", where), where + ".balanced");
  r.isometric = flag_of(field(j, "isometric", where), where + ".isometric");
  r.chains_valid = flag_of(field(j, "chains_valid", where), where + ".chains_valid");
  r.weights_one = flag_of(field(j, "weights_one", where), where + ".weights_one");
  r.infinite_edges_ok = flag_of(field(j, "infinite_edges_ok", where), where + ".infinite_edges_ok");
  r.geometry_valid = flag_of(field(j, "geometry_valid", where), where + ".geometry_valid");
  r.crossings_on_gamma = index_of(field(j, "crossings_on_gamma", where), where + ".crossings_on_gamma");
  r.crossings_claimed = index_of(field(j, "crossings_claimed", where), where + ".crossings_claimed");
  r.crossings_exact = flag_of(field(j, "crossings_exact_flag", where), where + ".crossings_exact_flag");
  r.ray_crossings = index_of(field(j, "ray_crossings", where), where + ".ray_crossings");
  const Json& lc = field(j, "lambda_certified", where);
  if (!lc.is_null()) r.lambda_certified = flag_of(lc, where + ".lambda_certified");
  const Json& fs = field(j, "failures", where);
  if (!fs.is_array()) parse_fail(where + ".failures", "expected an array");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const std::string at = where + ".failures[" + std::to_string(i) + "]";
    const std::string cat = text_of(field(fs[i], "category", at), at + ".category");
    auto c = failure_category_from_string(cat);
    if (!c) parse_fail(at + ".category", "unknown category " + cat);
    r.failures.push_back({*c, text_of(field(fs[i], "subject", at), at + ".subject"),
                          text_of(field(fs[i], "detail", at), at + ".detail")});
  }
  return r;
}

}  // namespace

GraphDocument parse_graph_document(std::string_view text) { return graph_of(parse_json(text), "graph"); }

MetricGraph parse_graph(std::string_view text) { return parse_graph_document(text).graph; }

std::string emit_graph(const GraphDocument& doc) { return graph_json(doc.graph, doc.lambda).dump(2) + "\n"; }

EmbeddingDocument make_document(const GraphDocument& input, const Embedding& e, Mode mode) {
  EmbeddingDocument d;
  d.input = input;
  d.mode = mode;
  d.modified = e.modified;
  d.trace = e.trace;
  d.complex = e.complex;
  d.map = e.map;
  d.claimed_crossings = e.crossings;
  d.crossings_exact = e.crossings_exact;
  d.scale = e.scale;
  d.report = e.report;
  return d;
}

std::string emit_report(const Report& report) { return report_json(report).dump(2) + "\n"; }

std::string emit_embedding(const EmbeddingDocument& doc) {
  Json out;
  out["format"] = "tropembed-embedding";
  out["version"] = 1;
  out["input"] = graph_json(doc.input.graph, doc.input.lambda);
  out["mode"] = doc.mode == Mode::Lambda ? "lambda" : "rational";
  {
    // the modified graph shares the input's value group
    Json m = graph_json(doc.modified, doc.input.lambda);
    if (m.contains("lambda")) {
      if (m["lambda"].contains("lengths_in_lambda")) m["lengths_in_lambda"] = m["lambda"]["lengths_in_lambda"];
      m.erase("lambda");
    }
    out["modified"] = std::move(m);
  }
  Json trace = Json::array();
  for (const auto& mv : doc.trace) {
    trace.push_back(Json{{"kind", kind_name(mv.kind)},
                         {"target", mv.target},
                         {"first", length_json(mv.first)},
                         {"second", length_json(mv.second)}});
  }
  out["trace"] = std::move(trace);

  Json vertices = Json::array();
  for (const auto& p : doc.complex.vertices) vertices.push_back(Json::array({scalar_json(p.x), scalar_json(p.y)}));
  Json segments = Json::array();
  for (const auto& s : doc.complex.segments) segments.push_back(Json{{"a", s.a}, {"b", s.b}, {"weight", s.weight}});
  Json rays = Json::array();
  for (const auto& r : doc.complex.rays) {
    rays.push_back(Json{{"apex", r.apex}, {"direction", Json::array({r.direction.m, r.direction.n})}, {"weight", r.weight}});
  }
  out["complex"] = Json{{"vertices", vertices}, {"segments", segments}, {"rays", rays}};

  Json vmap = Json::object();
  for (const auto& [v, img] : doc.map.vertex_image) vmap[v] = img ? Json(*img) : Json(nullptr);
  Json emap = Json::object();
  for (const auto& [id, img] : doc.map.edge_image) {
    emap[id] = Json{{"from", img.from}, {"segments", img.segments}, {"ray", img.ray ? Json(*img.ray) : Json(nullptr)}};
  }
  out["map"] = Json{{"vertices", vmap}, {"edges", emap}};
  out["scale"] = scalar_json(doc.scale);
  out["crossings"] = Json{{"claimed", doc.claimed_crossings}, {"exact", doc.crossings_exact}};
  out["report"] = report_json(doc.report);
  return out.dump(2) + "\n";
}

EmbeddingDocument parse_embedding(std::string_view text) {
  const Json j = parse_json(text);
  const std::string root = "embedding";
  if (!j.is_object() || j.value("format", "") != "tropembed-embedding") {
    parse_fail(root, "not a tropembed embedding document");
  }
  EmbeddingDocument d;
  d.input = graph_of(field(j, "input", root), root + ".input");
  const std::string mode = text_of(field(j, "mode", root), root + ".mode");
  if (mode != "rational" && mode != "lambda") parse_fail(root + ".mode", "expected rational or lambda");
  d.mode = mode == "lambda" ? Mode::Lambda : Mode::Rational;
  if (d.mode == Mode::Lambda && !d.input.lambda) throw Error(ErrorCode::SchemaError, root + ": lambda mode without a value group");
  const Group g = group_from(d.input.lambda);
  d.modified = graph_of(field(j, "modified", root), root + ".modified", &g).graph;

  const Json& trace = field(j, "trace", root);
  if (!trace.is_array()) parse_fail(root + ".trace", "expected an array");
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const std::string at = root + ".trace[" + std::to_string(i) + "]";
    Move mv;
    mv.kind = kind_of(text_of(field(trace[i], "kind", at), at + ".kind"), at + ".kind");
    mv.target = text_of(field(trace[i], "target", at), at + ".target");
    mv.first = length_of(field(trace[i], "first", at), g, at + ".first");
    mv.second = length_of(field(trace[i], "second", at), g, at + ".second");
    d.trace.push_back(std::move(mv));
  }

  const std::string cw = root + ".complex";
  const Json& cx = field(j, "complex", root);
  const Json& vs = field(cx, "vertices", cw);
  if (!vs.is_array()) parse_fail(cw + ".vertices", "expected an array");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string at = cw + ".vertices[" + std::to_string(i) + "]";
    if (!vs[i].is_array() || vs[i].size() != 2) parse_fail(at, "expected [x, y]");
    d.complex.add_vertex({scalar_of(vs[i][0], g, at + "[0]"), scalar_of(vs[i][1], g, at + "[1]")});
  }
  const std::size_t nv = d.complex.vertices.size();
  const Json& ss = field(cx, "segments", cw);
  if (!ss.is_array()) parse_fail(cw + ".segments", "expected an array");
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const std::string at = cw + ".segments[" + std::to_string(i) + "]";
    const std::size_t a = index_of(field(ss[i], "a", at), at + ".a");
    const std::size_t b = index_of(field(ss[i], "b", at), at + ".b");
    if (a >= nv || b >= nv) throw Error(ErrorCode::SchemaError, at + ": vertex index out of range");
    d.complex.add_segment(a, b, integer_of(field(ss[i], "weight", at), at + ".weight"));
  }
  const Json& rs = field(cx, "rays", cw);
  if (!rs.is_array()) parse_fail(cw + ".rays", "expected an array");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const std::string at = cw + ".rays[" + std::to_string(i) + "]";
    const std::size_t apex = index_of(field(rs[i], "apex", at), at + ".apex");
    if (apex >= nv) throw Error(ErrorCode::SchemaError, at + ": vertex index out of range");
    const Json& dir = field(rs[i], "direction", at);
    if (!dir.is_array() || dir.size() != 2) parse_fail(at + ".direction", "expected [m, n]");
    const std::int64_t m = integer_of(dir[0], at + ".direction[0]");
    const std::int64_t n = integer_of(dir[1], at + ".direction[1]");
    if (gcd64(m, n) != 1) throw Error(ErrorCode::SchemaError, at + ": direction is not primitive");
    d.complex.add_ray(apex, PrimitiveVector{m, n}, integer_of(field(rs[i], "weight", at), at + ".weight"));
  }

  const std::string mw = root + ".map";
  const Json& mp = field(j, "map", root);
  const Json& vm = field(mp, "vertices", mw);
  if (!vm.is_object()) parse_fail(mw + ".vertices", "expected an object");
  for (const auto& [v, img] : vm.items()) {
    d.map.vertex_image[v] = img.is_null() ? std::nullopt : std::optional<std::size_t>(index_of(img, mw + ".vertices." + v));
  }
  const Json& em = field(mp, "edges", mw);
  if (!em.is_object()) parse_fail(mw + ".edges", "expected an object");
  for (const auto& [id, img] : em.items()) {
    const std::string at = mw + ".edges." + id;
    EmbeddingMap::EdgeImage e;
    e.from = text_of(field(img, "from", at), at + ".from");
    const Json& segs = field(img, "segments", at);
    if (!segs.is_array()) parse_fail(at + ".segments", "expected an array");
    for (std::size_t i = 0; i < segs.size(); ++i) e.segments.push_back(index_of(segs[i], at + ".segments"));
    const Json& ray = field(img, "ray", at);
    if (!ray.is_null()) e.ray = index_of(ray, at + ".ray");
    d.map.edge_image[id] = std::move(e);
  }
  d.scale = scalar_of(field(j, "scale", root), g, root + ".scale");
  const Json& cr = field(j, "crossings", root);
  d.claimed_crossings = index_of(field(cr, "claimed", root + ".crossings"), root + ".crossings.claimed");
  d.crossings_exact = flag_of(field(cr, "exact", root + ".crossings"), root + ".crossings.exact");
  d.report = report_of(field(j, "report", root), root + ".report");
  return d;
}

Report reverify(const EmbeddingDocument& doc) {
  VerifyOptions vo;
  vo.claimed_crossings = doc.claimed_crossings;
  vo.crossings_exact = doc.crossings_exact;
  if (doc.mode == Mode::Lambda) vo.lambda = doc.input.lambda;
  return verify(doc.complex, doc.map, doc.modified, vo);
}

}  // namespace tropembed
