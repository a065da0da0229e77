#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "tropembed/balancer.hpp"
#include "tropembed/errors.hpp"
#include "tropembed/io.hpp"

using namespace tropembed;

namespace {

constexpr int kCertified = 0;
constexpr int kNotCertified = 1;
constexpr int kError = 2;

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void summarize(const Report& r) {
  std::cerr << (r.ok() ? "certified" : "NOT certified") << ": crossings on edge images " << r.crossings_on_gamma
            << " (claimed " << r.crossings_claimed << (r.crossings_exact ? ", exact" : ", heuristic")
            << "), ray crossings " << r.ray_crossings;
  if (r.lambda_certified) std::cerr << ", lambda " << (*r.lambda_certified ? "ok" : "failed");
  std::cerr << "\n";
  for (const auto& f : r.failures) std::cerr << "  " << to_string(f.category) << " " << f.subject << ": " << f.detail << "\n";
}

// Finite part of the simple modification, as the crossing solver sees it.
LayoutGraph finite_layout(const MetricGraph& input) {
  const MetricGraph g = normalize_simple(input).first;
  LayoutGraph out;
  std::map<std::string, std::size_t> index;
  for (const auto& v : g.vertices) {
    if (!g.is_infinite(v)) index[v] = out.n++;
  }
  for (const auto& e : g.edges) {
    if (!e.length.is_infinite()) out.edges.push_back({index.at(e.u), index.at(e.v)});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isometric balanced embeddings of metric graphs"};
  app.require_subcommand(1);

  std::string input, out, svg, mode = "rational", epsilon;
  bool heuristic = false, serial = false;
  std::uint64_t budget = EmbedOptions{}.budget, seed = 0;

  auto* embed = app.add_subcommand("embed", "embed a graph file and certify the result");
  embed->add_option("graph", input, "graph JSON file, - for stdin")->required();
  embed->add_option("--mode", mode, "value group of the coordinates")
      ->check(CLI::IsMember({"rational", "lambda"}));
  auto* exact_flag = embed->add_flag("--exact-crossings", "exact crossing number (default)");
  embed->add_flag("--heuristic", heuristic, "insertion heuristic instead of the exact solver")->excludes(exact_flag);
  embed->add_option("--budget", budget, "node budget of the exact solver before falling back");
  embed->add_option("--epsilon", epsilon, "cap on corridor widths, p/q");
  embed->add_option("--seed", seed, "tie-breaking seed for the heuristic");
  embed->add_option("--out", out, "embedding JSON output (stdout by default)");
  embed->add_option("--svg", svg, "also render the complex to this file");
  embed->add_flag("--serial", serial, "run the kernels without OpenMP");

  std::string doc_path;
  auto* verify_cmd = app.add_subcommand("verify", "re-run the verifier on an embedding file");
  verify_cmd->add_option("embedding", doc_path, "embedding JSON file, - for stdin")->required();
  std::string report_out;
  verify_cmd->add_option("--out", report_out, "report JSON output (stdout by default)");

  auto* render = app.add_subcommand("render", "draw an embedding file as SVG");
  render->add_option("embedding", doc_path, "embedding JSON file, - for stdin")->required();
  std::string svg_out;
  SvgOptions svg_options;
  bool plain = false;
  render->add_option("--out", svg_out, "SVG output (stdout by default)");
  render->add_option("--width", svg_options.width, "width in pixels");
  render->add_option("--padding", svg_options.padding, "margin as a fraction of the box");
  render->add_option("--ray-length", svg_options.ray_length, "ray reach past the box, as a fraction of it");
  render->add_flag("--plain", plain, "no chain overlay or crossing marks");

  auto* cross = app.add_subcommand("crossing-number", "crossing number of the finite part of a graph");
  cross->add_option("graph", input, "graph JSON file, - for stdin")->required();
  cross->add_flag("--heuristic", heuristic, "insertion heuristic instead of the exact solver");
  cross->add_option("--budget", budget, "node budget of the exact solver");
  cross->add_option("--seed", seed, "tie-breaking seed for the heuristic");

  CLI11_PARSE(app, argc, argv);

  try {
    if (embed->parsed()) {
      const GraphDocument doc = parse_graph_document(slurp(input));
      EmbedOptions o;
      o.mode = mode == "lambda" ? Mode::Lambda : Mode::Rational;
      if (o.mode == Mode::Lambda) {
        if (!doc.lambda) throw Error(ErrorCode::SchemaError, "lambda mode needs a \"lambda\" section in the graph");
        o.lambda = *doc.lambda;
      }
      o.solver = heuristic ? CrossingSolver::Heuristic : CrossingSolver::Exact;
      o.budget = budget;
      o.seed = seed;
      o.exec = serial ? Execution::Serial : Execution::Parallel;
      if (!epsilon.empty()) o.epsilon = Scalar(parse_rational(epsilon));
      const Embedding e = embed_isometric(doc.graph, o);
      spill(out, emit_embedding(make_document(doc, e, o.mode)));
      if (!svg.empty()) spill(svg, render_svg(e.complex, &e.map));
      summarize(e.report);
      return e.report.ok() ? kCertified : kNotCertified;
    }
    if (verify_cmd->parsed()) {
      const Report r = reverify(parse_embedding(slurp(doc_path)));
      spill(report_out, emit_report(r));
      summarize(r);
      return r.ok() ? kCertified : kNotCertified;
    }
    if (render->parsed()) {
      const EmbeddingDocument d = parse_embedding(slurp(doc_path));
      if (plain) svg_options.overlay_chains = svg_options.mark_crossings = false;
      spill(svg_out, render_svg(d.complex, plain ? nullptr : &d.map, svg_options));
      return kCertified;
    }
    if (cross->parsed()) {
      const LayoutGraph g = finite_layout(parse_graph(slurp(input)));
      const Planarization p = heuristic ? planarize_heuristic(g, seed) : [&] {
        try {
          return crossing_number_exact(g, budget, Execution::Parallel);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::BudgetExceeded) throw;
          std::cerr << "budget exhausted; falling back to the heuristic\n";
          return planarize_heuristic(g, seed);
        }
      }();
      std::cout << p.crossings() << (p.exact ? " exact" : " upper-bound") << "\n";
      return kCertified;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
