#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tropembed/errors.hpp"
#include "tropembed/io.hpp"

namespace tropembed {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

struct Frame {
  double x0, y0, x1, y1;  // box in model coordinates
  double pixels_per_unit;
  double px(double x) const { return (x - x0) * pixels_per_unit; }
  double py(double y) const { return (y1 - y) * pixels_per_unit; }
};

}  // namespace

std::string render_svg(const BalancedComplex& c, const EmbeddingMap* map, const SvgOptions& options) {
  std::vector<std::array<double, 2>> at;
  at.reserve(c.vertices.size());
  for (const auto& p : c.vertices) at.push_back({p.x.approx(), p.y.approx()});

  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  if (!at.empty()) {
    x0 = x1 = at[0][0];
    y0 = y1 = at[0][1];
    for (const auto& p : at) {
      x0 = std::min(x0, p[0]);
      x1 = std::max(x1, p[0]);
      y0 = std::min(y0, p[1]);
      y1 = std::max(y1, p[1]);
    }
  }
  const double size = std::max({x1 - x0, y1 - y0, 1e-9});
  const double reach = options.ray_length * size;
  const double pad = options.padding * size + reach;
  Frame f{x0 - pad, y0 - pad, x1 + pad, y1 + pad, 1};
  f.pixels_per_unit = options.width / (f.x1 - f.x0);
  const double height = (f.y1 - f.y0) * f.pixels_per_unit;
  const double stroke = std::max(options.width / 800.0, 0.5);

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(options.width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(options.width) << " " << num(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto line = [&](double ax, double ay, double bx, double by, const std::string& style) {
    out << "<line x1=\"" << num(f.px(ax)) << "\" y1=\"" << num(f.py(ay)) << "\" x2=\"" << num(f.px(bx)) << "\" y2=\""
        << num(f.py(by)) << "\" " << style << "/>\n";
  };
  auto label = [&](double x, double y, const std::string& text) {
    out << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(f.py(y)) << "\" font-size=\"" << num(12 * stroke)
        << "\" fill=\"black\">" << text << "</text>\n";
  };

  // chains of the input edges underneath, one colour each
  if (map && options.overlay_chains) {
    out << "<g id=\"chains\" stroke-linecap=\"round\" opacity=\"0.45\">\n";
    std::size_t k = 0;
    for (const auto& [id, img] : map->edge_image) {
      const std::string style = std::string("stroke=\"") + kPalette[k++ % kPalette.size()] + "\" stroke-width=\"" +
                                num(4 * stroke) + "\"";
      for (std::size_t s : img.segments) {
        if (s >= c.segments.size()) continue;
        const auto& seg = c.segments[s];
        line(at[seg.a][0], at[seg.a][1], at[seg.b][0], at[seg.b][1], style);
      }
    }
    out << "</g>\n";
  }

  out << "<g id=\"complex\" stroke=\"black\" stroke-width=\"" << num(stroke) << "\">\n";
  for (const auto& seg : c.segments) {
    line(at[seg.a][0], at[seg.a][1], at[seg.b][0], at[seg.b][1], "");
    if (seg.weight > 1) {
      label((at[seg.a][0] + at[seg.b][0]) / 2, (at[seg.a][1] + at[seg.b][1]) / 2, std::to_string(seg.weight));
    }
  }
  out << "</g>\n";

  // rays stop where they leave the drawing box
  out << "<g id=\"rays\" stroke=\"#555555\" stroke-width=\"" << num(stroke) << "\" stroke-dasharray=\""
      << num(4 * stroke) << "," << num(2 * stroke) << "\">\n";
  for (const auto& r : c.rays) {
    const auto& p = at[r.apex];
    const double dx = static_cast<double>(r.direction.m), dy = static_cast<double>(r.direction.n);
    double t = std::numeric_limits<double>::infinity();
    if (dx > 0) t = std::min(t, (f.x1 - p[0]) / dx);
    if (dx < 0) t = std::min(t, (f.x0 - p[0]) / dx);
    if (dy > 0) t = std::min(t, (f.y1 - p[1]) / dy);
    if (dy < 0) t = std::min(t, (f.y0 - p[1]) / dy);
    if (!std::isfinite(t)) t = 0;
    line(p[0], p[1], p[0] + t * dx, p[1] + t * dy, "");
    if (r.weight > 1) label(p[0] + t * dx / 2, p[1] + t * dy / 2, std::to_string(r.weight));
  }
  out << "</g>\n";

  if (map && options.mark_crossings) {
    std::vector<ElementId> gamma;
    for (const auto& [id, img] : map->edge_image) {
      for (std::size_t s : img.segments) {
        if (s < c.segments.size()) gamma.push_back(ElementId::segment(s));
      }
    }
    std::sort(gamma.begin(), gamma.end());
    gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());
    std::vector<CrossingRecord> xs;
    try {
      xs = crossings(c, gamma, Execution::Serial);
    } catch (const Error&) {
      xs.clear();  // invalid geometry: nothing to mark
    }
    out << "<g id=\"crossings\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"" << num(1.5 * stroke) << "\">\n";
    for (const auto& x : xs) {
      out << "<circle cx=\"" << num(f.px(x.at.x.approx())) << "\" cy=\"" << num(f.py(x.at.y.approx())) << "\" r=\""
          << num(6 * stroke) << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace tropembed
