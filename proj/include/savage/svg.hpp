#pragma once

// Plain SVG and CSV output for utility images. Polygons are drawn in the unit
// square with EV₁ on the horizontal and EV₂ on the vertical axis.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "savage/image.hpp"

namespace savage::svg {

struct Layer {
  std::vector<Vec> vertices;  // polygon in order, or two points for a segment
  std::string label;
  std::string stroke = "#1f4e79";
  std::string fill = "#9dc3e6";
  double opacity = 0.5;
};

struct Marker {
  Vec at;
  std::string label;
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string render(const std::vector<Layer>& layers, const std::vector<Marker>& markers = {}) {
  const double size = 400.0, pad = 50.0;
  double top = 1.0;
  for (const auto& l : layers)
    for (const auto& v : l.vertices)
      for (double x : v) top = std::max(top, x);
  auto px = [&](double x) { return pad + size * x / top; };
  auto py = [&](double y) { return pad + size - size * y / top; };
  std::ostringstream out;
  const double full = size + 2 * pad;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << full << "\" height=\"" << full
      << "\" viewBox=\"0 0 " << full << ' ' << full << "\" font-family=\"sans-serif\" font-size=\"14\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(top) << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\"" << py(top)
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << px(top) - 30 << "\" y=\"" << py(0) + 30 << "\">EV₁</text>\n";
  out << "<text x=\"" << px(0) - 40 << "\" y=\"" << py(top) + 5 << "\">EV₂</text>\n";
  out << "<text x=\"" << px(0) - 12 << "\" y=\"" << py(0) + 18 << "\">0</text>\n";
  out << "<text x=\"" << px(top) - 8 << "\" y=\"" << py(0) + 18 << "\">" << num(top) << "</text>\n";
  for (const auto& l : layers) {
    if (l.vertices.empty()) continue;
    std::ostringstream pts;
    for (const auto& v : l.vertices) pts << num(px(v[0])) << ',' << num(py(v.size() > 1 ? v[1] : 0.0)) << ' ';
    if (l.vertices.size() <= 2) {
      out << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << l.stroke
          << "\" stroke-width=\"3\"/>\n";
    } else {
      out << "<polygon points=\"" << pts.str() << "\" fill=\"" << l.fill << "\" fill-opacity=\"" << l.opacity
          << "\" stroke=\"" << l.stroke << "\" stroke-width=\"2\"/>\n";
    }
    if (!l.label.empty()) {
      const auto& v = l.vertices.front();
      out << "<text x=\"" << num(px(v[0]) + 6) << "\" y=\"" << num(py(v.size() > 1 ? v[1] : 0.0) - 6)
          << "\" fill=\"" << l.stroke << "\">" << l.label << "</text>\n";
    }
  }
  for (const auto& m : markers) {
    const double x = px(m.at[0]), y = py(m.at.size() > 1 ? m.at[1] : 0.0);
    out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3\" fill=\"black\"/>\n";
    out << "<text x=\"" << num(x + 5) << "\" y=\"" << num(y - 5) << "\">" << m.label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline std::string vertices_csv(const std::vector<Vec>& vertices) {
  std::ostringstream out;
  if (vertices.empty()) return "";
  for (std::size_t i = 0; i < vertices.front().size(); ++i) out << (i ? "," : "") << "ev" << i + 1;
  out << '\n';
  for (const auto& v : vertices) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << num(v[i]);
    out << '\n';
  }
  return out.str();
}

inline std::string support_csv(const ImagePolytope& poly) {
  std::ostringstream out;
  for (std::size_t i = 0; i < poly.dimension; ++i) out << 'c' << i + 1 << ',';
  out << "h\n";
  char buf[40];
  for (std::size_t k = 0; k < poly.directions.size(); ++k) {
    for (double c : poly.directions[k]) out << num(c) << ',';
    std::snprintf(buf, sizeof buf, "%.12g", poly.support[k]);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace savage::svg
