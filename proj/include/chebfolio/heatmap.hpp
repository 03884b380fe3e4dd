#pragma once

// Static SVG heatmaps of labeled matrices.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "chebfolio/similarity.hpp"

namespace chebfolio {

namespace detail {

/// Diverging blue-white-red scale over [-1, 1].
inline std::string heat_color(double v) {
  v = std::clamp(v, -1.0, 1.0);
  struct Rgb { double r, g, b; };
  constexpr Rgb blue{33, 102, 172}, white{247, 247, 247}, red{178, 24, 43};
  const Rgb& end = v < 0 ? blue : red;
  const double w = std::abs(v);
  const auto mix = [&](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * w)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(white.r, end.r), mix(white.g, end.g),
                mix(white.b, end.b));
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

/// Renders the given matrices side by side, one titled panel each.
inline std::string heatmap_svg(const std::vector<std::pair<std::string, const LabeledMatrix*>>& panels) {
  constexpr int cell = 48;
  constexpr int margin = 90;
  constexpr int gap = 40;
  constexpr int title = 30;

  int width = gap;
  int height = 0;
  for (const auto& [name, m] : panels) {
    const int side = static_cast<int>(m->size()) * cell;
    width += margin + side + gap;
    height = std::max(height, title + margin + side + gap);
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  int x0 = gap;
  for (const auto& [name, mp] : panels) {
    const LabeledMatrix& m = *mp;
    const int gx = x0 + margin;
    const int gy = title + margin;
    svg += "<text x=\"" + std::to_string(gx) + "\" y=\"20\" font-size=\"14\" font-weight=\"bold\">" +
           detail::xml_escape(name) + "</text>\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
      const int off = static_cast<int>(i) * cell + cell / 2;
      const std::string label = detail::xml_escape(m.labels()[i]);
      svg += "<text x=\"" + std::to_string(gx - 6) + "\" y=\"" + std::to_string(gy + off + 4) +
             "\" text-anchor=\"end\">" + label + "</text>\n";
      svg += "<text x=\"" + std::to_string(gx + off) + "\" y=\"" + std::to_string(gy - 6) +
             "\" text-anchor=\"start\" transform=\"rotate(-45 " + std::to_string(gx + off) + " " +
             std::to_string(gy - 6) + ")\">" + label + "</text>\n";
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        const int cx = gx + static_cast<int>(j) * cell;
        const int cy = gy + static_cast<int>(i) * cell;
        char value[16];
        std::snprintf(value, sizeof value, "%.3f", m(i, j));
        svg += "<rect x=\"" + std::to_string(cx) + "\" y=\"" + std::to_string(cy) + "\" width=\"" +
               std::to_string(cell) + "\" height=\"" + std::to_string(cell) + "\" fill=\"" +
               detail::heat_color(m(i, j)) + "\" stroke=\"white\"/>\n";
        svg += "<text x=\"" + std::to_string(cx + cell / 2) + "\" y=\"" + std::to_string(cy + cell / 2 + 4) +
               "\" text-anchor=\"middle\" font-size=\"10\">" + value + "</text>\n";
      }
    }
    x0 += margin + static_cast<int>(m.size()) * cell + gap;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace chebfolio
