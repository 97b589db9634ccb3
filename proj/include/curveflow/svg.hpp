#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "curveflow/csv.hpp"
#include "curveflow/errors.hpp"
#include "curveflow/stepper.hpp"

namespace curveflow {

struct SvgOptions {
  bool vertex_markers = false;  // draw each grid point (shows the distribution)
  bool legend = true;           // one "t = ..." entry per snapshot
};

namespace detail {

inline constexpr std::array<const char*, 8> svg_palette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace detail

// Overlays the snapshot curves as closed paths in one SVG: equal-aspect
// viewBox padded by 5%, optional vertex markers, time legend.  SVG's y axis
// points down, so y is negated on output.
inline void render_svg(const std::vector<Snapshot>& snapshots, const std::filesystem::path& file,
                       const SvgOptions& options = {}) {
  if (snapshots.empty()) throw Error("render_svg: no snapshots to draw");

  double min_x = snapshots[0].curve.x[0].x, max_x = min_x;
  double min_y = -snapshots[0].curve.x[0].y, max_y = min_y;
  for (const Snapshot& snap : snapshots) {
    for (const Vec2& p : snap.curve.x) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, -p.y);
      max_y = std::max(max_y, -p.y);
    }
  }
  double extent = std::max(max_x - min_x, max_y - min_y);
  if (extent <= 0.0) extent = 1.0;
  const double pad = 0.05 * extent;
  const double vb_x = min_x - pad;
  const double vb_y = min_y - pad;
  const double vb_w = (max_x - min_x) + 2.0 * pad;
  const double vb_h = (max_y - min_y) + 2.0 * pad;
  const double stroke = 0.004 * extent;
  const double marker = 0.007 * extent;
  const double font = 0.04 * extent;

  std::ofstream out(file);
  if (!out) throw Error("cannot open for writing: " + file.string());

  const int width = 800;
  const int height = static_cast<int>(800.0 * vb_h / vb_w + 0.5);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"" << format_double(vb_x) << ' ' << format_double(vb_y) << ' '
      << format_double(vb_w) << ' ' << format_double(vb_h) << "\">\n";
  out << "  <rect x=\"" << format_double(vb_x) << "\" y=\"" << format_double(vb_y) << "\" width=\""
      << format_double(vb_w) << "\" height=\"" << format_double(vb_h) << "\" fill=\"white\"/>\n";

  for (std::size_t c = 0; c < snapshots.size(); ++c) {
    const char* color = detail::svg_palette[c % detail::svg_palette.size()];
    const std::vector<Vec2>& pts = snapshots[c].curve.x;
    out << "  <path fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << format_double(stroke) << "\" d=\"";
    for (std::size_t s = 0; s < pts.size(); ++s) {
      out << (s == 0 ? 'M' : 'L') << format_double(pts[s].x) << ' ' << format_double(-pts[s].y);
    }
    out << "Z\"/>\n";
    if (options.vertex_markers) {
      out << "  <g fill=\"" << color << "\">\n";
      for (const Vec2& p : pts) {
        out << "    <circle cx=\"" << format_double(p.x) << "\" cy=\"" << format_double(-p.y)
            << "\" r=\"" << format_double(marker) << "\"/>\n";
      }
      out << "  </g>\n";
    }
  }

  if (options.legend) {
    for (std::size_t c = 0; c < snapshots.size(); ++c) {
      const char* color = detail::svg_palette[c % detail::svg_palette.size()];
      const double tx = vb_x + 0.5 * pad;
      const double ty = vb_y + font * (1.2 * static_cast<double>(c) + 1.0);
      out << "  <text x=\"" << format_double(tx) << "\" y=\"" << format_double(ty)
          << "\" font-size=\"" << format_double(font) << "\" font-family=\"sans-serif\" fill=\""
          << color << "\">t = " << format_double(snapshots[c].curve.t) << "</text>\n";
    }
  }

  out << "</svg>\n";
  if (!out) throw Error("write failed: " + file.string());
}

}  // namespace curveflow
