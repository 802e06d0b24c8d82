#pragma once

// SVG layout: a header row, then one row per annotation with the segment
// text on the left and its stroke fitted into a square cell on the right.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poemotion/emotion.hpp"
#include "poemotion/extract.hpp"
#include "poemotion/strokedb.hpp"
#include "poemotion/text_ingest.hpp"

namespace poemotion {

struct Annotation {
  SemanticSegment segment;
  EmotionScore score;
  std::optional<StrokeRecord> stroke;  // absent iff the score is Neutral
  std::vector<Vec2> outline;           // stroke contour, empty iff no stroke
};

struct Canvas {
  double width = 0.0;
  double height = 0.0;
};

namespace layout {
inline constexpr double kCanvasWidth = 1600.0;
inline constexpr double kHeaderHeight = 120.0;
inline constexpr double kRowHeight = 240.0;
inline constexpr double kCell = 220.0;
inline constexpr double kMargin = 40.0;
inline constexpr double kCellLeft = kCanvasWidth - kMargin - kCell;
}  // namespace layout

struct Composition {
  Document poem;
  std::string title;
  std::vector<Annotation> annotations;

  Canvas canvas() const {
    return {layout::kCanvasWidth,
            layout::kHeaderHeight + layout::kRowHeight * static_cast<double>(annotations.size())};
  }
};

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline double stroke_opacity(double normalized_intensity) {
  return 0.35 + 0.65 * std::clamp(normalized_intensity, 0.0, 1.0);
}

/// Path data for `outline` scaled uniformly and centred inside the square
/// cell at (left, top). Printed coordinates never leave the cell.
inline std::string fit_outline(const std::vector<Vec2>& outline, double left, double top,
                               double cell) {
  double minx = std::numeric_limits<double>::infinity(), miny = minx;
  double maxx = -minx, maxy = -minx;
  for (const auto& v : outline) {
    minx = std::min(minx, v.x);
    maxx = std::max(maxx, v.x);
    miny = std::min(miny, v.y);
    maxy = std::max(maxy, v.y);
  }
  const double span = std::max(maxx - minx, maxy - miny);
  const double s = span > 0.0 ? cell / span : 1.0;
  const double ox = left + (cell - (maxx - minx) * s) / 2.0;
  const double oy = top + (cell - (maxy - miny) * s) / 2.0;

  std::string d;
  for (std::size_t i = 0; i < outline.size(); ++i) {
    const double x = std::clamp(ox + (outline[i].x - minx) * s, left, left + cell);
    const double y = std::clamp(oy + (outline[i].y - miny) * s, top, top + cell);
    d += i == 0 ? "M" : " L";
    d += detail::fixed(x, 3) + " " + detail::fixed(y, 3);
  }
  d += " Z";
  return d;
}

inline std::string compose_svg(const Composition& comp) {
  using namespace layout;
  const Canvas canvas = comp.canvas();
  const std::string w = detail::fixed(canvas.width, 0), h = detail::fixed(canvas.height, 0);

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" +
         h + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"#ffffff\"/>\n";
  svg += "  <g id=\"header\">\n";
  svg += "    <text x=\"40\" y=\"58\" font-family=\"serif\" font-size=\"36\" fill=\"#000000\">" +
         xml_escape(comp.title) + "</text>\n";
  svg += "    <text x=\"40\" y=\"98\" font-family=\"serif\" font-size=\"20\" fill=\"#000000\">" +
         std::to_string(comp.poem.sentences.size()) + " lines, " +
         std::to_string(comp.annotations.size()) + " annotated segments</text>\n";
  svg += "  </g>\n";

  for (std::size_t r = 0; r < comp.annotations.size(); ++r) {
    const Annotation& a = comp.annotations[r];
    const double top = kHeaderHeight + kRowHeight * static_cast<double>(r);
    svg += "  <g id=\"segment-" + std::to_string(a.segment.id) + "\">\n";
    svg += "    <text x=\"40\" y=\"" + detail::fixed(top + 110, 0) +
           "\" font-family=\"serif\" font-size=\"28\" fill=\"#000000\">" +
           xml_escape(a.segment.text) + "</text>\n";
    svg += "    <text x=\"40\" y=\"" + detail::fixed(top + 148, 0) +
           "\" font-family=\"sans-serif\" font-size=\"18\" fill=\"#555555\">" +
           std::string(to_string(a.score.quadrant)) + " | valence " +
           detail::fixed(a.score.valence, 3) + " | arousal " + detail::fixed(a.score.arousal, 3) +
           " | intensity " + detail::fixed(a.score.intensity, 3) + "</text>\n";
    if (a.stroke && !a.outline.empty()) {
      svg += "    <path data-stroke-id=\"" + std::to_string(a.stroke->id) +
             "\" fill=\"#000000\" opacity=\"" +
             detail::fixed(stroke_opacity(a.score.normalized_intensity), 3) + "\" d=\"" +
             fit_outline(a.outline, kCellLeft, top + 10.0, kCell) + "\"/>\n";
    }
    svg += "  </g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace poemotion
