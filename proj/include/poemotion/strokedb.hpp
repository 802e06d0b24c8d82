#pragma once

// On-disk stroke database:
//
//   <dir>/index.json
//   <dir>/strokes/<id>.svg
//
// index.json holds {version, db_seed, records[]}; u64 values are decimal
// strings and floating values carry 9 significant digits.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "poemotion/emotion.hpp"
#include "poemotion/error.hpp"
#include "poemotion/random.hpp"
#include "poemotion/stroke.hpp"

namespace poemotion {

inline constexpr int kStrokeIndexVersion = 1;

struct StrokeRecord {
  std::size_t id = 0;
  Quadrant quadrant = Quadrant::Excitement;
  std::uint64_t seed = 0;
  double complexity = 0.0;
  double normalized_complexity = 0.0;
  std::string asset_path;  // relative to the database directory

  friend bool operator==(const StrokeRecord&, const StrokeRecord&) = default;
};

struct StrokeIndex {
  std::vector<StrokeRecord> records;  // ascending id, grouped by quadrant
  std::uint64_t db_seed = 0;
  int version = kStrokeIndexVersion;

  friend bool operator==(const StrokeIndex&, const StrokeIndex&) = default;
};

namespace detail {

inline double round_significant9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return std::strtod(buf, nullptr);
}

inline std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

inline std::optional<std::uint64_t> parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Min-max normalization of complexities within each quadrant. A quadrant
// whose strokes all share one complexity maps to 0.5.
inline void normalize_per_quadrant(std::vector<StrokeRecord>& records) {
  for (Quadrant q : kStrokeQuadrants) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& r : records)
      if (r.quadrant == q) {
        lo = std::min(lo, r.complexity);
        hi = std::max(hi, r.complexity);
      }
    for (auto& r : records)
      if (r.quadrant == q)
        r.normalized_complexity = hi > lo ? (r.complexity - lo) / (hi - lo) : 0.5;
  }
}

}  // namespace detail

/// Standalone SVG for one stroke: its ribbon contour as a filled path.
inline std::string stroke_asset_svg(const StrokePath& path, const ContourPolygon& contour,
                                    std::size_t id) {
  double minx = std::numeric_limits<double>::infinity(), miny = minx;
  double maxx = -minx, maxy = -minx;
  for (const auto& v : contour.vertices) {
    minx = std::min(minx, v.x);
    maxx = std::max(maxx, v.x);
    miny = std::min(miny, v.y);
    maxy = std::max(maxy, v.y);
  }
  constexpr double kMargin = 4.0;
  const double x0 = std::floor(minx - kMargin), y0 = std::floor(miny - kMargin);
  const double w = std::ceil(maxx + kMargin) - x0, h = std::ceil(maxy + kMargin) - y0;

  std::string d;
  for (std::size_t i = 0; i < contour.vertices.size(); ++i) {
    d += i == 0 ? "M" : " L";
    d += detail::fixed(contour.vertices[i].x, 4) + " " + detail::fixed(contour.vertices[i].y, 4);
  }
  d += " Z";

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" +
         detail::fixed(x0, 0) + " " + detail::fixed(y0, 0) + " " + detail::fixed(w, 0) + " " +
         detail::fixed(h, 0) + "\" width=\"" + detail::fixed(w, 0) + "\" height=\"" +
         detail::fixed(h, 0) + "\">\n";
  svg += "  <path id=\"stroke-" + std::to_string(id) + "\" data-quadrant=\"" +
         std::string(to_string(path.quadrant)) + "\" data-seed=\"" + std::to_string(path.seed) +
         "\" data-intensity=\"" + detail::fixed(path.intensity_used, 6) + "\" fill=\"#000000\" d=\"" +
         d + "\"/>\n";
  svg += "</svg>\n";
  return svg;
}

inline std::string index_to_json(const StrokeIndex& index) {
  nlohmann::ordered_json j;
  j["version"] = index.version;
  j["db_seed"] = std::to_string(index.db_seed);
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : index.records) {
    nlohmann::ordered_json rec;
    rec["id"] = r.id;
    rec["quadrant"] = std::string(to_string(r.quadrant));
    rec["seed"] = std::to_string(r.seed);
    rec["complexity"] = detail::round_significant9(r.complexity);
    rec["normalized_complexity"] = detail::round_significant9(r.normalized_complexity);
    rec["asset_path"] = r.asset_path;
    j["records"].push_back(std::move(rec));
  }
  return j.dump(2) + "\n";
}

/// Intensity assigned to the i-th of n strokes in a quadrant.
inline double database_intensity(std::size_t i, std::size_t per_quadrant) {
  return per_quadrant == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(per_quadrant - 1);
}

/// Synthesizes per_quadrant strokes for each of the four quadrants and writes
/// the assets and index.json under out_dir. Returns the index as written.
inline StrokeIndex build_database(std::size_t per_quadrant, std::uint64_t db_seed,
                                  const std::filesystem::path& out_dir) {
  if (per_quadrant < 1) throw DomainError("per_quadrant must be at least 1");
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "strokes", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "strokes").string() + ": " + ec.message());

  StrokeIndex index;
  index.db_seed = db_seed;
  std::vector<StrokePath> paths;
  std::vector<ContourPolygon> contours;
  for (std::size_t q = 0; q < std::size(kStrokeQuadrants); ++q) {
    for (std::size_t i = 0; i < per_quadrant; ++i) {
      StrokeRecord r;
      r.id = q * per_quadrant + i;
      r.quadrant = kStrokeQuadrants[q];
      r.seed = splitmix64(db_seed, r.id);
      paths.push_back(synthesize_stroke(r.quadrant, database_intensity(i, per_quadrant), r.seed));
      contours.push_back(ribbon_polygon(paths.back()));
      r.complexity = polygon_complexity(contours.back());
      r.asset_path = "strokes/" + std::to_string(r.id) + ".svg";
      index.records.push_back(std::move(r));
    }
  }
  detail::normalize_per_quadrant(index.records);
  for (auto& r : index.records) {
    r.complexity = detail::round_significant9(r.complexity);
    r.normalized_complexity = detail::round_significant9(r.normalized_complexity);
  }

  for (std::size_t k = 0; k < index.records.size(); ++k)
    detail::write_file(out_dir / index.records[k].asset_path,
                       stroke_asset_svg(paths[k], contours[k], index.records[k].id));
  detail::write_file(out_dir / "index.json", index_to_json(index));
  return index;
}

/// Reads and validates <dir>/index.json.
inline StrokeIndex load_database(const std::filesystem::path& dir) {
  const auto index_path = dir / "index.json";
  const std::string text = detail::read_file(index_path);
  const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw SchemaError(index_path.string() + ": not a JSON object");

  auto fail = [&](const std::string& msg) { throw SchemaError(index_path.string() + ": " + msg); };

  if (!j.contains("version") || !j["version"].is_number_integer()) fail("missing integer version");
  StrokeIndex index;
  index.version = j["version"].get<int>();
  if (index.version != kStrokeIndexVersion)
    fail("unsupported version " + std::to_string(index.version));
  if (!j.contains("db_seed") || !j["db_seed"].is_string()) fail("db_seed must be a decimal string");
  auto db_seed = detail::parse_u64(j["db_seed"].get<std::string>());
  if (!db_seed) fail("db_seed is not a u64");
  index.db_seed = *db_seed;
  if (!j.contains("records") || !j["records"].is_array()) fail("missing records array");

  for (const auto& rec : j["records"]) {
    if (!rec.is_object()) fail("record is not an object");
    StrokeRecord r;
    if (!rec.contains("id") || !rec["id"].is_number_unsigned()) fail("record id must be unsigned");
    r.id = rec["id"].get<std::size_t>();
    const std::string where = "record " + std::to_string(r.id) + ": ";
    auto q = rec.contains("quadrant") && rec["quadrant"].is_string()
                 ? quadrant_from_string(rec["quadrant"].get<std::string>())
                 : std::nullopt;
    if (!q || *q == Quadrant::Neutral) fail(where + "invalid quadrant");
    r.quadrant = *q;
    auto seed = rec.contains("seed") && rec["seed"].is_string()
                    ? detail::parse_u64(rec["seed"].get<std::string>())
                    : std::nullopt;
    if (!seed) fail(where + "seed must be a decimal u64 string");
    r.seed = *seed;
    if (!rec.contains("complexity") || !rec["complexity"].is_number() ||
        !rec.contains("normalized_complexity") || !rec["normalized_complexity"].is_number())
      fail(where + "missing complexity fields");
    r.complexity = rec["complexity"].get<double>();
    r.normalized_complexity = rec["normalized_complexity"].get<double>();
    if (!std::isfinite(r.complexity) || r.complexity <= 0.0) fail(where + "complexity must be positive");
    if (!(r.normalized_complexity >= 0.0 && r.normalized_complexity <= 1.0))
      fail(where + "normalized_complexity outside [0, 1]");
    if (!rec.contains("asset_path") || !rec["asset_path"].is_string()) fail(where + "missing asset_path");
    r.asset_path = rec["asset_path"].get<std::string>();
    const std::filesystem::path asset(r.asset_path);
    if (asset.empty() || asset.is_absolute() ||
        std::find(asset.begin(), asset.end(), "..") != asset.end())
      fail(where + "asset_path must be relative: " + r.asset_path);
    if (!std::filesystem::is_regular_file(dir / asset))
      fail(where + "missing asset " + (dir / asset).string());
    index.records.push_back(std::move(r));
  }

  std::sort(index.records.begin(), index.records.end(),
            [](const StrokeRecord& a, const StrokeRecord& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < index.records.size(); ++i)
    if (index.records[i].id != i) fail("record ids must be unique and dense from 0");

  for (Quadrant q : kStrokeQuadrants) {
    double lo_c = std::numeric_limits<double>::infinity(), hi_c = -lo_c;
    double lo_n = lo_c, hi_n = hi_c;
    for (const auto& r : index.records)
      if (r.quadrant == q) {
        lo_c = std::min(lo_c, r.complexity);
        hi_c = std::max(hi_c, r.complexity);
        lo_n = std::min(lo_n, r.normalized_complexity);
        hi_n = std::max(hi_n, r.normalized_complexity);
      }
    if (hi_c > lo_c && (lo_n != 0.0 || hi_n != 1.0))
      fail(std::string("normalized complexities of ") + std::string(to_string(q)) +
           " do not span [0, 1]");
  }
  return index;
}

/// Record of `quadrant` whose normalized complexity is closest to the
/// normalized intensity; ties go to the smaller id.
inline const StrokeRecord& match_stroke(const StrokeIndex& index, Quadrant quadrant,
                                        double normalized_intensity) {
  if (quadrant == Quadrant::Neutral) throw NeutralQuadrant("neutral segments have no stroke");
  if (!(normalized_intensity >= 0.0 && normalized_intensity <= 1.0))
    throw DomainError("normalized intensity must lie in [0, 1]");
  const StrokeRecord* best = nullptr;
  double best_gap = 0.0;
  for (const auto& r : index.records) {
    if (r.quadrant != quadrant) continue;
    const double gap = std::abs(r.normalized_complexity - normalized_intensity);
    if (!best || gap < best_gap || (gap == best_gap && r.id < best->id)) {
      best = &r;
      best_gap = gap;
    }
  }
  if (!best) throw EmptyQuadrant("no strokes for " + std::string(to_string(quadrant)));
  return *best;
}

/// Outline vertices of a stroke asset, read back from its path data.
inline std::vector<Vec2> load_outline(const std::filesystem::path& db_dir, const StrokeRecord& record) {
  const auto path = db_dir / record.asset_path;
  const std::string svg = detail::read_file(path);
  const auto d_at = svg.find(" d=\"");
  if (d_at == std::string::npos) throw SchemaError(path.string() + ": no path data");
  const auto d_end = svg.find('"', d_at + 4);
  if (d_end == std::string::npos) throw SchemaError(path.string() + ": unterminated path data");

  std::vector<Vec2> out;
  std::istringstream in(svg.substr(d_at + 4, d_end - d_at - 4));
  std::string tok;
  double pending_x = 0.0;
  bool have_x = false;
  while (in >> tok) {
    if (tok == "Z" || tok == "z") break;
    if (tok.front() == 'M' || tok.front() == 'L') tok.erase(0, 1);
    if (tok.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) throw SchemaError(path.string() + ": bad path token '" + tok + "'");
    if (have_x) {
      out.push_back({pending_x, v});
    } else {
      pending_x = v;
    }
    have_x = !have_x;
  }
  if (have_x || out.size() < 3) throw SchemaError(path.string() + ": path needs at least 3 vertices");
  return out;
}

}  // namespace poemotion
