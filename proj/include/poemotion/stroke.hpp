#pragma once

// Procedural calligraphic strokes, their contour polygons and the
// perimeter-squared-over-area complexity measure.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "poemotion/emotion.hpp"
#include "poemotion/error.hpp"
#include "poemotion/random.hpp"

namespace poemotion {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
};

inline double length(Vec2 v) { return std::hypot(v.x, v.y); }

enum class TurnMode { Smooth, Sharp };

/// Brush behaviour for one quadrant. Speed maps to step_length, weight to
/// base_width, trembling to tremor_amp and scribbling to Sharp turns.
struct StrokeParams {
  int point_count = 2;
  double step_length = 1.0;
  double turn_deg = 0.0;  // Smooth: gaussian sigma. Sharp: lower edge of the turn band.
  double turn_band_deg = 0.0;  // Sharp only: band width above turn_deg.
  TurnMode turn_mode = TurnMode::Smooth;
  double base_width = 1.0;
  double tremor_amp = 0.0;
};

inline StrokeParams base_params(Quadrant q) {
  switch (q) {
    case Quadrant::Excitement: return {24, 28.0, 20.0, 0.0, TurnMode::Smooth, 4.0, 0.5};
    case Quadrant::Anger: return {20, 30.0, 90.0, 60.0, TurnMode::Sharp, 10.0, 1.0};
    case Quadrant::Sadness: return {30, 10.0, 12.0, 0.0, TurnMode::Smooth, 9.0, 3.5};
    case Quadrant::Relaxation: return {16, 14.0, 6.0, 0.0, TurnMode::Smooth, 3.5, 0.5};
    case Quadrant::Neutral: break;
  }
  throw NeutralQuadrant("neutral segments have no stroke");
}

/// Base parameters scaled by normalized intensity in [0, 1].
inline StrokeParams scaled_params(Quadrant q, double normalized_intensity) {
  if (!(normalized_intensity >= 0.0 && normalized_intensity <= 1.0))
    throw DomainError("normalized intensity must lie in [0, 1]");
  StrokeParams p = base_params(q);
  const double i = normalized_intensity;
  p.base_width *= 0.6 + 0.8 * i;
  p.tremor_amp *= 0.5 + i;
  p.turn_deg *= 0.7 + 0.6 * i;
  p.turn_band_deg *= 0.7 + 0.6 * i;
  return p;
}

struct StrokePoint {
  double x = 0.0;
  double y = 0.0;
  double width = 1.0;

  friend bool operator==(const StrokePoint&, const StrokePoint&) = default;
};

struct StrokePath {
  std::vector<StrokePoint> points;
  Quadrant quadrant = Quadrant::Neutral;
  double intensity_used = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const StrokePath&, const StrokePath&) = default;
};

/// Deterministic stroke for (quadrant, intensity, seed).
///
/// The pen starts at the origin heading along +x. Point 0 draws
/// (tremor_x, tremor_y, width); every later point draws
/// (turn, tremor_x, tremor_y, width), turning then advancing one step before
/// the tremor offset is applied. Sharp turns alternate sign, starting
/// positive.
inline StrokePath synthesize_stroke(Quadrant quadrant, double normalized_intensity,
                                    std::uint64_t seed) {
  if (quadrant == Quadrant::Neutral) throw NeutralQuadrant("neutral segments have no stroke");
  const StrokeParams p = scaled_params(quadrant, normalized_intensity);
  constexpr double kDeg = std::numbers::pi / 180.0;

  SplitMix64 rng(seed);
  StrokePath path;
  path.quadrant = quadrant;
  path.intensity_used = normalized_intensity;
  path.seed = seed;
  path.points.reserve(static_cast<std::size_t>(p.point_count));

  double heading = 0.0;
  Vec2 pen{};
  for (int i = 0; i < p.point_count; ++i) {
    if (i > 0) {
      double turn = 0.0;
      if (p.turn_mode == TurnMode::Smooth) {
        turn = rng.gaussian() * p.turn_deg;
      } else {
        turn = p.turn_deg + p.turn_band_deg * rng.uniform();
        if (i % 2 == 0) turn = -turn;
      }
      heading += turn * kDeg;
      pen = pen + Vec2{std::cos(heading), std::sin(heading)} * p.step_length;
    }
    const double tx = (2.0 * rng.uniform() - 1.0) * p.tremor_amp;
    const double ty = (2.0 * rng.uniform() - 1.0) * p.tremor_amp;
    const double w = p.base_width * (0.85 + 0.3 * rng.uniform());
    path.points.push_back({pen.x + tx, pen.y + ty, w});
  }
  return path;
}

/// Closed polygon; the last vertex connects back to the first.
struct ContourPolygon {
  std::vector<Vec2> vertices;
};

/// Offsets each point by half its width along the local normal. Tangents are
/// central differences inside the path and one-sided at the ends. Vertices
/// are the left side in order followed by the right side reversed.
inline ContourPolygon ribbon_polygon(const StrokePath& path) {
  const auto& pts = path.points;
  if (pts.size() < 2) throw DegeneratePath("a stroke needs at least two points");
  auto at = [&](std::size_t i) { return Vec2{pts[i].x, pts[i].y}; };
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (at(i) == at(i - 1)) throw DegeneratePath("stroke has a zero-length segment");

  const std::size_t n = pts.size();
  std::vector<Vec2> left(n), right(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 t;
    if (i == 0) t = at(1) - at(0);
    else if (i + 1 == n) t = at(n - 1) - at(n - 2);
    else t = at(i + 1) - at(i - 1);
    // A near-reversal can cancel the central difference; fall back to the
    // incoming segment.
    if (length(t) < 1e-9) t = at(i) - at(i - 1);
    t = t * (1.0 / length(t));
    const Vec2 normal{-t.y, t.x};
    const double half = pts[i].width / 2.0;
    left[i] = at(i) + normal * half;
    right[i] = at(i) - normal * half;
  }
  ContourPolygon poly;
  poly.vertices = std::move(left);
  poly.vertices.insert(poly.vertices.end(), right.rbegin(), right.rend());
  return poly;
}

inline double polygon_perimeter(const ContourPolygon& poly) {
  const auto& v = poly.vertices;
  double p = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) p += length(v[(i + 1) % v.size()] - v[i]);
  return p;
}

/// Absolute shoelace area. Coordinates are taken relative to the first
/// vertex to limit cancellation.
inline double polygon_area(const ContourPolygon& poly) {
  const auto& v = poly.vertices;
  if (v.empty()) return 0.0;
  const Vec2 o = v.front();
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i] - o;
    const Vec2 b = v[(i + 1) % v.size()] - o;
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

/// Perimeter^2 / Area. Scale-invariant; 4*pi for a circle, 16 for a square.
inline double polygon_complexity(const ContourPolygon& poly) {
  if (poly.vertices.size() < 3) throw ZeroArea("a contour needs at least three vertices");
  const double area = polygon_area(poly);
  if (area < 1e-12) throw ZeroArea("contour area is zero");
  const double perimeter = polygon_perimeter(poly);
  return perimeter * perimeter / area;
}

inline double stroke_complexity(const StrokePath& path) {
  return polygon_complexity(ribbon_polygon(path));
}

/// Empirical GAN value V(D, G) = mean log D(x) + mean log(1 - D(G(z))),
/// where `d_real` are discriminator outputs on data and `d_fake` on
/// generated samples. Inputs are clamped into [1e-12, 1 - 1e-12] before the
/// logarithms.
inline double gan_objective(std::span<const double> d_real, std::span<const double> d_fake) {
  if (d_real.empty() || d_fake.empty()) throw EmptyInput("discriminator outputs must be non-empty");
  static constexpr double kEps = 1e-12;
  auto check = [](double d) {
    if (!(d >= 0.0 && d <= 1.0)) throw DomainError("discriminator output outside [0, 1]");
    return std::clamp(d, kEps, 1.0 - kEps);
  };
  double real = 0.0;
  for (double d : d_real) real += std::log(check(d));
  double fake = 0.0;
  for (double d : d_fake) fake += std::log1p(-check(d));
  return real / static_cast<double>(d_real.size()) + fake / static_cast<double>(d_fake.size());
}

}  // namespace poemotion
