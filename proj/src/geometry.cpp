#include "cfem/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cfem {

Vec2 SignedDistance::gradient(const Point& p, double h) const {
  const Vec2 ex(h, 0.0);
  const Vec2 ey(0.0, h);
  return Vec2((evaluator_(p + ex) - evaluator_(p - ex)) / (2.0 * h),
              (evaluator_(p + ey) - evaluator_(p - ey)) / (2.0 * h));
}

double sdf_rectangle(const Point& p, const Point& lo, const Point& hi) {
  const Point center = 0.5 * (lo + hi);
  const Vec2 half = 0.5 * (hi - lo);
  const Vec2 q = (p - center).cwiseAbs() - half;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(std::max(q.x(), q.y()), 0.0);
  return outside + inside;
}

double sdf_circle(const Point& p, const Point& center, double radius) {
  return (p - center).norm() - radius;
}

double sdf_difference(double d_a, double d_b) { return std::max(d_a, -d_b); }

double sdf_union(double d_a, double d_b) { return std::min(d_a, d_b); }

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double sdf_polygon(const Point& p, std::span<const Point> vertices) {
  const std::size_t n = vertices.size();
  double dist = std::numeric_limits<double>::infinity();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = vertices[j];
    const Point& b = vertices[i];
    dist = std::min(dist, segment_distance(p, a, b));
    // even-odd crossing test
    if ((b.y() > p.y()) != (a.y() > p.y())) {
      const double x_cross = (a.x() - b.x()) * (p.y() - b.y()) / (a.y() - b.y()) + b.x();
      if (p.x() < x_cross) inside = !inside;
    }
  }
  if (dist == 0.0) return 0.0;
  return inside ? -dist : dist;
}

double BoundarySegment::distance(const Point& p) const {
  if (const auto* line = std::get_if<LineSegment>(&shape)) {
    return segment_distance(p, line->a, line->b);
  }
  const auto& arc = std::get<Arc>(shape);
  return std::abs((p - arc.center).norm() - arc.radius);
}

Point BoundarySegment::project(const Point& p) const {
  if (const auto* line = std::get_if<LineSegment>(&shape)) {
    const Vec2 ab = line->b - line->a;
    const double t = std::clamp((p - line->a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return line->a + t * ab;
  }
  const auto& arc = std::get<Arc>(shape);
  const Vec2 r = p - arc.center;
  const double n = r.norm();
  if (n == 0.0) return arc.center + Vec2(arc.radius, 0.0);
  return arc.center + (arc.radius / n) * r;
}

std::optional<std::size_t> DomainPreset::classify(const Point& p, double tol) const {
  for (std::size_t i = 0; i < boundary_segments.size(); ++i) {
    if (boundary_segments[i].distance(p) <= tol) return i;
  }
  return std::nullopt;
}

const BoundarySegment& DomainPreset::segment(std::string_view tag) const {
  for (const auto& s : boundary_segments) {
    if (s.tag == tag) return s;
  }
  throw GeometryError("preset '" + name + "' has no boundary segment '" + std::string(tag) + "'");
}

namespace {

constexpr std::array<std::string_view, 3> kPresetNames{"unit_square", "vnotch",
                                                       "vnotch_with_inclusion"};

DomainPreset unit_square() {
  DomainPreset preset;
  preset.name = "unit_square";
  const Point lo(0.0, 0.0);
  const Point hi(1.0, 1.0);
  preset.sdf = SignedDistance([lo, hi](const Point& p) { return sdf_rectangle(p, lo, hi); },
                              Box{0.0, 0.0, 1.0, 1.0});
  const Point c00(0.0, 0.0), c10(1.0, 0.0), c11(1.0, 1.0), c01(0.0, 1.0);
  // left, right, bottom, top
  preset.boundary_segments = {
      {"D1", LineSegment{c01, c00}, false},
      {"D2", LineSegment{c10, c11}, false},
      {"D3", LineSegment{c00, c10}, false},
      {"D4", LineSegment{c11, c01}, false},
  };
  preset.fixed_points = {c00, c10, c11, c01};
  return preset;
}

// Counter-clockwise outline of the notched square starting at the notch tip.
std::vector<Point> vnotch_outline(const PresetGeometry& g) {
  const double y0 = g.notch_center_y;
  const double hw = g.notch_half_width;
  if (!(g.notch_depth > 0.0 && g.notch_depth < 1.0) || !(hw > 0.0) || y0 - hw <= 0.0 ||
      y0 + hw >= 1.0) {
    throw GeometryError("notch must fit strictly inside the right edge of the unit square");
  }
  const Point tip(1.0 - g.notch_depth, y0);
  return {tip,
          Point(1.0, y0 + hw),
          Point(1.0, 1.0),
          Point(0.0, 1.0),
          Point(0.0, 0.0),
          Point(1.0, 0.0),
          Point(1.0, y0 - hw)};
}

DomainPreset vnotch(const PresetGeometry& g) {
  DomainPreset preset;
  preset.name = "vnotch";
  std::vector<Point> outline = vnotch_outline(g);
  preset.sdf = SignedDistance([outline](const Point& p) { return sdf_polygon(p, outline); },
                              Box{0.0, 0.0, 1.0, 1.0});
  // G1 upper notch flank, G2 upper right edge, G3 top, G4 left, G5 bottom,
  // G6 lower right edge, G7 lower notch flank.
  for (std::size_t i = 0; i < outline.size(); ++i) {
    const Point& a = outline[i];
    const Point& b = outline[(i + 1) % outline.size()];
    preset.boundary_segments.push_back({"G" + std::to_string(i + 1), LineSegment{a, b}, false});
  }
  preset.fixed_points = outline;
  return preset;
}

DomainPreset vnotch_with_inclusion(const PresetGeometry& g) {
  DomainPreset preset = vnotch(g);
  preset.name = "vnotch_with_inclusion";
  const Arc arc{g.inclusion_center, g.inclusion_radius};
  if (!(arc.radius > 0.0)) throw GeometryError("inclusion radius must be positive");
  const std::vector<Point> outline = vnotch_outline(g);
  // The disc must sit strictly inside the notched square.
  if (sdf_polygon(arc.center, outline) + arc.radius >= 0.0) {
    throw GeometryError("inclusion disc must lie strictly inside the notched square");
  }
  preset.sdf = SignedDistance(
      [outline, arc](const Point& p) {
        return sdf_difference(sdf_polygon(p, outline), sdf_circle(p, arc.center, arc.radius));
      },
      Box{0.0, 0.0, 1.0, 1.0});
  preset.boundary_segments.push_back({"H1", arc, true});
  preset.curved_arcs.push_back(arc);
  return preset;
}

}  // namespace

std::span<const std::string_view> preset_names() { return kPresetNames; }

DomainPreset make_preset(std::string_view name, const PresetGeometry& geometry) {
  if (name == "unit_square") return unit_square();
  if (name == "vnotch") return vnotch(geometry);
  if (name == "vnotch_with_inclusion") return vnotch_with_inclusion(geometry);
  throw GeometryError("unknown preset '" + std::string(name) + "'");
}

}  // namespace cfem
