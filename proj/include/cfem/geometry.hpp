#pragma once

// Signed distance functions and the benchmark domains.
//
// Sign convention: negative inside the domain, zero on the boundary,
// positive outside.

#include "cfem/common.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cfem {

struct Box {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 1.0;
  double ymax = 1.0;

  bool contains(const Point& p, double tol = 0.0) const {
    return p.x() >= xmin - tol && p.x() <= xmax + tol && p.y() >= ymin - tol &&
           p.y() <= ymax + tol;
  }
};

class SignedDistance {
 public:
  using Evaluator = std::function<double(const Point&)>;

  SignedDistance() = default;
  SignedDistance(Evaluator evaluator, Box bounding_box)
      : evaluator_(std::move(evaluator)), box_(bounding_box) {}

  double operator()(const Point& p) const { return evaluator_(p); }
  const Box& bounding_box() const { return box_; }

  /// Central-difference gradient with step h.
  Vec2 gradient(const Point& p, double h) const;

 private:
  Evaluator evaluator_;
  Box box_;
};

double sdf_rectangle(const Point& p, const Point& lo, const Point& hi);
double sdf_circle(const Point& p, const Point& center, double radius);
double sdf_difference(double d_a, double d_b);
double sdf_union(double d_a, double d_b);

/// Exact signed distance to a simple polygon (vertices in either orientation).
double sdf_polygon(const Point& p, std::span<const Point> vertices);

/// Distance from p to the closed segment [a, b].
double segment_distance(const Point& p, const Point& a, const Point& b);

struct LineSegment {
  Point a;
  Point b;
};

struct Arc {
  Point center;
  double radius = 0.0;
};

/// One tagged piece of the domain boundary.
struct BoundarySegment {
  std::string tag;
  std::variant<LineSegment, Arc> shape;
  /// True for traction-free / flux-free pieces (inclusion boundaries).
  bool natural = false;

  double distance(const Point& p) const;
  Point project(const Point& p) const;
  bool is_arc() const { return std::holds_alternative<Arc>(shape); }
};

/// Overridable dimensions of the V-notch presets. The notch is cut into the
/// right edge x = xmax of the unit square and opens symmetrically about
/// y = notch_center_y.
struct PresetGeometry {
  double notch_depth = 0.4;
  double notch_half_width = 0.1;
  double notch_center_y = 0.5;
  Point inclusion_center{0.35, 0.5};
  double inclusion_radius = 0.15;
};

struct DomainPreset {
  std::string name;
  SignedDistance sdf;
  std::vector<BoundarySegment> boundary_segments;
  std::vector<Point> fixed_points;
  std::vector<Arc> curved_arcs;

  /// Index of the first segment (in declaration order) within tol of p.
  std::optional<std::size_t> classify(const Point& p, double tol) const;
  const BoundarySegment& segment(std::string_view tag) const;
};

/// Names accepted by make_preset().
std::span<const std::string_view> preset_names();

/// Builds "unit_square", "vnotch" or "vnotch_with_inclusion".
/// Throws GeometryError for unknown names or inconsistent overrides.
DomainPreset make_preset(std::string_view name, const PresetGeometry& geometry = {});

}  // namespace cfem
