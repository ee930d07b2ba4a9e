#pragma once

// Linear triangulation of a signed-distance domain (force-equilibrium
// smoothing with Delaunay retriangulation) and enrichment to 10-node cubic
// triangles with one optionally curved edge.

#include "cfem/common.hpp"
#include "cfem/geometry.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cfem {

using Triangle = std::array<Index, 3>;

struct LinearMesh {
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;  // counter-clockwise
  std::vector<bool> boundary_vertex;
};

/// Delaunay triangulation of a point set (Bowyer-Watson). Triangles are
/// counter-clockwise.
std::vector<Triangle> delaunay_triangulate(const std::vector<Point>& points);

using EdgeLengthFn = std::function<double(const Point&)>;

struct MeshingOptions {
  double h0 = 0.1;
  EdgeLengthFn edge_length;  // relative size function; uniform if empty
  std::vector<Point> fixed;
  int max_iters = 5000;
  std::uint64_t seed = 1;
  double retriangulate_tol = 0.1;  // fraction of h0
  double time_step = 0.2;
  double move_tol = 1e-3;  // fraction of h0
  double internal_pressure = 1.2;
  double geps_factor = 1e-3;  // geps = geps_factor * h0
};

LinearMesh generate_linear_mesh(const SignedDistance& sdf, const MeshingOptions& options);

/// n x n grid of squares on [lo, hi], each cut along its lower-left to
/// upper-right diagonal (2 n^2 triangles).
LinearMesh structured_square_mesh(int divisions, const Point& lo = Point(0.0, 0.0),
                                  const Point& hi = Point(1.0, 1.0));

/// 2 * inradius / circumradius, 1 for equilateral triangles.
double triangle_quality(const Point& a, const Point& b, const Point& c);
double signed_area(const Point& a, const Point& b, const Point& c);

struct EdgeTopology {
  std::vector<std::array<Index, 2>> edges;  // sorted vertex pairs
  std::vector<int> triangle_count;          // triangles sharing each edge
};
EdgeTopology edge_topology(const LinearMesh& mesh);

/// Local edge 0 joins local vertices 1-2, the edge carrying nodes 4 and 5.
struct CurvedEdge {
  int local_edge = 0;
  Index arc = 0;
};

/// 10-node cubic triangles. Node ordering per element: vertices 1-3, nodes
/// 4,5 on edge 1-2 (4 nearer vertex 1), 6,7 on edge 2-3 (6 nearer vertex 2),
/// 8,9 on edge 3-1 (8 nearer vertex 3), interior node 10.
struct CubicMesh {
  std::vector<Point> nodes;
  std::vector<std::string> node_tags;  // empty string for interior nodes
  std::vector<std::array<Index, 10>> elements;
  std::vector<std::optional<CurvedEdge>> curved;
  std::vector<Arc> arcs;
  Index vertex_count = 0;  // nodes [0, vertex_count) are triangle vertices

  Index dof_count() const { return nodes.size(); }
  Index boundary_point_count() const;
  Index element_count() const { return elements.size(); }
  Index curved_element_count() const;
};

struct EnrichOptions {
  double max_arc_angle = 1.0471975511965976;  // pi / 3
  double snap_tol = 1e-6;                     // boundary vertex classification tolerance
};

CubicMesh enrich_to_cubic(const LinearMesh& linear, const DomainPreset& preset,
                          const EnrichOptions& options = {});

/// Recovers the vertex triangulation underlying a cubic mesh.
LinearMesh linear_skeleton(const CubicMesh& mesh);

struct DofReport {
  Index elements = 0;
  Index dof = 0;
  Index boundary_points = 0;
  Index vertices = 0;
  Index edges = 0;
};

DofReport dof_report(const CubicMesh& mesh);

}  // namespace cfem
