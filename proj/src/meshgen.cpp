#include "cfem/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace cfem {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

double triangle_quality(const Point& a, const Point& b, const Point& c) {
  const double la = (b - c).norm();
  const double lb = (c - a).norm();
  const double lc = (a - b).norm();
  const double area = std::abs(signed_area(a, b, c));
  if (area == 0.0) return 0.0;
  const double s = 0.5 * (la + lb + lc);
  const double inradius = area / s;
  const double circumradius = la * lb * lc / (4.0 * area);
  return 2.0 * inradius / circumradius;
}

EdgeTopology edge_topology(const LinearMesh& mesh) {
  std::map<std::array<Index, 2>, Index> index;
  EdgeTopology topo;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const Index a = t[k], b = t[(k + 1) % 3];
      const std::array<Index, 2> key{std::min(a, b), std::max(a, b)};
      auto [it, inserted] = index.emplace(key, topo.edges.size());
      if (inserted) {
        topo.edges.push_back(key);
        topo.triangle_count.push_back(0);
      }
      topo.triangle_count[it->second] += 1;
    }
  }
  return topo;
}

namespace {

std::vector<bool> boundary_flags(const LinearMesh& mesh) {
  std::vector<bool> flags(mesh.vertices.size(), false);
  const EdgeTopology topo = edge_topology(mesh);
  for (Index e = 0; e < topo.edges.size(); ++e) {
    if (topo.triangle_count[e] == 1) {
      flags[topo.edges[e][0]] = true;
      flags[topo.edges[e][1]] = true;
    }
  }
  return flags;
}

std::vector<Triangle> interior_triangles(const std::vector<Point>& p, const SignedDistance& sdf,
                                         double geps) {
  std::vector<Triangle> t = delaunay_triangulate(p);
  std::erase_if(t, [&](const Triangle& tri) {
    const Point centroid = (p[tri[0]] + p[tri[1]] + p[tri[2]]) / 3.0;
    return sdf(centroid) >= -geps;
  });
  return t;
}

std::vector<std::array<Index, 2>> unique_bars(const std::vector<Triangle>& tris) {
  std::vector<std::array<Index, 2>> bars;
  bars.reserve(3 * tris.size());
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) {
      const Index a = t[k], b = t[(k + 1) % 3];
      bars.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(bars.begin(), bars.end());
  bars.erase(std::unique(bars.begin(), bars.end()), bars.end());
  return bars;
}

Point project_to_boundary(const SignedDistance& sdf, Point p, double deps) {
  for (int it = 0; it < 50; ++it) {
    const double d = sdf(p);
    if (std::abs(d) < 1e-14) break;
    const Vec2 g = sdf.gradient(p, deps);
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) break;
    p -= d * g / g2;
  }
  return p;
}

}  // namespace

LinearMesh generate_linear_mesh(const SignedDistance& sdf, const MeshingOptions& opt) {
  const double h0 = opt.h0;
  if (!(h0 > 0.0)) throw MeshError("h0 must be positive");
  const double geps = opt.geps_factor * h0;
  const double deps = std::sqrt(std::numeric_limits<double>::epsilon()) * h0;
  const Box box = sdf.bounding_box();
  auto size_at = [&](const Point& p) { return opt.edge_length ? opt.edge_length(p) : 1.0; };

  for (const auto& f : opt.fixed) {
    if (std::abs(sdf(f)) > geps && sdf(f) > 0.0) {
      std::ostringstream msg;
      msg << "fixed point (" << f.x() << ", " << f.y() << ") lies outside the domain";
      throw MeshError(msg.str());
    }
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Equilateral grid clipped to the domain.
  std::vector<Point> candidates;
  const double dy = h0 * std::sqrt(3.0) / 2.0;
  for (int j = 0;; ++j) {
    const double y = box.ymin + j * dy;
    if (y > box.ymax + 1e-12 * h0) break;
    const double shift = (j % 2 == 1) ? 0.5 * h0 : 0.0;
    for (int i = 0;; ++i) {
      const double x = box.xmin + shift + i * h0;
      if (x > box.xmax + 1e-12 * h0) break;
      const Point p(x, y);
      if (sdf(p) < -geps) candidates.push_back(p);
    }
  }

  // Density-based rejection and a small seeded jitter.
  double r0_max = 0.0;
  std::vector<double> r0(candidates.size());
  for (Index i = 0; i < candidates.size(); ++i) {
    const double s = size_at(candidates[i]);
    r0[i] = 1.0 / (s * s);
    r0_max = std::max(r0_max, r0[i]);
  }
  std::vector<Point> p = opt.fixed;
  const Index nfix = p.size();
  for (Index i = 0; i < candidates.size(); ++i) {
    const double keep = unit(rng);
    const double jx = unit(rng) - 0.5;
    const double jy = unit(rng) - 0.5;
    if (keep >= r0[i] / r0_max) continue;
    bool duplicate = false;
    for (Index f = 0; f < nfix; ++f) {
      if ((candidates[i] - p[f]).norm() < 1e-10 * h0) duplicate = true;
    }
    if (duplicate) continue;
    Point q = candidates[i] + 1e-3 * h0 * Vec2(jx, jy);
    if (sdf(q) >= -geps) q = candidates[i];
    p.push_back(q);
  }
  if (p.size() < 3) throw MeshError("degenerate domain: fewer than 3 points at spacing h0");

  const Index np = p.size();
  std::vector<Point> p_old(np, Point(std::numeric_limits<double>::infinity(), 0.0));
  std::vector<Triangle> tris;
  std::vector<std::array<Index, 2>> bars;
  std::vector<Vec2> force(np);
  double last_move = std::numeric_limits<double>::infinity();
  bool converged = false;

  for (int iter = 0; iter < opt.max_iters; ++iter) {
    double max_shift = 0.0;
    for (Index i = 0; i < np; ++i) max_shift = std::max(max_shift, (p[i] - p_old[i]).norm());
    if (max_shift > opt.retriangulate_tol * h0) {
      p_old = p;
      tris = interior_triangles(p, sdf, geps);
      bars = unique_bars(tris);
    }

    // Spring forces: repulsive only, natural length scaled up by internal_pressure.
    std::vector<double> len(bars.size());
    std::vector<double> hbar(bars.size());
    double sum_l2 = 0.0, sum_h2 = 0.0;
    for (Index k = 0; k < bars.size(); ++k) {
      const Point& a = p[bars[k][0]];
      const Point& b = p[bars[k][1]];
      len[k] = (a - b).norm();
      hbar[k] = size_at(0.5 * (a + b));
      sum_l2 += len[k] * len[k];
      sum_h2 += hbar[k] * hbar[k];
    }
    const double scale = opt.internal_pressure * std::sqrt(sum_l2 / sum_h2);
    std::fill(force.begin(), force.end(), Vec2::Zero());
    for (Index k = 0; k < bars.size(); ++k) {
      const double l0 = hbar[k] * scale;
      const double f = std::max(l0 - len[k], 0.0);
      if (len[k] == 0.0) continue;
      const Vec2 fv = (f / len[k]) * (p[bars[k][0]] - p[bars[k][1]]);
      force[bars[k][0]] += fv;
      force[bars[k][1]] -= fv;
    }
    for (Index f = 0; f < nfix; ++f) force[f].setZero();

    last_move = 0.0;
    for (Index i = 0; i < np; ++i) {
      p[i] += opt.time_step * force[i];
      double d = sdf(p[i]);
      if (d > 0.0) {
        const Vec2 g = sdf.gradient(p[i], deps);
        const double g2 = g.squaredNorm();
        if (g2 > 0.0) p[i] -= d * g / g2;
        d = sdf(p[i]);
      }
      if (d < -geps) last_move = std::max(last_move, opt.time_step * force[i].norm());
    }
    if (last_move / h0 < opt.move_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "mesh smoothing did not converge in " << opt.max_iters
        << " iterations (last relative movement " << last_move / h0 << ")";
    throw ConvergenceError(msg.str(), last_move / h0);
  }

  LinearMesh mesh;
  tris = interior_triangles(p, sdf, geps);
  std::vector<Index> remap(np, std::numeric_limits<Index>::max());
  for (auto& t : tris) {
    for (auto& v : t) {
      if (remap[v] == std::numeric_limits<Index>::max()) {
        remap[v] = mesh.vertices.size();
        mesh.vertices.push_back(p[v]);
      }
      v = remap[v];
    }
  }
  // Keep vertex numbering tied to the smoothed point order rather than first use.
  {
    std::vector<std::pair<Index, Index>> order;  // (original, new)
    for (Index i = 0; i < np; ++i) {
      if (remap[i] != std::numeric_limits<Index>::max()) order.emplace_back(i, remap[i]);
    }
    std::vector<Index> renumber(mesh.vertices.size());
    std::vector<Point> ordered;
    ordered.reserve(mesh.vertices.size());
    for (const auto& [orig, fresh] : order) {
      renumber[fresh] = ordered.size();
      ordered.push_back(p[orig]);
    }
    mesh.vertices = std::move(ordered);
    for (auto& t : tris) {
      for (auto& v : t) v = renumber[v];
    }
  }
  mesh.triangles = std::move(tris);
  mesh.boundary_vertex = boundary_flags(mesh);

  for (Index i = 0; i < mesh.vertices.size(); ++i) {
    if (mesh.boundary_vertex[i]) mesh.vertices[i] = project_to_boundary(sdf, mesh.vertices[i], deps);
  }
  for (auto& t : mesh.triangles) {
    const double a = signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    if (a < 0.0) std::swap(t[1], t[2]);
    if (a == 0.0) throw MeshError("generated mesh contains a degenerate triangle");
  }
  return mesh;
}

LinearMesh structured_square_mesh(int divisions, const Point& lo, const Point& hi) {
  if (divisions < 1) throw MeshError("structured mesh needs at least one division");
  const Index n = static_cast<Index>(divisions);
  LinearMesh mesh;
  for (Index j = 0; j <= n; ++j) {
    for (Index i = 0; i <= n; ++i) {
      const double sx = static_cast<double>(i) / static_cast<double>(n);
      const double sy = static_cast<double>(j) / static_cast<double>(n);
      mesh.vertices.emplace_back(lo.x() + sx * (hi.x() - lo.x()), lo.y() + sy * (hi.y() - lo.y()));
    }
  }
  auto id = [n](Index i, Index j) { return j * (n + 1) + i; };
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  mesh.boundary_vertex = boundary_flags(mesh);
  return mesh;
}

Index CubicMesh::boundary_point_count() const {
  return static_cast<Index>(
      std::count_if(node_tags.begin(), node_tags.end(), [](const std::string& t) { return !t.empty(); }));
}

Index CubicMesh::curved_element_count() const {
  return static_cast<Index>(
      std::count_if(curved.begin(), curved.end(), [](const auto& c) { return c.has_value(); }));
}

namespace {

constexpr Index kNone = std::numeric_limits<Index>::max();

double wrap_angle(double a) {
  constexpr double pi = 3.14159265358979323846;
  while (a > pi) a -= 2.0 * pi;
  while (a <= -pi) a += 2.0 * pi;
  return a;
}

}  // namespace

CubicMesh enrich_to_cubic(const LinearMesh& linear, const DomainPreset& preset,
                          const EnrichOptions& options) {
  const Index nv = linear.vertices.size();
  const auto& segments = preset.boundary_segments;

  std::vector<Index> segment_arc(segments.size(), kNone);
  {
    Index k = 0;
    for (Index s = 0; s < segments.size(); ++s) {
      if (segments[s].is_arc()) segment_arc[s] = k++;
    }
    if (k != preset.curved_arcs.size()) throw MeshError("preset arc table does not match its segments");
  }

  // Boundary edges and the segment each one lies on.
  const EdgeTopology topo = edge_topology(linear);
  std::map<std::array<Index, 2>, Index> edge_segment;
  std::vector<std::vector<Index>> vertex_segments(nv);
  std::vector<bool> on_boundary(nv, false);
  for (Index e = 0; e < topo.edges.size(); ++e) {
    if (topo.triangle_count[e] > 2) throw MeshError("edge shared by more than two triangles");
    if (topo.triangle_count[e] != 1) continue;
    on_boundary[topo.edges[e][0]] = true;
    on_boundary[topo.edges[e][1]] = true;
  }
  std::vector<Point> vertices = linear.vertices;
  for (Index v = 0; v < nv; ++v) {
    if (!on_boundary[v]) continue;
    Index nearest = kNone;
    double best = std::numeric_limits<double>::infinity();
    for (Index s = 0; s < segments.size(); ++s) {
      const double d = segments[s].distance(vertices[v]);
      if (d <= options.snap_tol) vertex_segments[v].push_back(s);
      if (d < best) {
        best = d;
        nearest = s;
      }
    }
    if (vertex_segments[v].empty()) {
      std::ostringstream msg;
      msg << "boundary vertex " << v << " at (" << vertices[v].x() << ", " << vertices[v].y()
          << ") is not on any boundary segment (distance " << best << ")";
      throw MeshError(msg.str());
    }
    vertices[v] = segments[nearest].project(vertices[v]);
  }
  for (Index e = 0; e < topo.edges.size(); ++e) {
    if (topo.triangle_count[e] != 1) continue;
    const auto& [a, b] = topo.edges[e];
    Index found = kNone;
    for (Index s : vertex_segments[a]) {
      if (std::find(vertex_segments[b].begin(), vertex_segments[b].end(), s) !=
          vertex_segments[b].end()) {
        found = s;
        break;
      }
    }
    if (found == kNone) {
      throw MeshError("boundary edge (" + std::to_string(a) + ", " + std::to_string(b) +
                      ") spans two boundary segments");
    }
    edge_segment[topo.edges[e]] = found;
  }

  CubicMesh mesh;
  mesh.vertex_count = nv;
  mesh.arcs = preset.curved_arcs;
  mesh.nodes = vertices;
  mesh.node_tags.assign(nv, std::string());
  for (Index v = 0; v < nv; ++v) {
    if (on_boundary[v]) mesh.node_tags[v] = segments[vertex_segments[v].front()].tag;
  }

  // Straight-edge nodes keyed by sorted vertex pair: {node at 1/3 from min, node at 2/3}.
  std::map<std::array<Index, 2>, std::array<Index, 2>> edge_nodes;
  auto add_node = [&mesh](const Point& p, const std::string& tag) {
    mesh.nodes.push_back(p);
    mesh.node_tags.push_back(tag);
    return mesh.nodes.size() - 1;
  };
  auto straight_edge = [&](Index a, Index b) -> std::array<Index, 2> {
    const std::array<Index, 2> key{std::min(a, b), std::max(a, b)};
    auto it = edge_nodes.find(key);
    if (it == edge_nodes.end()) {
      std::string tag;
      if (auto s = edge_segment.find(key); s != edge_segment.end()) tag = segments[s->second].tag;
      const Point p = mesh.nodes[key[0]];
      const Point q = mesh.nodes[key[1]];
      const Index n1 = add_node((2.0 * p + q) / 3.0, tag);
      const Index n2 = add_node((p + 2.0 * q) / 3.0, tag);
      it = edge_nodes.emplace(key, std::array<Index, 2>{n1, n2}).first;
    }
    // nodes ordered from a towards b
    return a == key[0] ? it->second : std::array<Index, 2>{it->second[1], it->second[0]};
  };

  for (Index t = 0; t < linear.triangles.size(); ++t) {
    std::array<Index, 3> v = linear.triangles[t];
    if (signed_area(mesh.nodes[v[0]], mesh.nodes[v[1]], mesh.nodes[v[2]]) <= 0.0) {
      throw MeshError("triangle " + std::to_string(t) + " is not counter-clockwise");
    }
    int curved_local = -1;
    Index arc_id = kNone;
    for (int k = 0; k < 3; ++k) {
      const Index a = v[k], b = v[(k + 1) % 3];
      auto s = edge_segment.find({std::min(a, b), std::max(a, b)});
      if (s == edge_segment.end() || segment_arc[s->second] == kNone) continue;
      if (curved_local >= 0) {
        throw MeshError("triangle " + std::to_string(t) + " has more than one curved edge");
      }
      curved_local = k;
      arc_id = segment_arc[s->second];
    }
    if (curved_local > 0) {
      // rotate so that the curved edge joins local vertices 1 and 2
      std::rotate(v.begin(), v.begin() + curved_local, v.end());
    }

    std::array<Index, 10> nodes{};
    nodes[0] = v[0];
    nodes[1] = v[1];
    nodes[2] = v[2];
    const Point t1 = mesh.nodes[v[0]];
    const Point t2 = mesh.nodes[v[1]];
    const Point t3 = mesh.nodes[v[2]];

    if (curved_local >= 0) {
      const Arc& arc = mesh.arcs[arc_id];
      const double a1 = std::atan2(t1.y() - arc.center.y(), t1.x() - arc.center.x());
      const double a2 = std::atan2(t2.y() - arc.center.y(), t2.x() - arc.center.x());
      const double sweep = wrap_angle(a2 - a1);
      if (std::abs(sweep) > options.max_arc_angle) {
        throw MeshError("curved edge of triangle " + std::to_string(t) +
                        " subtends too large an arc (under-resolved)");
      }
      const double a4 = a1 + sweep / 3.0;
      const Point t4 = arc.center + arc.radius * Point(std::cos(a4), std::sin(a4));
      const Point t5 = t4 - (t1 - t2) / 3.0;
      const auto seg = edge_segment.at({std::min(v[0], v[1]), std::max(v[0], v[1])});
      nodes[3] = add_node(t4, segments[seg].tag);
      nodes[4] = add_node(t5, segments[seg].tag);
      mesh.curved.push_back(CurvedEdge{0, arc_id});
    } else {
      const auto e12 = straight_edge(v[0], v[1]);
      nodes[3] = e12[0];
      nodes[4] = e12[1];
      mesh.curved.push_back(std::nullopt);
    }
    const auto e23 = straight_edge(v[1], v[2]);
    nodes[5] = e23[0];
    nodes[6] = e23[1];
    const auto e31 = straight_edge(v[2], v[0]);
    nodes[7] = e31[0];
    nodes[8] = e31[1];

    Point interior;
    if (curved_local >= 0) {
      const Point& t4 = mesh.nodes[nodes[3]];
      const Point& t5 = mesh.nodes[nodes[4]];
      interior = (t1 + t2 + 4.0 * t3 + 3.0 * t4 + 3.0 * t5) / 12.0;
    } else {
      interior = (t1 + t2 + t3) / 3.0;
    }
    nodes[9] = add_node(interior, std::string());
    mesh.elements.push_back(nodes);
  }
  return mesh;
}

LinearMesh linear_skeleton(const CubicMesh& mesh) {
  LinearMesh lin;
  lin.vertices.assign(mesh.nodes.begin(), mesh.nodes.begin() + static_cast<std::ptrdiff_t>(mesh.vertex_count));
  lin.triangles.reserve(mesh.elements.size());
  for (const auto& e : mesh.elements) lin.triangles.push_back({e[0], e[1], e[2]});
  lin.boundary_vertex.resize(mesh.vertex_count);
  for (Index v = 0; v < mesh.vertex_count; ++v) lin.boundary_vertex[v] = !mesh.node_tags[v].empty();
  return lin;
}

DofReport dof_report(const CubicMesh& mesh) {
  DofReport r;
  r.elements = mesh.element_count();
  r.dof = mesh.dof_count();
  r.boundary_points = mesh.boundary_point_count();
  r.vertices = mesh.vertex_count;
  r.edges = edge_topology(linear_skeleton(mesh)).edges.size();
  return r;
}

}  // namespace cfem
