#include "cfem/meshgen.hpp"

#include <algorithm>
#include <map>

namespace cfem {

namespace {

double orient(const Point& a, const Point& b, const Point& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// Positive when d lies inside the circumcircle of the counter-clockwise triangle abc.
double incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

struct WorkTriangle {
  std::array<Index, 3> v;
  bool alive = true;
};

}  // namespace

std::vector<Triangle> delaunay_triangulate(const std::vector<Point>& points) {
  const Index n = points.size();
  if (n < 3) return {};

  Point lo = points.front();
  Point hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Point center = 0.5 * (lo + hi);
  const double span = std::max((hi - lo).maxCoeff(), 1e-12);

  std::vector<Point> pts = points;
  pts.emplace_back(center + Point(-20.0 * span, -10.0 * span));
  pts.emplace_back(center + Point(20.0 * span, -10.0 * span));
  pts.emplace_back(center + Point(0.0, 20.0 * span));

  std::vector<WorkTriangle> tris;
  tris.reserve(4 * n);
  tris.push_back({{n, n + 1, n + 2}});

  std::vector<Index> bad;
  std::vector<std::array<Index, 2>> cavity;
  for (Index ip = 0; ip < n; ++ip) {
    const Point& p = pts[ip];
    bad.clear();
    for (Index t = 0; t < tris.size(); ++t) {
      if (!tris[t].alive) continue;
      const auto& v = tris[t].v;
      if (incircle(pts[v[0]], pts[v[1]], pts[v[2]], p) > 0.0) bad.push_back(t);
    }

    // Cavity boundary: edges of bad triangles that are not shared by two bad ones.
    std::map<std::array<Index, 2>, int> edge_count;
    for (Index t : bad) {
      const auto& v = tris[t].v;
      for (int k = 0; k < 3; ++k) {
        Index a = v[k], b = v[(k + 1) % 3];
        edge_count[{std::min(a, b), std::max(a, b)}] += 1;
      }
    }
    cavity.clear();
    for (Index t : bad) {
      const auto& v = tris[t].v;
      for (int k = 0; k < 3; ++k) {
        Index a = v[k], b = v[(k + 1) % 3];
        if (edge_count[{std::min(a, b), std::max(a, b)}] == 1) cavity.push_back({a, b});
      }
      tris[t].alive = false;
    }
    for (const auto& e : cavity) {
      if (orient(pts[e[0]], pts[e[1]], p) <= 0.0) continue;  // degenerate sliver
      tris.push_back({{e[0], e[1], ip}});
    }

    if (tris.size() > 8 * n + 64) {
      std::erase_if(tris, [](const WorkTriangle& t) { return !t.alive; });
    }
  }

  std::vector<Triangle> out;
  out.reserve(2 * n);
  for (const auto& t : tris) {
    if (!t.alive) continue;
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    out.push_back({t.v[0], t.v[1], t.v[2]});
  }
  return out;
}

}  // namespace cfem
