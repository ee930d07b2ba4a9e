#include "cfem/element.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cfem {

ShapeValues shape_values(double xi, double eta) {
  const double x = xi, y = eta;
  const double x2 = x * x, y2 = y * y;
  const double x3 = x2 * x, y3 = y2 * y;
  return {
      4.5 * x3 - 4.5 * x2 + x,
      4.5 * y3 - 4.5 * y2 + y,
      -4.5 * x3 - 4.5 * y3 - 13.5 * x2 * y - 13.5 * x * y2 + 9.0 * x2 + 9.0 * y2 + 18.0 * x * y -
          5.5 * x - 5.5 * y + 1.0,
      13.5 * x2 * y - 4.5 * x * y,
      13.5 * x * y2 - 4.5 * x * y,
      -13.5 * y3 - 13.5 * x * y2 + 18.0 * y2 + 4.5 * x * y - 4.5 * y,
      13.5 * y3 + 27.0 * x * y2 - 22.5 * y2 + 13.5 * x2 * y - 22.5 * x * y + 9.0 * y,
      13.5 * x3 + 27.0 * x2 * y + 13.5 * x * y2 - 22.5 * x2 - 22.5 * x * y + 9.0 * x,
      -13.5 * x3 - 13.5 * x2 * y + 18.0 * x2 + 4.5 * x * y - 4.5 * x,
      -27.0 * x * y2 - 27.0 * x2 * y + 27.0 * x * y,
  };
}

ShapeGradients shape_gradients(double xi, double eta) {
  const double x = xi, y = eta;
  const double x2 = x * x, y2 = y * y;
  return {
      Vec2(13.5 * x2 - 9.0 * x + 1.0, 0.0),
      Vec2(0.0, 13.5 * y2 - 9.0 * y + 1.0),
      Vec2(-13.5 * x2 - 27.0 * x * y - 13.5 * y2 + 18.0 * x + 18.0 * y - 5.5,
           -13.5 * y2 - 13.5 * x2 - 27.0 * x * y + 18.0 * y + 18.0 * x - 5.5),
      Vec2(27.0 * x * y - 4.5 * y, 13.5 * x2 - 4.5 * x),
      Vec2(13.5 * y2 - 4.5 * y, 27.0 * x * y - 4.5 * x),
      Vec2(-13.5 * y2 + 4.5 * y, -40.5 * y2 - 27.0 * x * y + 36.0 * y + 4.5 * x - 4.5),
      Vec2(27.0 * y2 + 27.0 * x * y - 22.5 * y,
           40.5 * y2 + 54.0 * x * y - 45.0 * y + 13.5 * x2 - 22.5 * x + 9.0),
      Vec2(40.5 * x2 + 54.0 * x * y + 13.5 * y2 - 45.0 * x - 22.5 * y + 9.0,
           27.0 * x2 + 27.0 * x * y - 22.5 * x),
      Vec2(-40.5 * x2 - 27.0 * x * y + 36.0 * x + 4.5 * y - 4.5, -13.5 * x2 + 4.5 * x),
      Vec2(-27.0 * y2 - 54.0 * x * y + 27.0 * y, -54.0 * x * y - 27.0 * x2 + 27.0 * x),
  };
}

const std::array<Point, kNodesPerElement>& reference_nodes() {
  static const std::array<Point, kNodesPerElement> nodes{
      Point(1.0, 0.0),
      Point(0.0, 1.0),
      Point(0.0, 0.0),
      Point(2.0 / 3.0, 1.0 / 3.0),
      Point(1.0 / 3.0, 2.0 / 3.0),
      Point(0.0, 2.0 / 3.0),
      Point(0.0, 1.0 / 3.0),
      Point(1.0 / 3.0, 0.0),
      Point(2.0 / 3.0, 0.0),
      Point(1.0 / 3.0, 1.0 / 3.0),
  };
  return nodes;
}

Vec2 ElementGeometry::bilinear_coefficient() const {
  return 2.25 * ((nodes[3] + nodes[4]) - (nodes[0] + nodes[1]));
}

double ElementGeometry::diameter() const {
  return std::max({(nodes[0] - nodes[1]).norm(), (nodes[1] - nodes[2]).norm(),
                   (nodes[2] - nodes[0]).norm()});
}

ElementGeometry element_geometry(const CubicMesh& mesh, Index element) {
  ElementGeometry g;
  const auto& ids = mesh.elements[element];
  for (int i = 0; i < kNodesPerElement; ++i) g.nodes[i] = mesh.nodes[ids[i]];
  g.is_curved = element < mesh.curved.size() && mesh.curved[element].has_value();
  return g;
}

Point map_point(const ElementGeometry& g, double xi, double eta) {
  const Point& t1 = g.nodes[0];
  const Point& t2 = g.nodes[1];
  const Point& t3 = g.nodes[2];
  return t3 + (t1 - t3) * xi + (t2 - t3) * eta + g.bilinear_coefficient() * (xi * eta);
}

Jacobian jacobian(const ElementGeometry& g, double xi, double eta) {
  const Vec2 c = g.bilinear_coefficient();
  Jacobian jac;
  jac.matrix.col(0) = (g.nodes[0] - g.nodes[2]) + c * eta;
  jac.matrix.col(1) = (g.nodes[1] - g.nodes[2]) + c * xi;
  jac.det = jac.matrix(0, 0) * jac.matrix(1, 1) - jac.matrix(0, 1) * jac.matrix(1, 0);
  const double diam = g.diameter();
  if (!(jac.det > 1e-14 * diam * diam)) {
    std::ostringstream msg;
    msg << "non-positive Jacobian determinant " << jac.det << " at (" << xi << ", " << eta << ")";
    throw SingularJacobianError(msg.str());
  }
  return jac;
}

ShapeGradients physical_gradients(const Jacobian& jac, const ShapeGradients& reference) {
  const auto& m = jac.matrix;
  // J^{-T} = (1/det) [ m11 -m10; -m01 m00 ]
  const double inv = 1.0 / jac.det;
  ShapeGradients out;
  for (int i = 0; i < kNodesPerElement; ++i) {
    const Vec2& g = reference[i];
    out[i] = Vec2(inv * (m(1, 1) * g.x() - m(1, 0) * g.y()), inv * (-m(0, 1) * g.x() + m(0, 0) * g.y()));
  }
  return out;
}

ShapeGradients physical_gradients(const ElementGeometry& g, double xi, double eta) {
  return physical_gradients(jacobian(g, xi, eta), shape_gradients(xi, eta));
}

ReferenceTabulation tabulate(const QuadratureRule& rule) {
  ReferenceTabulation tab;
  tab.rule = &rule;
  tab.values.reserve(rule.points.size());
  tab.gradients.reserve(rule.points.size());
  for (const auto& q : rule.points) {
    tab.values.push_back(shape_values(q.xi, q.eta));
    tab.gradients.push_back(shape_gradients(q.xi, q.eta));
  }
  return tab;
}

}  // namespace cfem
