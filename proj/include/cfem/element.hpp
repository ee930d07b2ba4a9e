#pragma once

// Cubic (10-node) reference triangle on {xi >= 0, eta >= 0, xi + eta <= 1},
// the point transformation for triangles with one curved edge, and
// symmetric quadrature on the reference triangle.
//
// Reference nodes: 1 = (1,0), 2 = (0,1), 3 = (0,0); 4,5 on edge 1-2 at
// (2/3,1/3), (1/3,2/3); 6,7 on edge 2-3 at (0,2/3), (0,1/3); 8,9 on edge 3-1
// at (1/3,0), (2/3,0); 10 = (1/3,1/3).

#include "cfem/common.hpp"
#include "cfem/meshgen.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace cfem {

inline constexpr int kNodesPerElement = 10;

using ShapeValues = std::array<double, kNodesPerElement>;
using ShapeGradients = std::array<Vec2, kNodesPerElement>;

ShapeValues shape_values(double xi, double eta);
ShapeGradients shape_gradients(double xi, double eta);
const std::array<Point, kNodesPerElement>& reference_nodes();

struct QuadraturePoint {
  double xi;
  double eta;
  double weight;
};

struct QuadratureRule {
  int degree = 0;
  std::vector<QuadraturePoint> points;
};

/// Smallest tabulated symmetric rule exact for polynomials of degree >= min_degree.
/// Throws Error if no such rule is tabulated.
const QuadratureRule& quadrature_rule(int min_degree = 8);
int max_quadrature_degree();

/// Physical nodes of one element in reference ordering.
struct ElementGeometry {
  std::array<Point, kNodesPerElement> nodes;
  bool is_curved = false;

  /// Coefficient of the xi*eta term, (9/4)[(t4 + t5) - (t1 + t2)].
  Vec2 bilinear_coefficient() const;
  double diameter() const;
};

ElementGeometry element_geometry(const CubicMesh& mesh, Index element);

/// t(xi, eta) = t3 + (t1 - t3) xi + (t2 - t3) eta + c xi eta.
Point map_point(const ElementGeometry& geom, double xi, double eta);

struct Jacobian {
  Eigen::Matrix2d matrix;  // [dx/dxi dx/deta; dy/dxi dy/deta]
  double det = 0.0;
};

/// Throws SingularJacobianError when det J <= 1e-14 * diameter^2.
Jacobian jacobian(const ElementGeometry& geom, double xi, double eta);

/// grad_x N_i = J^{-T} grad_xi N_i.
ShapeGradients physical_gradients(const ElementGeometry& geom, double xi, double eta);
ShapeGradients physical_gradients(const Jacobian& jac, const ShapeGradients& reference);

/// Shape data of one rule, evaluated once and reused across elements.
struct ReferenceTabulation {
  const QuadratureRule* rule = nullptr;
  std::vector<ShapeValues> values;
  std::vector<ShapeGradients> gradients;
};

ReferenceTabulation tabulate(const QuadratureRule& rule);

}  // namespace cfem
