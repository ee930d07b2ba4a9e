#pragma once

// Element-loop assembly of the diffusion and Picard-frozen quasilinear forms,
// mass and coupling terms, and symmetric Dirichlet elimination.

#include "cfem/common.hpp"
#include "cfem/element.hpp"
#include "cfem/meshgen.hpp"
#include "cfem/problem.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <map>

namespace cfem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using ElementMatrix = Eigen::Matrix<double, kNodesPerElement, kNodesPerElement>;
using ElementVector = Eigen::Matrix<double, kNodesPerElement, 1>;

struct SparseSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::map<Index, double> constrained;
};

/// Coefficient at a quadrature point: physical point and the gradient of the
/// frozen field there (zero when no field is frozen).
using PointCoefficient = std::function<double(const Point& x, const Vec2& grad)>;

/// int_K c grad N_i . grad N_j
ElementMatrix element_stiffness(const ElementGeometry& geom, const ReferenceTabulation& tab,
                                const PointCoefficient& c, const ElementVector* frozen = nullptr);
/// int_K N_i N_j
ElementMatrix element_mass(const ElementGeometry& geom, const ReferenceTabulation& tab);
/// int_K s N_i, with s = sum_j values_j N_j
ElementVector element_load(const ElementGeometry& geom, const ReferenceTabulation& tab,
                           const ElementVector& values);
/// int_K g(x) N_i
ElementVector element_source(const ElementGeometry& geom, const ReferenceTabulation& tab,
                             const ScalarField& g);

ElementVector gather(const CubicMesh& mesh, Index element, const Vector& field);

/// kappa-weighted stiffness; rhs = int g phi.
SparseSystem assemble_diffusion(const CubicMesh& mesh, const ProblemSpec& spec,
                                const QuadratureRule& rule);

/// Stiffness weighted by the w-coefficient at the frozen iterate; rhs = int f psi.
/// Throws StrainLimitError naming the element and point when the iterate is
/// outside the admissible set.
SparseSystem assemble_quasilinear(const CubicMesh& mesh, const Vector& w_prev,
                                  const ProblemSpec& spec, const QuadratureRule& rule);

SparseMatrix assemble_mass(const CubicMesh& mesh, const QuadratureRule& rule);

/// -xi int theta_h psi
Vector assemble_coupling_rhs(const CubicMesh& mesh, const Vector& theta, double xi,
                             const QuadratureRule& rule);

/// Symmetric elimination: constrained columns move to the rhs, constrained
/// rows and columns become identity.
SparseSystem apply_dirichlet(const SparseSystem& sys, const std::map<Index, double>& values);

/// Largest beta |eps(w)| over all quadrature points.
double max_scaled_strain(const CubicMesh& mesh, const Vector& w, const ProblemSpec& spec,
                         const QuadratureRule& rule);

}  // namespace cfem
