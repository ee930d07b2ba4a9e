#include "cfem/assembly.hpp"

#include <sstream>
#include <vector>

namespace cfem {

namespace {

using Triplet = Eigen::Triplet<double>;

SparseMatrix build(Index n, std::vector<Triplet>& triplets) {
  SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

void scatter(const std::array<Index, 10>& ids, const ElementMatrix& ke, std::vector<Triplet>& out) {
  for (int i = 0; i < kNodesPerElement; ++i) {
    for (int j = 0; j < kNodesPerElement; ++j) {
      out.emplace_back(static_cast<int>(ids[i]), static_cast<int>(ids[j]), ke(i, j));
    }
  }
}

void scatter(const std::array<Index, 10>& ids, const ElementVector& fe, Vector& out) {
  for (int i = 0; i < kNodesPerElement; ++i) out[static_cast<Eigen::Index>(ids[i])] += fe[i];
}

// Stiffness assembly shared by both forms; coefficient_at sees the element id.
template <class Coefficient>
SparseMatrix assemble_stiffness(const CubicMesh& mesh, const QuadratureRule& rule,
                                const Vector* frozen, Coefficient&& coefficient_at) {
  const auto tab = tabulate(rule);
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.element_count() * 100);
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const auto geom = element_geometry(mesh, e);
    ElementVector values = ElementVector::Zero();
    if (frozen) values = gather(mesh, e, *frozen);
    const PointCoefficient c = [&](const Point& x, const Vec2& g) { return coefficient_at(e, x, g); };
    scatter(mesh.elements[e], element_stiffness(geom, tab, c, frozen ? &values : nullptr), triplets);
  }
  return build(mesh.dof_count(), triplets);
}

}  // namespace

ElementMatrix element_stiffness(const ElementGeometry& geom, const ReferenceTabulation& tab,
                                const PointCoefficient& c, const ElementVector* frozen) {
  ElementMatrix ke = ElementMatrix::Zero();
  const auto& pts = tab.rule->points;
  Eigen::Matrix<double, 2, kNodesPerElement> grads;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const auto jac = jacobian(geom, pts[q].xi, pts[q].eta);
    const auto g = physical_gradients(jac, tab.gradients[q]);
    for (int i = 0; i < kNodesPerElement; ++i) grads.col(i) = g[i];
    Vec2 grad_frozen = Vec2::Zero();
    if (frozen) grad_frozen = grads * (*frozen);
    const Point x = map_point(geom, pts[q].xi, pts[q].eta);
    const double scale = c(x, grad_frozen) * pts[q].weight * jac.det;
    ke.noalias() += scale * grads.transpose() * grads;
  }
  return ke;
}

ElementMatrix element_mass(const ElementGeometry& geom, const ReferenceTabulation& tab) {
  ElementMatrix me = ElementMatrix::Zero();
  const auto& pts = tab.rule->points;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const double scale = pts[q].weight * jacobian(geom, pts[q].xi, pts[q].eta).det;
    const ElementVector n = Eigen::Map<const ElementVector>(tab.values[q].data());
    me.noalias() += scale * n * n.transpose();
  }
  return me;
}

ElementVector element_load(const ElementGeometry& geom, const ReferenceTabulation& tab,
                           const ElementVector& values) {
  ElementVector fe = ElementVector::Zero();
  const auto& pts = tab.rule->points;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const double scale = pts[q].weight * jacobian(geom, pts[q].xi, pts[q].eta).det;
    const ElementVector n = Eigen::Map<const ElementVector>(tab.values[q].data());
    fe.noalias() += (scale * n.dot(values)) * n;
  }
  return fe;
}

ElementVector element_source(const ElementGeometry& geom, const ReferenceTabulation& tab,
                             const ScalarField& g) {
  ElementVector fe = ElementVector::Zero();
  const auto& pts = tab.rule->points;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    const double scale = pts[q].weight * jacobian(geom, pts[q].xi, pts[q].eta).det;
    const ElementVector n = Eigen::Map<const ElementVector>(tab.values[q].data());
    fe.noalias() += (scale * g(map_point(geom, pts[q].xi, pts[q].eta))) * n;
  }
  return fe;
}

ElementVector gather(const CubicMesh& mesh, Index element, const Vector& field) {
  ElementVector v;
  const auto& ids = mesh.elements[element];
  for (int i = 0; i < kNodesPerElement; ++i) v[i] = field[static_cast<Eigen::Index>(ids[i])];
  return v;
}

namespace {

Vector assemble_source(const CubicMesh& mesh, const ScalarField& g, const QuadratureRule& rule) {
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(mesh.dof_count()));
  if (!g) return rhs;
  const auto tab = tabulate(rule);
  for (Index e = 0; e < mesh.element_count(); ++e) {
    scatter(mesh.elements[e], element_source(element_geometry(mesh, e), tab, g), rhs);
  }
  return rhs;
}

}  // namespace

SparseSystem assemble_diffusion(const CubicMesh& mesh, const ProblemSpec& spec,
                                const QuadratureRule& rule) {
  SparseSystem sys;
  sys.matrix = assemble_stiffness(mesh, rule, nullptr,
                                  [&](Index, const Point& x, const Vec2&) { return spec.kappa(x); });
  sys.rhs = assemble_source(mesh, spec.source_theta, rule);
  return sys;
}

SparseSystem assemble_quasilinear(const CubicMesh& mesh, const Vector& w_prev,
                                  const ProblemSpec& spec, const QuadratureRule& rule) {
  if (static_cast<Index>(w_prev.size()) != mesh.dof_count()) {
    throw Error("frozen field size does not match the mesh");
  }
  SparseSystem sys;
  sys.matrix = assemble_stiffness(mesh, rule, &w_prev, [&](Index e, const Point& x, const Vec2& g) {
    try {
      return spec.coefficient(g);
    } catch (const StrainLimitError& err) {
      std::ostringstream msg;
      msg << err.what() << " in element " << e << " at (" << x.x() << ", " << x.y() << ")";
      throw StrainLimitError(msg.str(), err.scaled_strain());
    }
  });
  sys.rhs = assemble_source(mesh, spec.source_w, rule);
  return sys;
}

SparseMatrix assemble_mass(const CubicMesh& mesh, const QuadratureRule& rule) {
  const auto tab = tabulate(rule);
  std::vector<Triplet> triplets;
  triplets.reserve(mesh.element_count() * 100);
  for (Index e = 0; e < mesh.element_count(); ++e) {
    scatter(mesh.elements[e], element_mass(element_geometry(mesh, e), tab), triplets);
  }
  return build(mesh.dof_count(), triplets);
}

Vector assemble_coupling_rhs(const CubicMesh& mesh, const Vector& theta, double xi,
                             const QuadratureRule& rule) {
  if (static_cast<Index>(theta.size()) != mesh.dof_count()) {
    throw Error("temperature field size does not match the mesh");
  }
  const auto tab = tabulate(rule);
  Vector rhs = Vector::Zero(theta.size());
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const ElementVector fe = element_load(element_geometry(mesh, e), tab, gather(mesh, e, theta));
    scatter(mesh.elements[e], ElementVector(-xi * fe), rhs);
  }
  return rhs;
}

SparseSystem apply_dirichlet(const SparseSystem& sys, const std::map<Index, double>& values) {
  const auto n = sys.matrix.rows();
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  Vector prescribed = Vector::Zero(n);
  for (const auto& [dof, v] : values) {
    if (static_cast<Eigen::Index>(dof) >= n) {
      throw Error("constrained dof " + std::to_string(dof) + " outside system of size " +
                  std::to_string(n));
    }
    fixed[dof] = 1;
    prescribed[static_cast<Eigen::Index>(dof)] = v;
  }
  for (const auto& [dof, v] : sys.constrained) {
    auto it = values.find(dof);
    if (it != values.end() && it->second != v) {
      throw Error("conflicting Dirichlet values on dof " + std::to_string(dof));
    }
  }

  SparseSystem out;
  out.rhs = sys.rhs;
  out.constrained = sys.constrained;
  out.constrained.insert(values.begin(), values.end());
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(sys.matrix.nonZeros()));
  for (Eigen::Index col = 0; col < sys.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(sys.matrix, col); it; ++it) {
      const auto row = it.row();
      if (fixed[row]) continue;
      if (fixed[col]) {
        out.rhs[row] -= it.value() * prescribed[col];
      } else {
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), it.value());
      }
    }
  }
  for (const auto& [dof, v] : values) {
    triplets.emplace_back(static_cast<int>(dof), static_cast<int>(dof), 1.0);
    out.rhs[static_cast<Eigen::Index>(dof)] = v;
  }
  out.matrix = build(static_cast<Index>(n), triplets);
  return out;
}

double max_scaled_strain(const CubicMesh& mesh, const Vector& w, const ProblemSpec& spec,
                         const QuadratureRule& rule) {
  const auto tab = tabulate(rule);
  double worst = 0.0;
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const auto geom = element_geometry(mesh, e);
    const ElementVector values = gather(mesh, e, w);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto jac = jacobian(geom, rule.points[q].xi, rule.points[q].eta);
      const auto g = physical_gradients(jac, tab.gradients[q]);
      Vec2 grad = Vec2::Zero();
      for (int i = 0; i < kNodesPerElement; ++i) grad += values[i] * g[i];
      worst = std::max(worst, spec.scaled_strain(grad));
    }
  }
  return worst;
}

}  // namespace cfem
