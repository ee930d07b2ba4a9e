#pragma once

// Coefficients, sources and boundary data of the coupled problem
//
//   -div(kappa grad theta) = g
//   -div(c(grad w) grad w) + xi theta = f
//
// with Dirichlet data per boundary tag. c is either the strain-limiting
// Phi(|grad w| / sqrt 2) or the bounded factor 1 / (1 + |grad w|^a)^(1/a)
// used by the manufactured study.

#include "cfem/common.hpp"
#include "cfem/constitutive.hpp"
#include "cfem/geometry.hpp"
#include "cfem/meshgen.hpp"

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cfem {

using ScalarField = std::function<double(const Point&)>;

enum class Field { Theta, W };

enum class CoefficientLaw {
  StrainLimit,     // Phi(beta |grad w| / sqrt 2), blows up at the limit
  BoundedGradient  // 1 / (1 + (beta |grad w|)^alpha)^(1/alpha)
};

struct BoundaryCondition {
  std::string tag;
  bool natural = false;  // no data; flux/traction free
  ScalarField theta;
  ScalarField w;
};

struct ProblemSpec {
  ScalarField kappa = [](const Point&) { return 1.0; };
  double xi = 1.0;
  ScalarField source_theta;  // g; zero when empty
  ScalarField source_w;      // f; zero when empty
  ScalarField source_w_initial;  // source of the coefficient-1 initial solve; source_w when empty
  StrainLimitParams strain;
  CoefficientLaw law = CoefficientLaw::StrainLimit;
  std::vector<BoundaryCondition> boundary;

  const BoundaryCondition& condition(std::string_view tag) const;

  /// Coefficient of the w-equation for a given gradient. Throws
  /// StrainLimitError outside the admissible set.
  double coefficient(const Vec2& grad_w) const;

  /// beta * |eps(w)| for the strain-limit law, 0 for the bounded law.
  double scaled_strain(const Vec2& grad_w) const;
};

/// Value of the boundary data for one field at a point of the tagged segment.
/// Throws Error for unknown or natural tags.
double evaluate_bc(const ProblemSpec& spec, std::string_view tag, Field field, const Point& p);

/// Boundary data of the three benchmark domains (g = f = 0, kappa = 1).
ProblemSpec preset_problem(std::string_view preset_name);

/// Checks kappa > 0 at every mesh node, xi finite, strain parameters valid,
/// and that every boundary tag present in the mesh is covered.
void validate_problem(const ProblemSpec& spec, const CubicMesh& mesh);

/// Prescribed nodal values for one field.
class DirichletSet {
 public:
  /// Throws Error when the dof already carries a different value.
  void add(Index dof, double value);
  const std::map<Index, double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::map<Index, double> values_;
};

DirichletSet dirichlet_values(const CubicMesh& mesh, const ProblemSpec& spec, Field field);

}  // namespace cfem
