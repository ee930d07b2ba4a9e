#pragma once

// Manufactured solutions, error norms and convergence studies.

#include "cfem/common.hpp"
#include "cfem/element.hpp"
#include "cfem/meshgen.hpp"
#include "cfem/problem.hpp"
#include "cfem/solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cfem {

/// Exact w for -div(grad w / (1 + |grad w|)) = f on the unit square with
/// Dirichlet data taken from w itself.
struct ManufacturedCase {
  std::string name;
  ScalarField exact;
  std::function<Vec2(const Point&)> gradient;
  ScalarField rhs;
  ScalarField linear_rhs;  // -laplace(w), source of the coefficient-1 initial solve
};

/// f for w = sin x sin y.
double manufactured_rhs(double x, double y);

ManufacturedCase sine_case();
/// w = a + b x + c y, f = 0.
ManufacturedCase linear_case(double a, double b, double c);

/// Problem on the unit square preset tags with the bounded coefficient
/// (alpha = beta = 1, argument |grad w|), no coupling.
ProblemSpec manufactured_problem(const ManufacturedCase& mc);

struct ErrorReport {
  double e_abs = 0.0;  // max nodal |w_h - w|
  double e_rel = 0.0;  // max nodal |w_h - w| / |w| in percent, over |w| >= threshold
  double l2 = 0.0;        // quadrature L2 norm of w_h - w
  double l2_nodal = 0.0;  // Euclidean norm of the nodal error vector
};

inline constexpr double kRelativeErrorThreshold = 1e-8;

ErrorReport error_norms(const Vector& w_h, const CubicMesh& mesh, const ScalarField& exact,
                        const QuadratureRule& rule);

struct IterationError {
  int iteration = 0;
  ErrorReport error;
};

struct ManufacturedStudy {
  std::vector<IterationError> iterations;  // 0 is the initial (coefficient 1) solve
  SolveReport report;
};

ManufacturedStudy manufactured_study(const CubicMesh& mesh, const ManufacturedCase& mc,
                                     const PicardConfig& cfg);

struct ConvergenceRow {
  double h = 0.0;
  Index elements = 0;
  Index dof = 0;
  ErrorReport error;
  int picard_iterations = 0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::optional<double> order;  // least-squares slope of log L2 against log h
  std::string note;
};

/// Structured unit-square meshes with the given divisions per side.
/// Requires at least three sizes.
ConvergenceStudy convergence_study(const ManufacturedCase& mc, const std::vector<int>& divisions,
                                   const PicardConfig& cfg);

std::string format_convergence_table(const ConvergenceStudy& study);

}  // namespace cfem
