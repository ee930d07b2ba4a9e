#pragma once

// Sparse linear solves and the Picard iteration for the w-equation.

#include "cfem/assembly.hpp"
#include "cfem/common.hpp"
#include "cfem/meshgen.hpp"
#include "cfem/problem.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cfem {

enum class LinearSolverKind { Direct, ConjugateGradient };

struct LinearOptions {
  LinearSolverKind kind = LinearSolverKind::Direct;
  double cg_tol = 1e-13;  // relative residual
  int cg_max_iters = 20000;
};

struct LinearSolveInfo {
  int iterations = 0;  // 0 for the direct factorization
  double residual = 0.0;  // |Ax - b| / |b|
};

/// Throws SolverError on factorization failure, a non positive definite
/// matrix or CG non-convergence.
Vector solve_linear(const SparseSystem& sys, const LinearOptions& options = {},
                    LinearSolveInfo* info = nullptr);

enum class PicardMetric { MaxAbs, Relative };

struct PicardConfig {
  double tol = 1e-8;
  int max_iters = 50;
  PicardMetric metric = PicardMetric::MaxAbs;
  double damping = 0.5;  // step factor applied on a strain-limit violation
  double min_step = 1e-6;
  int quadrature_degree = 8;
  LinearOptions linear;

  /// Throws ConfigError for tol <= 0, max_iters < 1 or damping outside (0, 1].
  void validate() const;
};

struct PicardStep {
  int iteration = 0;
  double max_abs = 0.0;   // max |w^n - w^(n-1)|
  double relative = 0.0;  // |w^n - w^(n-1)| / |w^n|
  double step = 1.0;      // damping factor lambda actually used
  int damping_events = 0;
  LinearSolveInfo linear;

  double metric(PicardMetric m) const { return m == PicardMetric::MaxAbs ? max_abs : relative; }
};

struct SolveReport {
  Vector theta;
  Vector w;
  Vector w_initial;  // the Phi = 1 solve
  LinearSolveInfo theta_linear;
  LinearSolveInfo initial_linear;
  std::vector<PicardStep> history;
  bool converged = false;
  int iterations_used = 0;
  int damping_events = 0;
  std::string message;
};

/// Called with (n, w^n) for n = 0 (initial solve) and every accepted iterate.
using PicardObserver = std::function<void(int, const Vector&)>;

Vector solve_temperature(const CubicMesh& mesh, const ProblemSpec& spec, const QuadratureRule& rule,
                         const LinearOptions& options = {}, LinearSolveInfo* info = nullptr);

/// Throws StrainLimitError when the initial solve or a damped step cannot be
/// made admissible; returns converged = false when max_iters is reached.
SolveReport picard_solve(const CubicMesh& mesh, const Vector& theta, const ProblemSpec& spec,
                         const PicardConfig& cfg, const PicardObserver& observer = {});

SolveReport solve_coupled(const CubicMesh& mesh, const ProblemSpec& spec, const PicardConfig& cfg,
                          const PicardObserver& observer = {});

}  // namespace cfem
