#include "cfem/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <sstream>

namespace cfem {

void PicardConfig::validate() const {
  if (!(tol > 0.0)) throw ConfigError("solver.tol must be positive");
  if (max_iters < 1) throw ConfigError("solver.max_iters must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("solver.damping must lie in (0, 1]");
  if (!(min_step > 0.0)) throw ConfigError("minimum damping step must be positive");
}

Vector solve_linear(const SparseSystem& sys, const LinearOptions& options, LinearSolveInfo* info) {
  const auto& a = sys.matrix;
  if (a.rows() != a.cols() || a.rows() != sys.rhs.size()) throw SolverError("system size mismatch");
  Vector x;
  LinearSolveInfo local;
  if (options.kind == LinearSolverKind::Direct) {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
    if (ldlt.info() != Eigen::Success) throw SolverError("sparse factorization failed");
    if (a.rows() > 0 && !(ldlt.vectorD().minCoeff() > 0.0)) {
      throw SolverError("matrix is not positive definite");
    }
    x = ldlt.solve(sys.rhs);
  } else {
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(options.cg_tol);
    cg.setMaxIterations(options.cg_max_iters);
    cg.compute(a);
    x = cg.solve(sys.rhs);
    local.iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "conjugate gradient did not converge after " << cg.iterations()
          << " iterations (estimated error " << cg.error() << ")";
      throw SolverError(msg.str());
    }
  }
  const double bnorm = sys.rhs.norm();
  const double rnorm = (a * x - sys.rhs).norm();
  local.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (!std::isfinite(local.residual)) throw SolverError("linear solve produced non-finite values");
  if (info) *info = local;
  return x;
}

Vector solve_temperature(const CubicMesh& mesh, const ProblemSpec& spec, const QuadratureRule& rule,
                         const LinearOptions& options, LinearSolveInfo* info) {
  auto sys = assemble_diffusion(mesh, spec, rule);
  sys = apply_dirichlet(sys, dirichlet_values(mesh, spec, Field::Theta).values());
  return solve_linear(sys, options, info);
}

namespace {

// One linear solve with the coefficient frozen at w_prev; w_prev = nullptr
// freezes the coefficient at its zero-gradient value.
Vector frozen_solve(const CubicMesh& mesh, const Vector* w_prev, const Vector& coupling,
                    const std::map<Index, double>& bc, const ProblemSpec& spec,
                    const QuadratureRule& rule, const LinearOptions& options, LinearSolveInfo* info) {
  SparseSystem sys;
  if (w_prev) {
    sys = assemble_quasilinear(mesh, *w_prev, spec, rule);
  } else {
    ProblemSpec initial = spec;
    initial.law = CoefficientLaw::BoundedGradient;
    initial.strain.beta = 0.0;
    if (spec.source_w_initial) initial.source_w = spec.source_w_initial;
    sys = assemble_quasilinear(mesh, Vector::Zero(static_cast<Eigen::Index>(mesh.dof_count())),
                               initial, rule);
  }
  sys.rhs += coupling;
  sys = apply_dirichlet(sys, bc);
  return solve_linear(sys, options, info);
}

bool admissible(const CubicMesh& mesh, const Vector& w, const ProblemSpec& spec,
                const QuadratureRule& rule) {
  if (spec.law != CoefficientLaw::StrainLimit) return true;
  return max_scaled_strain(mesh, w, spec, rule) < 1.0;
}

}  // namespace

SolveReport picard_solve(const CubicMesh& mesh, const Vector& theta, const ProblemSpec& spec,
                         const PicardConfig& cfg, const PicardObserver& observer) {
  cfg.validate();
  spec.strain.validate();
  const auto& rule = quadrature_rule(cfg.quadrature_degree);
  const Vector coupling = assemble_coupling_rhs(mesh, theta, spec.xi, rule);
  const auto bc = dirichlet_values(mesh, spec, Field::W).values();

  SolveReport report;
  report.theta = theta;
  report.w = frozen_solve(mesh, nullptr, coupling, bc, spec, rule, cfg.linear, &report.initial_linear);
  report.w_initial = report.w;
  if (!admissible(mesh, report.w, spec, rule)) {
    const double s = max_scaled_strain(mesh, report.w, spec, rule);
    std::ostringstream msg;
    msg << "initial iterate violates the strain limit (max beta*|eps| = " << s << ")";
    throw StrainLimitError(msg.str(), s);
  }
  if (observer) observer(0, report.w);

  for (int n = 1; n <= cfg.max_iters; ++n) {
    PicardStep step;
    step.iteration = n;
    const Vector candidate =
        frozen_solve(mesh, &report.w, coupling, bc, spec, rule, cfg.linear, &step.linear);
    Vector next = candidate;
    double lambda = 1.0;
    while (!admissible(mesh, next, spec, rule)) {
      lambda *= cfg.damping;
      ++step.damping_events;
      if (lambda < cfg.min_step || cfg.damping == 1.0) {
        const double s = max_scaled_strain(mesh, candidate, spec, rule);
        std::ostringstream msg;
        msg << "Picard iterate " << n << " cannot be damped into the admissible set";
        throw StrainLimitError(msg.str(), s);
      }
      next = report.w + lambda * (candidate - report.w);
    }
    step.step = lambda;
    const Vector diff = next - report.w;
    step.max_abs = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
    const double nn = next.norm();
    step.relative = nn > 0.0 ? diff.norm() / nn : diff.norm();
    report.w = next;
    report.damping_events += step.damping_events;
    report.history.push_back(step);
    report.iterations_used = n;
    if (observer) observer(n, report.w);
    if (step.metric(cfg.metric) < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  std::ostringstream msg;
  if (report.converged) {
    msg << "converged in " << report.iterations_used << " iterations";
  } else {
    msg << "not converged after " << report.iterations_used << " iterations (last change "
        << report.history.back().metric(cfg.metric) << ")";
  }
  report.message = msg.str();
  return report;
}

SolveReport solve_coupled(const CubicMesh& mesh, const ProblemSpec& spec, const PicardConfig& cfg,
                          const PicardObserver& observer) {
  cfg.validate();
  validate_problem(spec, mesh);
  LinearSolveInfo theta_info;
  const Vector theta =
      solve_temperature(mesh, spec, quadrature_rule(cfg.quadrature_degree), cfg.linear, &theta_info);
  auto report = picard_solve(mesh, theta, spec, cfg, observer);
  report.theta_linear = theta_info;
  return report;
}

}  // namespace cfem
