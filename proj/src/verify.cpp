#include "cfem/verify.hpp"

#include "cfem/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cfem {

double manufactured_rhs(double x, double y) {
  const double sx = std::sin(x), cx = std::cos(x), sy = std::sin(y), cy = std::cos(y);
  const double gx = cx * sy, gy = sx * cy;
  const double q = std::hypot(gx, gy);
  double f = 2.0 * sx * sy / (1.0 + q);
  if (q > 0.0) {
    // g^T H g with H the Hessian of w
    const double hxx = -sx * sy, hxy = cx * cy, hyy = -sx * sy;
    const double ghg = gx * gx * hxx + 2.0 * gx * gy * hxy + gy * gy * hyy;
    f += ghg / (q * (1.0 + q) * (1.0 + q));
  }
  return f;
}

ManufacturedCase sine_case() {
  return {"sin(x)sin(y)",
          [](const Point& p) { return std::sin(p.x()) * std::sin(p.y()); },
          [](const Point& p) {
            return Vec2(std::cos(p.x()) * std::sin(p.y()), std::sin(p.x()) * std::cos(p.y()));
          },
          [](const Point& p) { return manufactured_rhs(p.x(), p.y()); },
          [](const Point& p) { return 2.0 * std::sin(p.x()) * std::sin(p.y()); }};
}

ManufacturedCase linear_case(double a, double b, double c) {
  return {"linear",
          [=](const Point& p) { return a + b * p.x() + c * p.y(); },
          [=](const Point&) { return Vec2(b, c); },
          [](const Point&) { return 0.0; },
          [](const Point&) { return 0.0; }};
}

ProblemSpec manufactured_problem(const ManufacturedCase& mc) {
  ProblemSpec spec;
  spec.xi = 0.0;
  spec.law = CoefficientLaw::BoundedGradient;
  spec.strain = {1.0, 1.0};
  spec.source_w = mc.rhs;
  spec.source_w_initial = mc.linear_rhs;
  const ScalarField zero = [](const Point&) { return 0.0; };
  for (const char* tag : {"D1", "D2", "D3", "D4"}) spec.boundary.push_back({tag, false, zero, mc.exact});
  return spec;
}

ErrorReport error_norms(const Vector& w_h, const CubicMesh& mesh, const ScalarField& exact,
                        const QuadratureRule& rule) {
  if (static_cast<Index>(w_h.size()) != mesh.dof_count()) throw Error("field size does not match the mesh");
  ErrorReport r;
  double nodal_sq = 0.0;
  for (Index i = 0; i < mesh.dof_count(); ++i) {
    const double ex = exact(mesh.nodes[i]);
    const double err = std::abs(w_h[static_cast<Eigen::Index>(i)] - ex);
    r.e_abs = std::max(r.e_abs, err);
    nodal_sq += err * err;
    if (std::abs(ex) >= kRelativeErrorThreshold) r.e_rel = std::max(r.e_rel, 100.0 * err / std::abs(ex));
  }
  const auto tab = tabulate(rule);
  double sum = 0.0;
  for (Index e = 0; e < mesh.element_count(); ++e) {
    const auto geom = element_geometry(mesh, e);
    const ElementVector v = gather(mesh, e, w_h);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& qp = rule.points[q];
      const ElementVector n = Eigen::Map<const ElementVector>(tab.values[q].data());
      const double d = n.dot(v) - exact(map_point(geom, qp.xi, qp.eta));
      sum += d * d * qp.weight * jacobian(geom, qp.xi, qp.eta).det;
    }
  }
  r.l2 = std::sqrt(sum);
  r.l2_nodal = std::sqrt(nodal_sq);
  return r;
}

ManufacturedStudy manufactured_study(const CubicMesh& mesh, const ManufacturedCase& mc,
                                     const PicardConfig& cfg) {
  ManufacturedStudy study;
  const auto spec = manufactured_problem(mc);
  const auto& rule = quadrature_rule(cfg.quadrature_degree);
  const Vector theta = Vector::Zero(static_cast<Eigen::Index>(mesh.dof_count()));
  study.report = picard_solve(mesh, theta, spec, cfg, [&](int n, const Vector& w) {
    study.iterations.push_back({n, error_norms(w, mesh, mc.exact, rule)});
  });
  return study;
}

namespace {

CubicMesh structured_cubic(int divisions) {
  return enrich_to_cubic(structured_square_mesh(divisions), make_preset("unit_square"));
}

}  // namespace

ConvergenceStudy convergence_study(const ManufacturedCase& mc, const std::vector<int>& divisions,
                                   const PicardConfig& cfg) {
  if (divisions.size() < 3) throw Error("convergence study needs at least three mesh sizes");
  ConvergenceStudy study;
  for (int n : divisions) {
    const auto mesh = structured_cubic(n);
    const auto ms = manufactured_study(mesh, mc, cfg);
    if (!ms.report.converged) {
      study.note = "Picard iteration did not converge on the " + std::to_string(n) + "x" +
                   std::to_string(n) + " mesh";
      return study;
    }
    ConvergenceRow row;
    row.h = 1.0 / n;
    row.elements = mesh.element_count();
    row.dof = mesh.dof_count();
    row.error = ms.iterations.back().error;
    row.picard_iterations = ms.report.iterations_used;
    study.rows.push_back(row);
  }
  // Errors at round-off level carry no rate information.
  for (const auto& r : study.rows) {
    if (r.error.l2 < 1e-12) {
      study.note = "L2 error at round-off level; order undefined";
      return study;
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(study.rows.size());
  for (const auto& r : study.rows) {
    const double x = std::log(r.h), y = std::log(r.error.l2);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  study.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return study;
}

std::string format_convergence_table(const ConvergenceStudy& study) {
  std::ostringstream out;
  out << "h,elements,dof,E_a,E_r_percent,L2,L2_nodal,picard_iterations\n";
  char buf[256];
  for (const auto& r : study.rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%zu,%zu,%.6e,%.6e,%.6e,%.6e,%d\n", r.h, r.elements,
                  r.dof, r.error.e_abs, r.error.e_rel, r.error.l2, r.error.l2_nodal,
                  r.picard_iterations);
    out << buf;
  }
  if (study.order) {
    std::snprintf(buf, sizeof buf, "# fitted order %.4f\n", *study.order);
    out << buf;
  } else {
    out << "# fitted order undefined";
    if (!study.note.empty()) out << " (" << study.note << ")";
    out << "\n";
  }
  return out.str();
}

}  // namespace cfem
