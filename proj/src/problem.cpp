#include "cfem/problem.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace cfem {

namespace {

ScalarField constant(double c) {
  return [c](const Point&) { return c; };
}

ScalarField bubble() {
  return [](const Point& p) { return p.x() * (1.0 - p.x()); };
}

ScalarField ramp() {
  return [](const Point& p) { return 1.0 - p.x(); };
}

}  // namespace

const BoundaryCondition& ProblemSpec::condition(std::string_view tag) const {
  for (const auto& bc : boundary) {
    if (bc.tag == tag) return bc;
  }
  throw Error("no boundary condition for tag '" + std::string(tag) + "'");
}

double ProblemSpec::coefficient(const Vec2& grad_w) const {
  if (law == CoefficientLaw::BoundedGradient) return bounded_factor(grad_w.norm(), strain);
  return phi(anti_plane_strain(grad_w).norm, strain);
}

double ProblemSpec::scaled_strain(const Vec2& grad_w) const {
  if (law == CoefficientLaw::BoundedGradient) return 0.0;
  return strain.beta * anti_plane_strain(grad_w).norm;
}

double evaluate_bc(const ProblemSpec& spec, std::string_view tag, Field field, const Point& p) {
  const auto& bc = spec.condition(tag);
  if (bc.natural) throw Error("tag '" + std::string(tag) + "' carries no Dirichlet data");
  const auto& fn = field == Field::Theta ? bc.theta : bc.w;
  return fn ? fn(p) : 0.0;
}

ProblemSpec preset_problem(std::string_view name) {
  ProblemSpec spec;
  if (name == "unit_square") {
    spec.boundary = {
        {"D1", false, constant(0.0), constant(1.0)},
        {"D2", false, constant(0.0), constant(0.0)},
        {"D3", false, bubble(), ramp()},
        {"D4", false, constant(0.0), ramp()},
    };
  } else if (name == "vnotch" || name == "vnotch_with_inclusion") {
    spec.boundary = {
        {"G1", false, constant(0.0), constant(0.0)},
        {"G2", false, constant(0.0), constant(0.0)},
        {"G3", false, constant(0.0), ramp()},
        {"G4", false, constant(0.0), constant(1.0)},
        {"G5", false, bubble(), ramp()},
        {"G6", false, constant(0.0), constant(0.0)},
        {"G7", false, constant(0.0), constant(0.0)},
    };
    if (name == "vnotch_with_inclusion") spec.boundary.push_back({"H1", true, {}, {}});
  } else {
    throw Error("unknown preset '" + std::string(name) + "'");
  }
  return spec;
}

void validate_problem(const ProblemSpec& spec, const CubicMesh& mesh) {
  spec.strain.validate();
  if (!std::isfinite(spec.xi)) throw ConfigError("xi must be finite");
  if (!spec.kappa) throw ConfigError("kappa is not set");
  std::set<std::string> tags;
  for (Index i = 0; i < mesh.nodes.size(); ++i) {
    const double k = spec.kappa(mesh.nodes[i]);
    if (!(k > 0.0) || !std::isfinite(k)) {
      std::ostringstream msg;
      msg << "kappa must be positive and bounded, got " << k << " at node " << i;
      throw ConfigError(msg.str());
    }
    if (!mesh.node_tags[i].empty()) tags.insert(mesh.node_tags[i]);
  }
  for (const auto& t : tags) spec.condition(t);
}

void DirichletSet::add(Index dof, double value) {
  auto [it, inserted] = values_.emplace(dof, value);
  if (!inserted && std::abs(it->second - value) > 1e-12 * std::max(1.0, std::abs(value))) {
    std::ostringstream msg;
    msg << "conflicting Dirichlet values " << it->second << " and " << value << " on dof " << dof;
    throw Error(msg.str());
  }
}

DirichletSet dirichlet_values(const CubicMesh& mesh, const ProblemSpec& spec, Field field) {
  DirichletSet set;
  for (Index i = 0; i < mesh.nodes.size(); ++i) {
    const auto& tag = mesh.node_tags[i];
    if (tag.empty()) continue;
    const auto& bc = spec.condition(tag);
    if (bc.natural) continue;
    set.add(i, evaluate_bc(spec, tag, field, mesh.nodes[i]));
  }
  return set;
}

}  // namespace cfem
