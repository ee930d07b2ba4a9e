#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfem/assembly.hpp"
#include "cfem/solver.hpp"
#include "test_support.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

using namespace cfem;

namespace {

CubicMesh single(const ElementGeometry& g) {
  CubicMesh m;
  m.nodes.assign(g.nodes.begin(), g.nodes.end());
  m.node_tags.assign(10, "");
  m.elements.push_back({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  m.curved.push_back(std::nullopt);
  m.vertex_count = 3;
  return m;
}

CubicMesh square(int n) { return enrich_to_cubic(structured_square_mesh(n), make_preset("unit_square")); }

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

ProblemSpec unit_kappa() {
  ProblemSpec s = preset_problem("unit_square");
  return s;
}

}  // namespace

TEST_CASE("unit right triangle stiffness against a degree-12 oracle") {
  const auto g = oracle::straight_element({1, 0}, {0, 1}, {0, 0});
  const auto tab = tabulate(quadrature_rule(8));
  const auto k = element_stiffness(g, tab, [](const Point&, const Vec2&) { return 1.0; });
  const auto ref = oracle::stiffness(g.nodes, oracle::collapsed_rule(7), [](const Point&, const Vec2&) { return 1.0; });
  CHECK(max_abs(k - ref) <= 1e-10);
  CHECK(max_abs(k - k.transpose()) <= 1e-14);
  CHECK(k.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("random straight and curved elements against dense oracles") {
  std::mt19937_64 rng(17);
  const auto tab = tabulate(quadrature_rule(8));
  const auto lib = oracle::library_points(quadrature_rule(8));
  const auto fine = oracle::collapsed_rule(9);
  std::normal_distribution<double> n(0.0, 0.3);
  const StrainLimitParams p{1.0, 1.0};
  const auto kappa = [](const Point& x, const Vec2&) { return 1.0 + 0.5 * x.x() * x.x(); };
  const auto coeff = [&](const Point&, const Vec2& g) { return phi(anti_plane_strain(g).norm, p); };
  for (int k = 0; k < 20; ++k) {
    for (bool curved : {false, true}) {
      const auto g = curved ? oracle::random_curved(rng) : oracle::random_straight(rng);
      ElementVector w;
      ElementVector th;
      // small enough to stay inside the strain limit
      for (int i = 0; i < 10; ++i) {
        w[i] = 0.005 * g.diameter() * n(rng);
        th[i] = n(rng);
      }
      // polynomial integrands: exact at degree 8, compare with a finer rule
      const auto ref_rule = curved ? lib : fine;
      CHECK(max_abs(element_mass(g, tab) - oracle::mass(g.nodes, fine)) <= 1e-10);
      CHECK(max_abs(element_load(g, tab, th) - oracle::load(g.nodes, fine, th)) <= 1e-10);
      CHECK(max_abs(element_stiffness(g, tab, kappa) - oracle::stiffness(g.nodes, ref_rule, kappa)) <= 1e-10);
      CHECK(max_abs(element_stiffness(g, tab, coeff, &w) - oracle::stiffness(g.nodes, lib, coeff, &w)) <= 1e-10);
    }
  }
}

TEST_CASE("diffusion assembly on the square") {
  const auto mesh = square(2);
  const auto spec = unit_kappa();
  const auto sys = assemble_diffusion(mesh, spec, quadrature_rule(8));
  CHECK(sys.matrix.rows() == 49);
  const Eigen::MatrixXd a(sys.matrix);
  CHECK(max_abs(a - a.transpose()) <= 1e-12 * max_abs(a));
  CHECK((a * Eigen::VectorXd::Ones(49)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(sys.rhs.cwiseAbs().maxCoeff() == 0.0);

  // positive definite once the boundary is constrained
  const auto bc = dirichlet_values(mesh, spec, Field::Theta);
  CHECK(bc.size() == 24);
  std::vector<Eigen::Index> free;
  for (Index i = 0; i < 49; ++i) {
    if (!bc.values().count(i)) free.push_back(static_cast<Eigen::Index>(i));
  }
  Eigen::MatrixXd reduced(free.size(), free.size());
  for (std::size_t i = 0; i < free.size(); ++i) {
    for (std::size_t j = 0; j < free.size(); ++j) reduced(i, j) = a(free[i], free[j]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("source term assembly") {
  auto spec = unit_kappa();
  spec.source_theta = [](const Point&) { return 2.0; };
  const auto sys = assemble_diffusion(square(2), spec, quadrature_rule(8));
  CHECK(sys.rhs.sum() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("assembly does not depend on element order") {
  auto mesh = square(3);
  const auto spec = unit_kappa();
  const auto a = Eigen::MatrixXd(assemble_diffusion(mesh, spec, quadrature_rule(8)).matrix);
  std::mt19937_64 rng(4);
  std::vector<Index> perm(mesh.element_count());
  for (Index i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  auto shuffled = mesh;
  for (Index i = 0; i < perm.size(); ++i) {
    shuffled.elements[i] = mesh.elements[perm[i]];
    shuffled.curved[i] = mesh.curved[perm[i]];
  }
  const auto b = Eigen::MatrixXd(assemble_diffusion(shuffled, spec, quadrature_rule(8)).matrix);
  CHECK(max_abs(a - b) <= 1e-13);
}

TEST_CASE("quasilinear assembly") {
  const auto mesh = square(2);
  auto spec = preset_problem("unit_square");
  const auto& rule = quadrature_rule(8);
  const Eigen::MatrixXd diff(assemble_diffusion(mesh, spec, rule).matrix);
  const Vector zero = Vector::Zero(49);
  CHECK(max_abs(Eigen::MatrixXd(assemble_quasilinear(mesh, zero, spec, rule).matrix) - diff) <= 1e-14);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 0.02);
  Vector w(49);
  for (auto& v : w) v = n(rng);
  auto linear = spec;
  linear.strain.beta = 0.0;
  CHECK(max_abs(Eigen::MatrixXd(assemble_quasilinear(mesh, w, linear, rule).matrix) - diff) <= 1e-14);

  const Eigen::MatrixXd q(assemble_quasilinear(mesh, w, spec, rule).matrix);
  CHECK(max_abs(q - q.transpose()) <= 1e-12 * max_abs(q));

  Vector steep = Vector::Zero(49);
  for (Index i = 0; i < 49; ++i) steep[i] = 3.0 * mesh.nodes[i].x();
  CHECK(max_scaled_strain(mesh, steep, spec, rule) == doctest::Approx(3.0 / std::sqrt(2.0)));
  try {
    assemble_quasilinear(mesh, steep, spec, rule);
    FAIL("expected a strain-limit error");
  } catch (const StrainLimitError& e) {
    CHECK(std::string(e.what()).find("element") != std::string::npos);
  }
}

TEST_CASE("coupling right-hand side") {
  const auto g = oracle::straight_element({0.1, 0.2}, {1.3, 0.4}, {0.5, 1.1});
  const auto mesh = single(g);
  const auto& rule = quadrature_rule(8);
  CHECK(assemble_coupling_rhs(mesh, Vector::Zero(10), 1.0, rule).cwiseAbs().maxCoeff() == 0.0);
  const Vector f = assemble_coupling_rhs(mesh, Vector::Ones(10), 1.0, rule);
  const double area = signed_area(g.nodes[0], g.nodes[1], g.nodes[2]);
  CHECK(f.sum() == doctest::Approx(-area).epsilon(1e-14));
  // cubic lumped fractions: vertices 1/30, edge nodes 3/40, interior 9/20
  for (int i = 0; i < 3; ++i) CHECK(f[i] == doctest::Approx(-area / 30.0).epsilon(1e-13));
  for (int i = 3; i < 9; ++i) CHECK(f[i] == doctest::Approx(-3.0 * area / 40.0).epsilon(1e-13));
  CHECK(f[9] == doctest::Approx(-9.0 * area / 20.0).epsilon(1e-13));

  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.0);
  oracle::Vec10 th;
  for (int i = 0; i < 10; ++i) th[i] = n(rng);
  const Vector fr = assemble_coupling_rhs(mesh, th, 0.7, rule);
  const auto ref = oracle::load(g.nodes, oracle::collapsed_rule(8), th);
  CHECK((fr + 0.7 * ref).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Dirichlet elimination") {
  const auto mesh = square(2);
  const auto spec = preset_problem("unit_square");
  auto sys = assemble_diffusion(mesh, spec, quadrature_rule(8));
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& v : sys.rhs) v = n(rng);

  const auto same = apply_dirichlet(sys, {});
  CHECK(max_abs(Eigen::MatrixXd(same.matrix) - Eigen::MatrixXd(sys.matrix)) == 0.0);
  CHECK((same.rhs - sys.rhs).norm() == 0.0);

  Vector v(49);
  for (auto& x : v) x = n(rng);
  std::map<Index, double> all;
  for (Index i = 0; i < 49; ++i) all[i] = v[i];
  CHECK((solve_linear(apply_dirichlet(sys, all)) - v).cwiseAbs().maxCoeff() <= 1e-14);

  // symmetric elimination against a Lagrange multiplier reference
  const auto bc = dirichlet_values(mesh, spec, Field::Theta).values();
  const auto reduced = apply_dirichlet(sys, bc);
  const Eigen::MatrixXd r(reduced.matrix);
  CHECK(max_abs(r - r.transpose()) == 0.0);
  const Vector x = solve_linear(reduced);
  const Index m = bc.size();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(49 + m, 49 + m);
  Vector rhs = Vector::Zero(49 + m);
  kkt.topLeftCorner(49, 49) = Eigen::MatrixXd(sys.matrix);
  rhs.head(49) = sys.rhs;
  Index k = 0;
  for (const auto& [dof, val] : bc) {
    kkt(49 + k, dof) = 1.0;
    kkt(dof, 49 + k) = 1.0;
    rhs[49 + k] = val;
    ++k;
  }
  const Vector ref = kkt.fullPivLu().solve(rhs);
  CHECK((x - ref.head(49)).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(apply_dirichlet(sys, {{49, 1.0}}), Error);
  auto once = apply_dirichlet(sys, {{3, 1.0}});
  CHECK_THROWS_AS(apply_dirichlet(once, {{3, 2.0}}), Error);
  DirichletSet set;
  set.add(2, 1.0);
  set.add(2, 1.0);
  CHECK(set.size() == 1);
  CHECK_THROWS_AS(set.add(2, 1.5), Error);
}

TEST_CASE("boundary data of the presets") {
  const auto sq = preset_problem("unit_square");
  CHECK(evaluate_bc(sq, "D3", Field::Theta, Point(0.5, 0.0)) == doctest::Approx(0.25));
  CHECK(evaluate_bc(sq, "D1", Field::W, Point(0.0, 0.3)) == 1.0);
  CHECK(evaluate_bc(sq, "D2", Field::W, Point(1.0, 0.3)) == 0.0);
  CHECK(evaluate_bc(sq, "D4", Field::W, Point(0.25, 1.0)) == doctest::Approx(0.75));
  CHECK_THROWS_AS(evaluate_bc(sq, "G9", Field::W, Point(0, 0)), Error);
  const auto vi = preset_problem("vnotch_with_inclusion");
  CHECK(evaluate_bc(vi, "G5", Field::Theta, Point(0.5, 0.0)) == doctest::Approx(0.25));
  CHECK(evaluate_bc(vi, "G4", Field::W, Point(0.0, 0.5)) == 1.0);
  CHECK(evaluate_bc(vi, "G3", Field::W, Point(0.2, 1.0)) == doctest::Approx(0.8));
  CHECK_THROWS_AS(evaluate_bc(vi, "H1", Field::W, Point(0.35, 0.65)), Error);
  CHECK_THROWS_AS(preset_problem("disc"), Error);
}

TEST_CASE("patch test on a mesh with curved elements") {
  const auto p = make_preset("vnotch_with_inclusion");
  MeshingOptions o;
  o.h0 = 0.1;
  o.fixed = p.fixed_points;
  const auto mesh = enrich_to_cubic(generate_linear_mesh(p.sdf, o), p);
  REQUIRE(mesh.curved_element_count() > 0);
  ProblemSpec spec;
  const auto field = [](const Point& x) { return 0.4 + 1.3 * x.x() - 0.8 * x.y(); };
  for (const auto& seg : p.boundary_segments) spec.boundary.push_back({seg.tag, false, field, field});
  const Vector theta = solve_temperature(mesh, spec, quadrature_rule(8));
  double err = 0.0;
  for (Index i = 0; i < mesh.dof_count(); ++i) err = std::max(err, std::abs(theta[i] - field(mesh.nodes[i])));
  CHECK(err <= 1e-10);
}
