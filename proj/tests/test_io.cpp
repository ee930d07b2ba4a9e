#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfem/config.hpp"
#include "cfem/export.hpp"
#include "cfem/mesh_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cfem;
namespace fs = std::filesystem;

namespace {

CubicMesh square(int n) { return enrich_to_cubic(structured_square_mesh(n), make_preset("unit_square")); }

CubicMesh inclusion_mesh() {
  const auto p = make_preset("vnotch_with_inclusion");
  MeshingOptions o;
  o.h0 = 0.1;
  o.fixed = p.fixed_points;
  return enrich_to_cubic(generate_linear_mesh(p.sdf, o), p);
}

std::string to_text(const CubicMesh& m) {
  std::ostringstream out;
  write_mesh(m, out);
  return out.str();
}

CubicMesh from_text(const std::string& s) {
  std::istringstream in(s);
  return read_mesh(in);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cfem_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("mesh text format") {
  const auto text = to_text(square(2));
  const auto l = lines(text);
  CHECK(l[0] == "cfem-mesh v1");
  CHECK(l[1] == "nodes 49 elements 8");
  CHECK(l.size() == 2 + 49 + 8);
  CHECK(l[2].rfind("0 ", 0) == 0);
}

TEST_CASE("mesh round trip is exact") {
  for (const auto& mesh : {square(3), inclusion_mesh()}) {
    const auto text = to_text(mesh);
    const auto back = from_text(text);
    CHECK(to_text(back) == text);
    CHECK(back.vertex_count == mesh.vertex_count);
    CHECK(back.curved_element_count() == mesh.curved_element_count());
    REQUIRE(back.nodes.size() == mesh.nodes.size());
    for (Index i = 0; i < mesh.nodes.size(); ++i) {
      CHECK(back.nodes[i] == mesh.nodes[i]);
      CHECK(back.node_tags[i] == mesh.node_tags[i]);
    }
  }
  const auto path = scratch("mesh.txt");
  write_mesh(square(2), path);
  CHECK(to_text(read_mesh(path)) == to_text(square(2)));
}

TEST_CASE("malformed mesh files") {
  auto l = lines(to_text(square(2)));
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += x + "\n";
    return s;
  };

  // element line with nine node ids
  auto bad = l;
  const std::size_t row = 2 + 49;
  bad[row] = "0 0 1 2 3 4 5 6 7 8 curved:- arc:-";
  try {
    from_text(join(bad));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == row + 1);
    CHECK(std::string(e.what()).find("line " + std::to_string(row + 1)) != std::string::npos);
  }

  bad = l;
  bad[0] = "mesh v0";
  CHECK_THROWS_AS(from_text(join(bad)), ParseError);
  bad = l;
  bad[5] = "3 0.5 abc -";
  CHECK_THROWS_AS(from_text(join(bad)), ParseError);
  bad = l;
  bad.pop_back();
  CHECK_THROWS_AS(from_text(join(bad)), ParseError);

  bad = l;
  bad[row] = "0 0 1 2 3 4 5 6 7 8 99 curved:- arc:-";
  CHECK_THROWS_AS(from_text(join(bad)), MeshError);
  bad = l;
  bad[row] = "0 0 1 2 3 4 5 6 7 8 9 curved:0 arc:3";
  CHECK_THROWS_AS(from_text(join(bad)), MeshError);
  CHECK_THROWS_AS(read_mesh(scratch("missing.txt")), Error);
}

TEST_CASE("field export") {
  const auto mesh = square(2);
  Vector f(mesh.dof_count());
  for (Index i = 0; i < mesh.dof_count(); ++i) f[i] = mesh.nodes[i].x() - 2.0 * mesh.nodes[i].y();

  std::ostringstream csv;
  write_field_csv(mesh, f, csv);
  const auto rows = lines(csv.str());
  CHECK(rows.size() == mesh.dof_count() + 1);
  CHECK(rows[0] == "x,y,value");

  const auto path = scratch("f.csv");
  export_field(mesh, f, ExportFormat::Csv, path);
  const Vector back = read_field_csv(path);
  CHECK((back - f).cwiseAbs().maxCoeff() == 0.0);

  std::ostringstream vtk;
  write_field_vtk(mesh, f, "w", vtk);
  const auto v = vtk.str();
  CHECK(v.find("POINTS 49 double") != std::string::npos);
  CHECK(v.find("CELLS 72 288") != std::string::npos);
  CHECK(v.find("CELL_TYPES 72") != std::string::npos);
  CHECK(v.find("SCALARS w double") != std::string::npos);

  // every sub-triangle is counter-clockwise and they tile each element
  std::istringstream in(v);
  std::string tok;
  while (in >> tok && tok != "CELLS") {}
  std::size_t ncells = 0, total = 0;
  in >> ncells >> total;
  double area = 0.0;
  for (std::size_t c = 0; c < ncells; ++c) {
    int k, a, b, d;
    in >> k >> a >> b >> d;
    CHECK(k == 3);
    const double s = signed_area(mesh.nodes[a], mesh.nodes[b], mesh.nodes[d]);
    CHECK(s > 0.0);
    area += s;
  }
  CHECK(area == doctest::Approx(1.0).epsilon(1e-13));

  std::ostringstream zero;
  write_field_csv(mesh, Vector::Zero(mesh.dof_count()), zero);
  CHECK(lines(zero.str())[1].find(",0") != std::string::npos);

  std::ostringstream again;
  write_field_vtk(mesh, f, "w", again);
  CHECK(again.str() == v);

  CHECK(parse_export_format("vtk") == ExportFormat::Vtk);
  CHECK_THROWS_AS(parse_export_format("png"), Error);
  CHECK_THROWS_AS(write_field_csv(mesh, Vector::Zero(3), csv), Error);
}

TEST_CASE("run configuration") {
  const auto cfg = parse_config(R"({
    "geometry": {"preset": "vnotch_with_inclusion", "inclusion_radius": 0.12},
    "mesh": {"h0": 0.08, "seed": 7},
    "material": {"xi": 2.0, "alpha": 2.0, "law": "bounded"},
    "solver": {"tol": 1e-9, "metric": "relative", "linear": "cg"},
    "output": {"directory": "res", "formats": ["csv", "vtk"]}
  })");
  CHECK(cfg.preset == "vnotch_with_inclusion");
  CHECK(cfg.geometry.inclusion_radius == 0.12);
  CHECK(cfg.mesh_size() == 0.08);
  CHECK(cfg.seed == 7);
  CHECK_FALSE(cfg.structured);
  CHECK(cfg.xi == 2.0);
  CHECK(cfg.strain.alpha == 2.0);
  CHECK(cfg.law == CoefficientLaw::BoundedGradient);
  CHECK(cfg.solver.metric == PicardMetric::Relative);
  CHECK(cfg.solver.linear.kind == LinearSolverKind::ConjugateGradient);
  CHECK(cfg.output_directory == "res");
  CHECK(cfg.formats.size() == 2);

  const auto d = parse_config("{}");
  CHECK(d.preset == "unit_square");
  CHECK(d.structured);
  CHECK(d.xi == 1.0);
  CHECK(d.law == CoefficientLaw::StrainLimit);
  CHECK(d.solver.tol == 1e-8);
  CHECK(d.solver.max_iters == 50);
  CHECK(parse_config(R"({"geometry": {"preset": "vnotch"}})").mesh_size() == 0.045);

  for (const char* bad : {
           "{",
           R"({"extra": 1})",
           R"({"mesh": {"h": 0.1}})",
           R"({"mesh": {"h0": -1}})",
           R"({"geometry": {"preset": "disc"}})",
           R"({"geometry": {"preset": "vnotch"}, "mesh": {"structured": true}})",
           R"({"geometry": {"preset": "vnotch", "notch_depth": 1.5}})",
           R"({"material": {"xi": 0}})",
           R"({"material": {"kappa": -1}})",
           R"({"material": {"beta": -1}})",
           R"({"material": {"law": "cubic"}})",
           R"({"solver": {"tol": 0}})",
           R"({"solver": {"metric": "l1"}})",
           R"({"solver": {"quadrature_degree": 12}})",
           R"({"solver": {"max_iters": "many"}})",
           R"({"output": {"formats": ["png"]}})",
       }) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
  }
  CHECK_THROWS_AS(load_config(scratch("nope.json")), ConfigError);
}

TEST_CASE("configured problem and mesh") {
  auto cfg = parse_config(R"({"mesh": {"divisions": 3}, "material": {"kappa": 2.5, "xi": 0.5}})");
  const auto mesh = build_mesh(cfg);
  CHECK(mesh.element_count() == 18);
  const auto spec = build_problem(cfg);
  CHECK(spec.kappa(Point(0.3, 0.3)) == 2.5);
  CHECK(spec.xi == 0.5);
  CHECK(to_string(CoefficientLaw::BoundedGradient) == "bounded");
  CHECK(to_string(PicardMetric::MaxAbs) == "max_abs");
}
