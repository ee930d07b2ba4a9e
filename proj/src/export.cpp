#include "cfem/export.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cfem {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_size(const CubicMesh& mesh, const Vector& field) {
  if (static_cast<Index>(field.size()) != mesh.dof_count()) {
    throw Error("field has " + std::to_string(field.size()) + " values, mesh has " +
                std::to_string(mesh.dof_count()) + " nodes");
  }
}

// Local node at lattice point (a, b) = (3 xi, 3 eta).
constexpr int kLattice[4][4] = {
    {2, 6, 5, 1},
    {7, 9, 4, -1},
    {8, 3, -1, -1},
    {0, -1, -1, -1},
};

std::array<std::array<int, 3>, 9> sub_triangles() {
  std::array<std::array<int, 3>, 9> out{};
  int k = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; a + b < 3; ++b) {
      out[k++] = {kLattice[a][b], kLattice[a + 1][b], kLattice[a][b + 1]};
      if (a + b < 2) out[k++] = {kLattice[a + 1][b], kLattice[a + 1][b + 1], kLattice[a][b + 1]};
    }
  }
  return out;
}

}  // namespace

ExportFormat parse_export_format(std::string_view name) {
  if (name == "csv") return ExportFormat::Csv;
  if (name == "vtk") return ExportFormat::Vtk;
  throw Error("unknown export format '" + std::string(name) + "' (expected csv or vtk)");
}

void write_field_csv(const CubicMesh& mesh, const Vector& field, std::ostream& out) {
  check_size(mesh, field);
  out << "x,y,value\n";
  for (Index i = 0; i < mesh.dof_count(); ++i) {
    out << num(mesh.nodes[i].x()) << ',' << num(mesh.nodes[i].y()) << ','
        << num(field[static_cast<Eigen::Index>(i)]) << '\n';
  }
}

void write_field_vtk(const CubicMesh& mesh, const Vector& field, std::string_view name, std::ostream& out) {
  check_size(mesh, field);
  const auto subs = sub_triangles();
  const Index cells = 9 * mesh.element_count();
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.dof_count() << " double\n";
  for (const auto& p : mesh.nodes) out << num(p.x()) << ' ' << num(p.y()) << " 0\n";
  out << "CELLS " << cells << ' ' << 4 * cells << '\n';
  for (const auto& el : mesh.elements) {
    for (const auto& t : subs) out << "3 " << el[t[0]] << ' ' << el[t[1]] << ' ' << el[t[2]] << '\n';
  }
  out << "CELL_TYPES " << cells << '\n';
  for (Index c = 0; c < cells; ++c) out << "5\n";
  out << "POINT_DATA " << mesh.dof_count() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index i = 0; i < field.size(); ++i) out << num(field[i]) << '\n';
}

void export_field(const CubicMesh& mesh, const Vector& field, ExportFormat format,
                  const std::filesystem::path& path, std::string_view name) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  if (format == ExportFormat::Csv) {
    write_field_csv(mesh, field, out);
  } else {
    write_field_vtk(mesh, field, name, out);
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Vector read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t number = 1;
  if (!std::getline(in, line) || line != "x,y,value") throw ParseError("expected header 'x,y,value'", number);
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos || std::count(line.begin(), line.end(), ',') != 2) {
      throw ParseError("expected 'x,y,value'", number);
    }
    try {
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ParseError("invalid value", number);
    }
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace cfem
