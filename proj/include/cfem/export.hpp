#pragma once

// Nodal field export for external contour plotting.

#include "cfem/meshgen.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace cfem {

enum class ExportFormat { Csv, Vtk };

/// "csv" or "vtk"; throws Error otherwise.
ExportFormat parse_export_format(std::string_view name);

/// CSV: header "x,y,value" then one row per node.
void write_field_csv(const CubicMesh& mesh, const Vector& field, std::ostream& out);

/// Legacy VTK unstructured grid; every cubic triangle becomes 9 linear
/// triangles on its nodal lattice.
void write_field_vtk(const CubicMesh& mesh, const Vector& field, std::string_view name, std::ostream& out);

void export_field(const CubicMesh& mesh, const Vector& field, ExportFormat format,
                  const std::filesystem::path& path, std::string_view name = "value");

/// Reads the value column of a CSV written by write_field_csv.
Vector read_field_csv(const std::filesystem::path& path);

}  // namespace cfem
