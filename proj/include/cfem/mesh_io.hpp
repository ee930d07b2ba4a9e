#pragma once

// Text mesh format:
//
//   cfem-mesh v1
//   nodes N elements E
//   <id> <x> <y> <tag|->                       N lines
//   <id> <n1> ... <n10> curved:<edge|-> arc:<arcid|->   E lines
//   arc <id> <cx> <cy> <r>                     one line per arc
//
// Triangle vertices must be numbered before edge and interior nodes.
// Coordinates use 17 significant digits so a write/read cycle is exact.

#include "cfem/meshgen.hpp"

#include <filesystem>
#include <iosfwd>

namespace cfem {

void write_mesh(const CubicMesh& mesh, std::ostream& out);
void write_mesh(const CubicMesh& mesh, const std::filesystem::path& path);

/// Throws ParseError (with line number) on malformed input and MeshError on
/// dangling node or arc references.
CubicMesh read_mesh(std::istream& in);
CubicMesh read_mesh(const std::filesystem::path& path);

}  // namespace cfem
