#pragma once

// JSON run configuration with sections geometry, mesh, material, solver and
// output. Unknown keys are rejected.

#include "cfem/geometry.hpp"
#include "cfem/meshgen.hpp"
#include "cfem/problem.hpp"
#include "cfem/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cfem {

struct RunConfig {
  std::string preset = "unit_square";
  PresetGeometry geometry;

  double h0 = 0.0;          // 0: preset default
  bool structured = false;  // structured grid (unit_square only)
  int divisions = 2;        // structured grid cells per side
  std::uint64_t seed = 1;
  int mesh_max_iters = 5000;
  std::vector<int> study_divisions{2, 4, 8};

  double kappa = 1.0;
  double xi = 1.0;
  StrainLimitParams strain;
  CoefficientLaw law = CoefficientLaw::StrainLimit;

  PicardConfig solver;

  std::filesystem::path output_directory = "out";
  std::vector<std::string> formats{"csv"};

  /// h0 actually used: the configured value or the preset default.
  double mesh_size() const;
};

/// Parses and validates a JSON document. Throws ConfigError.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Default element size of a preset (0.045 for vnotch, 0.044 with inclusion).
double preset_mesh_size(std::string_view preset);

/// Builds the cubic mesh the configuration describes.
CubicMesh build_mesh(const RunConfig& cfg);

/// Preset boundary data with the configured material parameters.
ProblemSpec build_problem(const RunConfig& cfg);

std::string_view to_string(CoefficientLaw law);
std::string_view to_string(PicardMetric metric);

}  // namespace cfem
