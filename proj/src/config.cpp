#include "cfem/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cfem {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& section, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("'" + section + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
  }
}

template <class T>
void read(const json& obj, const std::string& section, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("invalid value for '" + section + "." + key + "'");
  }
}

double positive(double v, const std::string& name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(name + " must be positive");
  return v;
}

}  // namespace

double preset_mesh_size(std::string_view preset) {
  if (preset == "vnotch") return 0.045;
  if (preset == "vnotch_with_inclusion") return 0.044;
  return 0.1;
}

double RunConfig::mesh_size() const { return h0 > 0.0 ? h0 : preset_mesh_size(preset); }

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(doc, "<root>", {"geometry", "mesh", "material", "solver", "output"});

  RunConfig cfg;
  if (doc.contains("geometry")) {
    const auto& g = doc["geometry"];
    reject_unknown(g, "geometry", {"preset", "notch_depth", "notch_half_width", "notch_center_y",
                                   "inclusion_center", "inclusion_radius"});
    read(g, "geometry", "preset", cfg.preset);
    read(g, "geometry", "notch_depth", cfg.geometry.notch_depth);
    read(g, "geometry", "notch_half_width", cfg.geometry.notch_half_width);
    read(g, "geometry", "notch_center_y", cfg.geometry.notch_center_y);
    read(g, "geometry", "inclusion_radius", cfg.geometry.inclusion_radius);
    if (g.contains("inclusion_center")) {
      std::vector<double> c;
      read(g, "geometry", "inclusion_center", c);
      if (c.size() != 2) throw ConfigError("geometry.inclusion_center must be [x, y]");
      cfg.geometry.inclusion_center = Point(c[0], c[1]);
    }
  }
  bool structured_given = false;
  if (doc.contains("mesh")) {
    const auto& m = doc["mesh"];
    reject_unknown(m, "mesh", {"h0", "structured", "divisions", "seed", "max_iters", "study_divisions"});
    read(m, "mesh", "h0", cfg.h0);
    structured_given = m.contains("structured");
    read(m, "mesh", "structured", cfg.structured);
    read(m, "mesh", "divisions", cfg.divisions);
    read(m, "mesh", "seed", cfg.seed);
    read(m, "mesh", "max_iters", cfg.mesh_max_iters);
    read(m, "mesh", "study_divisions", cfg.study_divisions);
    if (m.contains("h0")) positive(cfg.h0, "mesh.h0");
  }
  if (!structured_given) cfg.structured = cfg.preset == "unit_square";
  if (cfg.divisions < 1) throw ConfigError("mesh.divisions must be at least 1");
  if (cfg.mesh_max_iters < 1) throw ConfigError("mesh.max_iters must be at least 1");
  for (int d : cfg.study_divisions) {
    if (d < 1) throw ConfigError("mesh.study_divisions entries must be at least 1");
  }
  if (cfg.structured && cfg.preset != "unit_square") {
    throw ConfigError("mesh.structured is only available for the unit_square preset");
  }

  if (doc.contains("material")) {
    const auto& m = doc["material"];
    reject_unknown(m, "material", {"kappa", "xi", "alpha", "beta", "law"});
    read(m, "material", "kappa", cfg.kappa);
    read(m, "material", "xi", cfg.xi);
    read(m, "material", "alpha", cfg.strain.alpha);
    read(m, "material", "beta", cfg.strain.beta);
    std::string law = "strain_limit";
    read(m, "material", "law", law);
    if (law == "strain_limit") {
      cfg.law = CoefficientLaw::StrainLimit;
    } else if (law == "bounded") {
      cfg.law = CoefficientLaw::BoundedGradient;
    } else {
      throw ConfigError("material.law must be 'strain_limit' or 'bounded'");
    }
  }
  positive(cfg.kappa, "material.kappa");
  positive(cfg.xi, "material.xi");
  cfg.strain.validate();

  if (doc.contains("solver")) {
    const auto& s = doc["solver"];
    reject_unknown(s, "solver", {"tol", "max_iters", "metric", "linear", "damping", "quadrature_degree"});
    read(s, "solver", "tol", cfg.solver.tol);
    read(s, "solver", "max_iters", cfg.solver.max_iters);
    read(s, "solver", "damping", cfg.solver.damping);
    read(s, "solver", "quadrature_degree", cfg.solver.quadrature_degree);
    std::string metric = "max_abs";
    read(s, "solver", "metric", metric);
    if (metric == "max_abs") {
      cfg.solver.metric = PicardMetric::MaxAbs;
    } else if (metric == "relative") {
      cfg.solver.metric = PicardMetric::Relative;
    } else {
      throw ConfigError("solver.metric must be 'max_abs' or 'relative'");
    }
    std::string linear = "direct";
    read(s, "solver", "linear", linear);
    if (linear == "direct") {
      cfg.solver.linear.kind = LinearSolverKind::Direct;
    } else if (linear == "cg") {
      cfg.solver.linear.kind = LinearSolverKind::ConjugateGradient;
    } else {
      throw ConfigError("solver.linear must be 'direct' or 'cg'");
    }
  }
  cfg.solver.validate();
  if (cfg.solver.quadrature_degree < 1 || cfg.solver.quadrature_degree > max_quadrature_degree()) {
    throw ConfigError("solver.quadrature_degree must lie in [1, " + std::to_string(max_quadrature_degree()) + "]");
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    reject_unknown(o, "output", {"directory", "formats"});
    std::string dir = cfg.output_directory.string();
    read(o, "output", "directory", dir);
    if (dir.empty()) throw ConfigError("output.directory must not be empty");
    cfg.output_directory = dir;
    read(o, "output", "formats", cfg.formats);
    for (const auto& f : cfg.formats) {
      if (f != "csv" && f != "vtk") throw ConfigError("output.formats entries must be 'csv' or 'vtk'");
    }
  }

  // Fail early on unknown presets or geometry that does not fit.
  try {
    make_preset(cfg.preset, cfg.geometry);
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

CubicMesh build_mesh(const RunConfig& cfg) {
  const auto preset = make_preset(cfg.preset, cfg.geometry);
  if (cfg.structured) return enrich_to_cubic(structured_square_mesh(cfg.divisions), preset);
  MeshingOptions opts;
  opts.h0 = cfg.mesh_size();
  opts.fixed = preset.fixed_points;
  opts.seed = cfg.seed;
  opts.max_iters = cfg.mesh_max_iters;
  return enrich_to_cubic(generate_linear_mesh(preset.sdf, opts), preset);
}

ProblemSpec build_problem(const RunConfig& cfg) {
  auto spec = preset_problem(cfg.preset);
  const double kappa = cfg.kappa;
  spec.kappa = [kappa](const Point&) { return kappa; };
  spec.xi = cfg.xi;
  spec.strain = cfg.strain;
  spec.law = cfg.law;
  return spec;
}

std::string_view to_string(CoefficientLaw law) {
  return law == CoefficientLaw::StrainLimit ? "strain_limit" : "bounded";
}

std::string_view to_string(PicardMetric metric) {
  return metric == PicardMetric::MaxAbs ? "max_abs" : "relative";
}

}  // namespace cfem
