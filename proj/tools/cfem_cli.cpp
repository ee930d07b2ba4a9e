// cfem: mesh generation, coupled solve, manufactured verification and
// field export driven by a JSON configuration.

#include "cfem/config.hpp"
#include "cfem/export.hpp"
#include "cfem/mesh_io.hpp"
#include "cfem/solver.hpp"
#include "cfem/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cfem;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
};

RunConfig load(const Options& opt) {
  auto cfg = load_config(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  fs::create_directories(cfg.output_directory);
  return cfg;
}

void write_json(const json& doc, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << doc.dump(2) << '\n';
}

json stats_json(const CubicMesh& mesh) {
  const auto r = dof_report(mesh);
  return {{"elements", r.elements},           {"dof", r.dof},
          {"boundary_points", r.boundary_points}, {"vertices", r.vertices},
          {"edges", r.edges},                 {"curved_elements", mesh.curved_element_count()}};
}

void print_stats(const CubicMesh& mesh) {
  const auto r = dof_report(mesh);
  std::printf("elements=%zu dof=%zu boundary=%zu\n", r.elements, r.dof, r.boundary_points);
}

void export_all(const RunConfig& cfg, const CubicMesh& mesh, const Vector& field, const std::string& name) {
  for (const auto& f : cfg.formats) {
    export_field(mesh, field, parse_export_format(f), cfg.output_directory / (name + "." + f), name);
  }
}

int run_mesh(const Options& opt) {
  const auto cfg = load(opt);
  const auto mesh = build_mesh(cfg);
  write_mesh(mesh, cfg.output_directory / "mesh.txt");
  write_json(stats_json(mesh), cfg.output_directory / "mesh_stats.json");
  print_stats(mesh);
  return 0;
}

int run_solve(const Options& opt) {
  const auto cfg = load(opt);
  const auto mesh = build_mesh(cfg);
  write_mesh(mesh, cfg.output_directory / "mesh.txt");
  print_stats(mesh);
  const auto spec = build_problem(cfg);
  const auto report = solve_coupled(mesh, spec, cfg.solver);

  auto formats = cfg;
  if (std::find(formats.formats.begin(), formats.formats.end(), "csv") == formats.formats.end()) {
    formats.formats.push_back("csv");
  }
  export_all(formats, mesh, report.theta, "theta");
  export_all(formats, mesh, report.w, "w");

  {
    std::ofstream out(cfg.output_directory / "history.csv");
    out << "iteration,max_abs,relative,step,damping_events,linear_iterations,linear_residual\n";
    char buf[256];
    for (const auto& h : report.history) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d,%d,%.6e\n", h.iteration, h.max_abs,
                    h.relative, h.step, h.damping_events, h.linear.iterations, h.linear.residual);
      out << buf;
    }
  }
  json history = json::array();
  for (const auto& h : report.history) {
    history.push_back({{"iteration", h.iteration}, {"max_abs", h.max_abs}, {"relative", h.relative},
                       {"step", h.step}, {"damping_events", h.damping_events},
                       {"linear_iterations", h.linear.iterations}, {"linear_residual", h.linear.residual}});
  }
  json doc = {{"preset", cfg.preset},
              {"mesh", stats_json(mesh)},
              {"material", {{"kappa", cfg.kappa}, {"xi", cfg.xi}, {"alpha", cfg.strain.alpha},
                            {"beta", cfg.strain.beta}, {"law", std::string(to_string(cfg.law))}}},
              {"solver", {{"tol", cfg.solver.tol}, {"max_iters", cfg.solver.max_iters},
                          {"metric", std::string(to_string(cfg.solver.metric))}}},
              {"converged", report.converged},
              {"iterations_used", report.iterations_used},
              {"damping_events", report.damping_events},
              {"message", report.message},
              {"theta_linear_residual", report.theta_linear.residual},
              {"history", history}};
  write_json(doc, cfg.output_directory / "report.json");
  std::printf("%s\n", report.message.c_str());
  if (!report.converged) {
    std::fprintf(stderr, "error: Picard iteration did not converge\n");
    return 2;
  }
  return 0;
}

int run_verify(const Options& opt) {
  const auto cfg = load(opt);
  if (cfg.preset != "unit_square") throw ConfigError("verify runs on the unit_square preset");
  const auto mc = sine_case();
  const auto mesh = enrich_to_cubic(structured_square_mesh(cfg.divisions), make_preset("unit_square"));
  const auto study = manufactured_study(mesh, mc, cfg.solver);
  print_stats(mesh);

  {
    std::ofstream out(cfg.output_directory / "errors.csv");
    out << "iteration,E_a,E_r_percent,L2,L2_nodal\n";
    char buf[256];
    for (const auto& it : study.iterations) {
      std::snprintf(buf, sizeof buf, "%d,%.6e,%.6e,%.6e,%.6e\n", it.iteration, it.error.e_abs,
                    it.error.e_rel, it.error.l2, it.error.l2_nodal);
      out << buf;
      std::printf("iteration %d: E_a=%.4e E_r=%.4f%% L2=%.4e L2_nodal=%.4e\n", it.iteration,
                  it.error.e_abs, it.error.e_rel, it.error.l2, it.error.l2_nodal);
    }
  }
  const auto conv = convergence_study(mc, cfg.study_divisions, cfg.solver);
  {
    std::ofstream out(cfg.output_directory / "convergence.csv");
    out << format_convergence_table(conv);
  }
  std::printf("%s", format_convergence_table(conv).c_str());
  json rows = json::array();
  for (const auto& it : study.iterations) {
    rows.push_back({{"iteration", it.iteration}, {"E_a", it.error.e_abs}, {"E_r_percent", it.error.e_rel},
                    {"L2", it.error.l2}, {"L2_nodal", it.error.l2_nodal}});
  }
  json doc = {{"mesh", stats_json(mesh)}, {"iterations", rows}, {"converged", study.report.converged}};
  if (conv.order) doc["fitted_order"] = *conv.order;
  if (!conv.note.empty()) doc["note"] = conv.note;
  write_json(doc, cfg.output_directory / "verify.json");
  return study.report.converged && conv.rows.size() == cfg.study_divisions.size() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic curved-triangle finite elements for coupled thermoelasticity"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", opt.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "seed for the initial mesh point jitter");
  };
  auto* mesh_cmd = app.add_subcommand("mesh", "generate a mesh and write it with its statistics");
  add_config(mesh_cmd);
  auto* solve_cmd = app.add_subcommand("solve", "solve the coupled problem on a preset");
  add_config(solve_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "manufactured-solution study and convergence table");
  add_config(verify_cmd);

  auto* export_cmd = app.add_subcommand("export", "re-export a saved nodal field");
  std::string mesh_path, field_path, out_path, format = "vtk", name = "value";
  export_cmd->add_option("mesh", mesh_path, "mesh file")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("field", field_path, "field CSV (x,y,value)")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("-o,--output", out_path, "output file")->required();
  export_cmd->add_option("-f,--format", format, "csv or vtk")->check(CLI::IsMember({"csv", "vtk"}));
  export_cmd->add_option("--name", name, "field name in the VTK file");

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : {mesh_cmd, solve_cmd, verify_cmd}) {
    if (sub->parsed() && sub->count("--seed")) opt.seed = seed;
  }
  try {
    if (mesh_cmd->parsed()) return run_mesh(opt);
    if (solve_cmd->parsed()) return run_solve(opt);
    if (verify_cmd->parsed()) return run_verify(opt);
    if (export_cmd->parsed()) {
      const auto mesh = read_mesh(fs::path(mesh_path));
      const auto field = read_field_csv(field_path);
      export_field(mesh, field, parse_export_format(format), out_path, name);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
