#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ariis/config.hpp"
#include "ariis/driver.hpp"
#include "ariis/error.hpp"
#include "ariis/mesh.hpp"
#include "ariis/mesh_io.hpp"
#include "ariis/units.hpp"

namespace fs = std::filesystem;
using namespace ariis;

namespace {

enum Exit { kOk = 0, kConfig = 1, kSolver = 2, kIo = 3 };

struct CaseOptions {
  std::string config;
  std::string method;
  std::vector<std::string> sets;
  std::string output;
  int snapshot_stride = -1;
  bool quiet = false;
};

void add_case_options(CLI::App* app, CaseOptions& o) {
  app->add_option("-c,--config", o.config, "configuration file, or a preset name (testA, testB)")->required();
  app->add_option("-m,--method", o.method, "riis or ariis (overrides ariis.enabled)")
      ->check(CLI::IsMember({"riis", "ariis"}));
  app->add_option("-s,--set", o.sets, "override, dotted.path=value (repeatable)");
  app->add_option("-o,--output", o.output, "output directory");
  app->add_option("--snapshot-stride", o.snapshot_stride, "VTU snapshot every N steps (0 disables)")
      ->check(CLI::NonNegativeNumber);
  app->add_flag("-q,--quiet", o.quiet, "no per-step progress");
}

nlohmann::json load_document(const CaseOptions& o) {
  nlohmann::json doc;
  if (fs::exists(o.config)) {
    doc = load_config_file(o.config);
  } else if (o.config == "testA" || o.config == "testB") {
    doc = preset_json(o.config);
  } else {
    throw IoError("cannot open configuration '" + o.config + "'");
  }
  if (!o.method.empty()) apply_override(doc, std::string("ariis.enabled=") + (o.method == "ariis" ? "true" : "false"));
  for (const auto& s : o.sets) apply_override(doc, s);
  if (!o.output.empty()) doc["output"]["directory"] = o.output;
  if (o.snapshot_stride >= 0) doc["output"]["snapshot_stride"] = o.snapshot_stride;
  return doc;
}

RunOptions progress_options(bool quiet) {
  RunOptions ro;
  if (!quiet) {
    ro.on_step = [](const LogRecord& r) {
      std::printf("t = %.4f  p_LV = %8.3f mmHg  p* = %8.3f mmHg  chi = %d  V_LV = %.4e  GMRES %d\n", r.t,
                  units::to_mmhg(r.p_LV), units::to_mmhg(r.p_star), r.chi_iso, r.V_LV, r.iterations);
      std::fflush(stdout);
    };
  }
  return ro;
}

int cmd_run(const CaseOptions& o, bool dry_run) {
  const nlohmann::json doc = load_document(o);
  const RunConfig cfg = parse_config(doc);
  if (dry_run) {
    std::cout << cfg.resolved.dump(2) << "\n";
    return kOk;
  }
  const RunSummary s = run_simulation(cfg, progress_options(o.quiet));
  std::cout << "steps: " << s.log.size() << "  wall time: " << s.wall_seconds << " s\n";
  PostprocessReport rep;
  rep.relative_error = s.relative_error;
  rep.flux = s.flux;
  std::cout << format_report(rep);
  std::cout << "output: " << cfg.output.directory << "\n";
  return kOk;
}

std::vector<double> parse_values(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      try {
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ConfigError("sweep value '" + tok + "' is not a number");
      }
    }
  }
  return out;
}

int cmd_sweep(const CaseOptions& o, const std::string& param, const std::vector<std::string>& raw) {
  const nlohmann::json doc = load_document(o);
  const auto values = parse_values(raw);
  RunOptions ro;
  const auto rows = run_sweep(doc, param, values, ro);
  std::printf("%-14s %-14s %-14s %-14s %-10s %s\n", "value", "rel_error", "peak_Q_MV", "peak_Q_AV", "seconds",
              "status");
  int failed = 0;
  for (const auto& r : rows) {
    std::printf("%-14.6g %-14.6g %-14.6g %-14.6g %-10.2f %s\n", r.value, r.relative_error, r.peak_q_mv,
                r.peak_q_av, r.seconds, r.status.c_str());
    failed += r.status != "ok";
  }
  return failed ? kSolver : kOk;
}

int cmd_postprocess(const std::vector<std::string>& files) {
  const TimeSeriesLog a = read_csv(files.at(0));
  if (files.size() > 1) {
    const TimeSeriesLog b = read_csv(files[1]);
    std::cout << format_report(postprocess(a, &b));
  } else {
    std::cout << format_report(postprocess(a));
  }
  return kOk;
}

int cmd_mesh_generate(const CaseOptions& o, const std::string& path) {
  const RunConfig cfg = parse_config(load_document(o));
  const TetMesh mesh = build_mesh(cfg);
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".msh") {
    write_gmsh22(path, mesh);
  } else if (ext == ".vtu") {
    export_mesh_vtu(path, mesh);
  } else {
    throw ConfigError("mesh output must end in .msh or .vtu");
  }
  const auto dm = cell_diameters(mesh);
  std::cout << "wrote " << path << ": " << mesh.num_vertices() << " vertices, " << mesh.num_cells()
            << " cells, h_min " << dm.h_min << " m, h_max " << dm.h_max << " m\n";
  return kOk;
}

int cmd_mesh_inspect(const std::string& path) {
  const TetMesh mesh = import_mesh(path);
  const auto dm = cell_diameters(mesh);
  std::map<std::string, int> faces;
  for (const auto& f : mesh.boundary_faces()) ++faces[to_string(f.tag)];
  std::cout << "vertices: " << mesh.num_vertices() << "\n"
            << "cells:    " << mesh.num_cells() << "\n"
            << "volume:   " << mesh.total_volume() << " m^3\n"
            << "h_min:    " << dm.h_min << " m\n"
            << "h_max:    " << dm.h_max << " m\n";
  for (const auto& [tag, n] : faces) std::cout << "faces[" << tag << "]: " << n << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ALE Navier-Stokes solver with resistive immersed valves"};
  app.require_subcommand(1);

  CaseOptions run_opts;
  bool dry_run = false;
  auto* run = app.add_subcommand("run", "run one simulation");
  add_case_options(run, run_opts);
  run->add_flag("--dry-run", dry_run, "validate and print the resolved configuration");

  CaseOptions sweep_opts;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "run a configuration once per parameter value");
  add_case_options(sweep, sweep_opts);
  sweep->add_option("-p,--param", sweep_param, "dotted parameter path")->required();
  sweep->add_option("-v,--values", sweep_values, "values, comma separated or repeated")->required();

  std::vector<std::string> post_files;
  auto* post = app.add_subcommand("postprocess", "metrics of one log, or a comparison of two");
  post->add_option("logs", post_files, "CSV log(s)")->required()->expected(1, 2);

  auto* mesh = app.add_subcommand("mesh", "mesh utilities");
  mesh->require_subcommand(1);
  CaseOptions gen_opts;
  std::string gen_out;
  auto* gen = mesh->add_subcommand("generate", "write the configured mesh (.msh or .vtu)");
  add_case_options(gen, gen_opts);
  gen->remove_option(gen->get_option("--output"));
  gen->add_option("file", gen_out, "output mesh file")->required();
  std::string inspect_path;
  auto* inspect = mesh->add_subcommand("inspect", "print mesh statistics");
  inspect->add_option("file", inspect_path, "mesh file (.msh or .vtu)")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(run_opts, dry_run);
    if (*sweep) return cmd_sweep(sweep_opts, sweep_param, sweep_values);
    if (*post) return cmd_postprocess(post_files);
    if (*gen) return cmd_mesh_generate(gen_opts, gen_out);
    if (*inspect) return cmd_mesh_inspect(inspect_path);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const MeshError& e) {
    std::cerr << "mesh error: " << e.what() << "\n";
    return kSolver;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kOk;
}
