#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ariis/diagnostics.hpp"
#include "ariis/mesh.hpp"
#include "ariis/solver.hpp"

namespace ariis {

struct MeshSource {
  std::string file;  ///< empty: use the generator
  CylinderGrading grading;
  double band_width = 0.006;  ///< refined width around each valve plane
};

struct OutputSettings {
  std::string directory = "output";
  std::string csv = "log.csv";
  int snapshot_stride = 0;  ///< 0 disables snapshots
  bool binary = true;
};

/// Fully parsed and validated run description.
struct RunConfig {
  std::string name;
  MeshSource mesh;
  ProblemSetup problem;
  double probe_radius = 0.0;  ///< p_LV control sphere, 0 = 0.25 R_c
  OutputSettings output;
  nlohmann::json resolved;  ///< the JSON this config was parsed from
};

/// Shipped configurations: "testA" (radial pulse) and "testB" (shortening).
nlohmann::json preset_json(const std::string& name);
RunConfig preset_test_a();
RunConfig preset_test_b();

/// Validates the whole document and throws one ConfigError listing every
/// problem found.
RunConfig parse_config(const nlohmann::json& doc);

nlohmann::json load_config_file(const std::string& path);

/// Applies "dotted.path=value". Path components may be "*" to match every
/// key of an object. The value is parsed as JSON when possible, otherwise
/// taken as a string. The override text is appended to doc["overrides"].
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Time table from a JSON value: a number, a unit string ("75 mmHg"), an
/// array of [t, v] pairs, or {"table": [...] | "csv": path, "unit": u}.
PiecewiseLinear parse_table(const nlohmann::json& value, const std::string& default_unit = "");

/// Scalar with an optional unit suffix (mmHg, Pa, kPa, m, mm, s, ms).
double parse_quantity(const nlohmann::json& value, const std::string& default_unit = "");

/// Builds the mesh described by the config (generated or imported).
TetMesh build_mesh(const RunConfig& config);

}  // namespace ariis
