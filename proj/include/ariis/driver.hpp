#pragma once

#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ariis/config.hpp"
#include "ariis/diagnostics.hpp"
#include "ariis/solver.hpp"

namespace ariis {

/// Peak flux statistics of a log.
struct FluxSummary {
  double peak_q_mv = 0.0;         ///< max |Q_MV| over the run
  double peak_q_av = 0.0;
  double peak_open_q = 0.0;       ///< max |Q_k| over steps where valve k is open
  double max_iso_q_mv = 0.0;      ///< max |Q_MV| while both valves are closed
  double max_iso_q_av = 0.0;
};

FluxSummary flux_summary(const TimeSeriesLog& log);

/// relative_pressure_error of the probe pressure, if the log has an iso window.
std::optional<double> log_pressure_error(const TimeSeriesLog& log);

struct RunOptions {
  bool write_files = true;
  std::function<void(const LogRecord&)> on_step;
};

struct RunSummary {
  TimeSeriesLog log;
  std::optional<double> relative_error;
  FluxSummary flux;
  double wall_seconds = 0.0;
  int snapshots = 0;
};

/// Diagnostics of the solver's current state after `step` was accepted.
LogRecord make_record(const FlowSolver& solver, const StepRecord& step, double probe_radius);

/// Time loop from 0 to T. With write_files the output directory receives
/// resolved_config.json, the CSV log and VTU snapshots (step 0 and every
/// stride). Solver failures propagate as SolverError naming step and time.
RunSummary run_simulation(const RunConfig& config, const RunOptions& options = {});

struct SweepRow {
  double value = 0.0;
  double relative_error = 0.0;  ///< NaN if undefined or failed
  double peak_q_mv = 0.0;
  double peak_q_av = 0.0;
  double seconds = 0.0;
  std::string status = "ok";
};

/// Runs `base` once per value of `parameter` (a --set path) in
/// <output>/sweep_<i>, writes <output>/sweep.csv and returns the rows.
/// A failing case is recorded and the sweep continues.
std::vector<SweepRow> run_sweep(const nlohmann::json& base, const std::string& parameter,
                                const std::vector<double>& values, const RunOptions& options = {});

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

struct PostprocessReport {
  std::optional<double> relative_error;
  FluxSummary flux;
  /// Only with a second log: out-of-iso discrepancies.
  std::optional<double> max_out_of_iso_dp;        ///< Pa
  std::optional<double> max_out_of_iso_du_rel;    ///< |du_cv| / peak u_cv
};

/// Compares two logs when `other` is given; they must share the time column.
PostprocessReport postprocess(const TimeSeriesLog& log, const TimeSeriesLog* other = nullptr);

std::string format_report(const PostprocessReport& report);

}  // namespace ariis
