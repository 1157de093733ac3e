#include "ariis/driver.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ariis/error.hpp"
#include "ariis/log.hpp"
#include "ariis/units.hpp"

namespace ariis {

namespace fs = std::filesystem;

FluxSummary flux_summary(const TimeSeriesLog& log) {
  FluxSummary s;
  for (const auto& r : log.records()) {
    const double qm = std::abs(r.Q_MV), qa = std::abs(r.Q_AV);
    s.peak_q_mv = std::max(s.peak_q_mv, qm);
    s.peak_q_av = std::max(s.peak_q_av, qa);
    if (!r.mv_closed) s.peak_open_q = std::max(s.peak_open_q, qm);
    if (!r.av_closed) s.peak_open_q = std::max(s.peak_open_q, qa);
    if (r.chi_iso == 1) {
      s.max_iso_q_mv = std::max(s.max_iso_q_mv, qm);
      s.max_iso_q_av = std::max(s.max_iso_q_av, qa);
    }
  }
  return s;
}

std::optional<double> log_pressure_error(const TimeSeriesLog& log) {
  std::vector<double> p, ps;
  std::vector<int> chi;
  for (const auto& r : log.records()) {
    p.push_back(r.p_LV);
    ps.push_back(r.p_star);
    chi.push_back(r.chi_iso);
  }
  try {
    return relative_pressure_error(p, ps, chi);
  } catch (const SolverError&) {
    return std::nullopt;
  }
}

LogRecord make_record(const FlowSolver& solver, const StepRecord& step, double probe_radius) {
  const TetMesh& mesh = solver.mesh();
  const FluidState& st = solver.state();
  const auto valves = solver.valves_at(st.t);
  const double rc = solver.setup().geometry.radius;
  LogRecord r;
  r.t = st.t;
  r.chi_iso = step.chi_iso;
  r.mv_closed = step.states[0] == ValveState::Closed;
  r.av_closed = step.states[1] == ValveState::Closed;
  r.C_MV = step.coefficient[0];
  r.C_AV = step.coefficient[1];
  r.RI_MV = step.resistive[0];
  r.RI_AV = step.resistive[1];
  r.iterations = step.linear.iterations;
  r.residual = step.linear.residual;
  const auto& ps = solver.setup().ariis.p_star;
  r.p_star = ps.empty() ? 0.0 : ps(st.t);

  const ImmersedValve* mv = nullptr;
  const ImmersedValve* av = nullptr;
  for (const auto& v : valves) (v.id == ValveId::MV ? mv : av) = &v;
  if (mv) r.p_LA = compartment_pressure(mesh, st.p, valves, st.t, {CompartmentId::LA, {}, std::nullopt});
  if (av) r.p_AA = compartment_pressure(mesh, st.p, valves, st.t, {CompartmentId::AA, {}, std::nullopt});
  r.p_LV_mean = compartment_pressure(mesh, st.p, valves, st.t, {CompartmentId::LV, {}, std::nullopt});
  if (mv) {
    CompartmentSpec probe{CompartmentId::LV, {}, default_lv_probe(*mv, rc)};
    if (probe_radius > 0.0) probe.control->radius = probe_radius;
    r.p_LV = compartment_pressure(mesh, st.p, valves, st.t, probe);
    r.u_cv = compartment_speed(mesh, st.u, valves, st.t, probe);
    r.Q_MV = valve_flux(mesh, st.u, st.u_ale, *mv);
  } else {
    r.p_LV = r.p_LV_mean;
    r.u_cv = compartment_speed(mesh, st.u, valves, st.t, {CompartmentId::LV, {}, std::nullopt});
  }
  if (av) r.Q_AV = valve_flux(mesh, st.u, st.u_ale, *av);
  r.V_LV = ventricular_volume(mesh, valves);
  r.p_estimate = std::numeric_limits<double>::quiet_NaN();
  if (step.chi_iso == 1 && mv && av) {
    std::vector<double> coef;
    for (const auto& v : valves) coef.push_back(step.coefficient[v.id == ValveId::MV ? 0 : 1]);
    r.p_estimate = pressure_estimate(mesh, st.u, st.u_ale, valves, st.t, step.p_ext[0], step.p_ext[1], coef);
  }
  return r;
}

namespace {

std::string snapshot_name(int step) {
  std::ostringstream s;
  s << "snapshot_" << std::setw(5) << std::setfill('0') << step << ".vtu";
  return s.str();
}

void write_snapshot(const FlowSolver& solver, const fs::path& dir, int step, bool binary,
                    std::vector<std::pair<double, std::string>>& index) {
  const auto& st = solver.state();
  const std::string name = snapshot_name(step);
  const auto valves = solver.valves_at(st.t);
  export_vtu(solver.mesh(), {st.u, st.p, st.d, st.u_ale}, valves, st.t, (dir / name).string(), binary);
  index.emplace_back(st.t, name);
}

void write_pvd(const fs::path& path, const std::vector<std::pair<double, std::string>>& index) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "<?xml version=\"1.0\"?>\n<VTKFile type=\"Collection\" version=\"1.0\">\n  <Collection>\n"
      << std::setprecision(17);
  for (const auto& [t, name] : index) out << "    <DataSet timestep=\"" << t << "\" file=\"" << name << "\"/>\n";
  out << "  </Collection>\n</VTKFile>\n";
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

}  // namespace

RunSummary run_simulation(const RunConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  TetMesh mesh = build_mesh(config);
  for (const auto& v : config.problem.valves) band_resolution_ratio(v, mesh);

  const fs::path dir = config.output.directory;
  if (options.write_files) {
    ensure_directory(dir);
    std::ofstream out(dir / "resolved_config.json");
    if (!out) throw IoError("cannot write " + (dir / "resolved_config.json").string());
    out << config.resolved.dump(2) << '\n';
  }

  FlowSolver solver(std::move(mesh), config.problem);
  const auto& prm = config.problem.params;
  const int steps = static_cast<int>(std::llround(prm.T / prm.dt));
  const int stride = config.output.snapshot_stride;
  RunSummary summary;
  std::vector<std::pair<double, std::string>> index;
  if (options.write_files && stride > 0) write_snapshot(solver, dir, 0, config.output.binary, index);

  for (int n = 1; n <= steps; ++n) {
    const StepRecord rec = solver.step();
    const LogRecord row = make_record(solver, rec, config.probe_radius);
    summary.log.append(row);
    if (options.on_step) options.on_step(row);
    if (options.write_files && stride > 0 && n % stride == 0) {
      write_snapshot(solver, dir, n, config.output.binary, index);
    }
  }
  if (options.write_files) {
    export_csv(summary.log, (dir / config.output.csv).string());
    if (!index.empty()) write_pvd(dir / "snapshots.pvd", index);
  }
  summary.snapshots = static_cast<int>(index.size());
  summary.relative_error = log_pressure_error(summary.log);
  summary.flux = flux_summary(summary.log);
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "value,relative_pressure_error,peak_abs_Q_MV,peak_abs_Q_AV,wall_seconds,status\n" << std::setprecision(17);
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.value << ',' << r.relative_error << ',' << r.peak_q_mv << ',' << r.peak_q_av << ',' << r.seconds << ','
        << status << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<SweepRow> run_sweep(const nlohmann::json& base, const std::string& parameter,
                                const std::vector<double>& values, const RunOptions& options) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  // Validate the parameter path once before running anything.
  {
    nlohmann::json probe = base;
    std::ostringstream a;
    a << parameter << '=' << std::setprecision(17) << values.front();
    apply_override(probe, a.str());
    parse_config(probe);
  }
  const RunConfig base_cfg = parse_config(base);
  const fs::path root = base_cfg.output.directory;
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepRow row;
    row.value = values[i];
    row.relative_error = std::numeric_limits<double>::quiet_NaN();
    const auto start = std::chrono::steady_clock::now();
    try {
      nlohmann::json doc = base;
      std::ostringstream a;
      a << parameter << '=' << std::setprecision(17) << values[i];
      apply_override(doc, a.str());
      doc["output"]["directory"] = (root / ("sweep_" + std::to_string(i))).string();
      const RunConfig cfg = parse_config(doc);
      const RunSummary s = run_simulation(cfg, options);
      if (s.relative_error) row.relative_error = *s.relative_error;
      row.peak_q_mv = s.flux.peak_q_mv;
      row.peak_q_av = s.flux.peak_q_av;
    } catch (const Error& e) {
      row.status = std::string("failed: ") + e.what();
      warn("sweep case " + std::to_string(i) + " failed: " + e.what());
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  if (options.write_files) {
    ensure_directory(root);
    write_sweep_csv(rows, (root / "sweep.csv").string());
  }
  return rows;
}

PostprocessReport postprocess(const TimeSeriesLog& log, const TimeSeriesLog* other) {
  PostprocessReport rep;
  rep.relative_error = log_pressure_error(log);
  rep.flux = flux_summary(log);
  if (other) {
    const auto& a = log.records();
    const auto& b = other->records();
    if (a.size() != b.size()) throw ConfigError("logs have different lengths");
    double dp = 0.0, du = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i].t - b[i].t) > 1e-12 * std::max(1.0, std::abs(a[i].t))) {
        throw ConfigError("logs do not share the time column");
      }
      peak = std::max({peak, a[i].u_cv, b[i].u_cv});
      if (a[i].chi_iso == 1 || b[i].chi_iso == 1) continue;
      dp = std::max(dp, std::abs(a[i].p_LV - b[i].p_LV));
      du = std::max(du, std::abs(a[i].u_cv - b[i].u_cv));
    }
    rep.max_out_of_iso_dp = dp;
    rep.max_out_of_iso_du_rel = peak > 0.0 ? du / peak : 0.0;
  }
  return rep;
}

std::string format_report(const PostprocessReport& r) {
  std::ostringstream os;
  os << std::setprecision(6);
  if (r.relative_error) {
    os << "relative_pressure_error      " << *r.relative_error << '\n';
  } else {
    os << "relative_pressure_error      n/a (no isovolumetric window)\n";
  }
  os << "peak |Q_MV|                  " << r.flux.peak_q_mv << " m^3/s\n"
     << "peak |Q_AV|                  " << r.flux.peak_q_av << " m^3/s\n"
     << "peak open-valve |Q|          " << r.flux.peak_open_q << " m^3/s\n"
     << "max iso |Q_MV|               " << r.flux.max_iso_q_mv << " m^3/s\n"
     << "max iso |Q_AV|               " << r.flux.max_iso_q_av << " m^3/s\n";
  if (r.max_out_of_iso_dp) {
    os << "max out-of-iso |dp_LV|       " << units::to_mmhg(*r.max_out_of_iso_dp) << " mmHg\n"
       << "max out-of-iso |du_cv|/peak  " << *r.max_out_of_iso_du_rel << '\n';
  }
  return os.str();
}

}  // namespace ariis
