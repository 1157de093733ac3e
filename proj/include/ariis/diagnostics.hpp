#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ariis/mesh.hpp"
#include "ariis/valves.hpp"

namespace ariis {

enum class CompartmentId { LA, LV, AA };

struct ControlSphere {
  Vec3 center;
  double radius = 0.0;
};

/// Region used for averaging. Membership is by the signed distance of cell
/// centroids to the (current) valve planes, unless `cells` lists the cells
/// explicitly. `control` restricts the region to cells whose centroid lies
/// in a sphere.
struct CompartmentSpec {
  CompartmentId id = CompartmentId::LV;
  std::vector<int> cells;
  std::optional<ControlSphere> control;
};

/// Cells of the region. LA: phi_MV >= 0; AA: phi_AV >= 0; LV: negative for
/// every valve present.
std::vector<int> compartment_cells(const TetMesh& mesh, std::span<const ImmersedValve> valves,
                                   const CompartmentSpec& spec);

/// Volume average of the P1 field p over the region, excluding cells that
/// intersect the band of a valve closed at t. Throws SolverError if nothing
/// is left.
double compartment_pressure(const TetMesh& mesh, std::span<const double> p, std::span<const ImmersedValve> valves,
                            double t, const CompartmentSpec& spec);

/// Volume average of |u| (cell means) over the region, same exclusion rule.
double compartment_speed(const TetMesh& mesh, std::span<const Vec3> u, std::span<const ImmersedValve> valves,
                         double t, const CompartmentSpec& spec);

/// Current volume of the LV cells (centroid rule).
double ventricular_volume(const TetMesh& mesh, std::span<const ImmersedValve> valves);

/// Default p_LV probe: sphere of radius 0.25 R_c on the axis, one band width
/// (2 eps) into the ventricle from the MV plane.
ControlSphere default_lv_probe(const ImmersedValve& mv, double radius_c);

/// (A_MV p_LA + A_AV p_AA + sum_k RI_k) / (A_MV + A_AV) with the resistive
/// integrals of (u, u_ale). With `coefficients` (one per valve, in order) the
/// augmentation loads A_k C_k are added to the numerator. Throws SolverError
/// if a valve is open at t.
double pressure_estimate(const TetMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u_ale,
                         std::span<const ImmersedValve> valves, double t, double p_LA, double p_AA,
                         std::span<const double> coefficients = {});

/// max_iso |p_LV - p*| / max_iso |p*|. Throws SolverError for an empty iso window.
double relative_pressure_error(std::span<const double> p_lv, std::span<const double> p_star,
                               std::span<const int> chi_iso);

/// Rate of (u - u_ale).n through the plane of `valve`, integrated on the
/// exact plane/mesh intersection. Vertices with phi = 0 count as + side.
double valve_flux(const TetMesh& mesh, std::span<const Vec3> u, std::span<const Vec3> u_ale,
                  const ImmersedValve& valve);

/// One row of the per-step log (SI units).
struct LogRecord {
  double t = 0.0;
  double p_LA = 0.0;
  double p_LV = 0.0;  ///< control-volume probe
  double p_LV_mean = 0.0;  ///< whole compartment
  double p_AA = 0.0;
  double p_star = 0.0;
  int chi_iso = 0;
  int mv_closed = 0;
  int av_closed = 0;
  double C_MV = 0.0;
  double C_AV = 0.0;
  double RI_MV = 0.0;
  double RI_AV = 0.0;
  double p_estimate = 0.0;  ///< NaN outside iso phases
  double V_LV = 0.0;
  double Q_MV = 0.0;
  double Q_AV = 0.0;
  double u_cv = 0.0;  ///< mean speed in the probe
  int iterations = 0;
  double residual = 0.0;
};

class TimeSeriesLog {
 public:
  /// Throws SolverError unless t increases strictly.
  void append(const LogRecord& r);
  const std::vector<LogRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  std::vector<double> column(const std::string& name) const;

  static const std::vector<std::string>& header();

 private:
  std::vector<LogRecord> records_;
};

/// Writes the header and one row per record with 17 significant digits.
void export_csv(const TimeSeriesLog& log, const std::string& path);
/// Throws IoError if unreadable, ConfigError on a header mismatch.
TimeSeriesLog read_csv(const std::string& path);

struct SnapshotFields {
  std::span<const Vec3> u;
  std::span<const double> p;
  std::span<const Vec3> d;
  std::span<const Vec3> u_ale;
};

/// VTU snapshot with velocity, pressure, displacement, ALE velocity and a
/// per-cell indicator of closed valve bands.
void export_vtu(const TetMesh& mesh, const SnapshotFields& fields, std::span<const ImmersedValve> valves, double t,
                const std::string& path, bool binary = true);

}  // namespace ariis
