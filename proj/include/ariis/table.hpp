#pragma once

#include <string>
#include <vector>

namespace ariis {

/// Piecewise-linear function of time given by breakpoints; constant
/// extrapolation outside the breakpoint range.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  /// Constant function.
  explicit PiecewiseLinear(double value);
  /// Breakpoint times must be strictly increasing; at least one point.
  PiecewiseLinear(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  bool empty() const { return times_.empty(); }
  bool is_constant() const { return times_.size() == 1; }

  /// True if a multi-point table spans [t0, t1] (constants always do).
  bool covers(double t0, double t1) const;

  PiecewiseLinear scaled(double factor) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Reads a two-column CSV (time, value). Lines starting with '#' and a
/// non-numeric header line are skipped. Throws IoError / ConfigError.
PiecewiseLinear read_table_csv(const std::string& path);

}  // namespace ariis
