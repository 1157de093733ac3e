#include "ariis/table.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ariis/error.hpp"

namespace ariis {

PiecewiseLinear::PiecewiseLinear(double value) : times_{0.0}, values_{value} {}

PiecewiseLinear::PiecewiseLinear(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty() || times_.size() != values_.size()) throw ConfigError("table needs matching, non-empty columns");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1])) throw ConfigError("table times must be strictly increasing");
  }
}

double PiecewiseLinear::operator()(double t) const {
  if (times_.empty()) throw ConfigError("evaluating an empty table");
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - times_.begin());
  const double s = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
  return values_[i - 1] + s * (values_[i] - values_[i - 1]);
}

bool PiecewiseLinear::covers(double t0, double t1) const {
  if (times_.empty()) return false;
  if (is_constant()) return true;
  constexpr double slack = 1e-12;
  return times_.front() <= t0 + slack && times_.back() >= t1 - slack;
}

PiecewiseLinear PiecewiseLinear::scaled(double factor) const {
  PiecewiseLinear out = *this;
  for (double& v : out.values_) v *= factor;
  return out;
}

PiecewiseLinear read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open table file " + path);
  std::vector<double> t, v;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a = 0.0, b = 0.0;
    if (!(ss >> a >> b)) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("malformed table row in " + path + ": " + line);
    }
    first = false;
    t.push_back(a);
    v.push_back(b);
  }
  return {std::move(t), std::move(v)};
}

}  // namespace ariis
