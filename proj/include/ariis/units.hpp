#pragma once

namespace ariis::units {

inline constexpr double pa_per_mmhg = 133.322;

constexpr double mmhg(double value) { return value * pa_per_mmhg; }
constexpr double to_mmhg(double pascal) { return pascal / pa_per_mmhg; }

}  // namespace ariis::units
