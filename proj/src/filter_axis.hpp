#pragma once

#include <cmath>

#include "rsflicker/defense.hpp"
#include "rsflicker/rotation.hpp"

namespace rsf::detail {

// A fringe field r(i cos a - j sin a) seen along one column is periodic in i
// with frequency f0 |cos a|; along one row, periodic in j with f0 |sin a|.
// The axis with the larger projection is filtered.
struct FilterAxis {
  bool along_columns = true;
  FilterSpec spec;
};

inline FilterAxis resolve_axis(const FilterSpec& spec) {
  spec.validate();
  const auto [c, s] = exact_cos_sin(spec.tilt_deg);
  FilterAxis axis;
  axis.along_columns = std::abs(c) >= std::abs(s);
  const double proj = axis.along_columns ? std::abs(c) : std::abs(s);
  axis.spec = spec;
  axis.spec.tilt_deg = 0.0;
  axis.spec.center_cpr = spec.center_cpr * proj;
  axis.spec.bandwidth_cpr = spec.bandwidth_cpr * proj;
  return axis;
}

}  // namespace rsf::detail
