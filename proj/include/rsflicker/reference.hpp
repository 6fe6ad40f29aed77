#pragma once

// Single-threaded, straightforward versions of the parallel kernels. They are
// kept for differential tests and as the benchmark baseline.

#include "rsflicker/defense.hpp"
#include "rsflicker/image.hpp"
#include "rsflicker/sensor.hpp"

namespace rsf::reference {

/// Per-pixel evaluation of r(i cos a - j sin a), no special cases.
Pattern render_pattern(const SensorConfig& cfg, const PulseParams& p, double tilt_deg = 0.0);

Image expose(const Image& image, const Pattern& pattern);

/// Notch filter using an O(N^2) direct DFT per line.
Image butterworth_notch(const Image& image, const FilterSpec& spec);

}  // namespace rsf::reference
