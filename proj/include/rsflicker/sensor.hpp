#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsflicker/image.hpp"
#include "rsflicker/signal.hpp"

namespace rsf {

/// Rolling-shutter camera. Row i starts integrating at start_us + i * interline_delay_us
/// and integrates for exposure_us; `gain` converts integrated luminance to pixel value.
struct SensorConfig {
  double interline_delay_us = 25.0;
  double exposure_us = 250.0;
  double gain = 1.0;
  std::size_t rows = 960;
  std::size_t cols = 1280;
  double start_us = 0.0;

  void validate() const;
  double row_start_us(double row) const { return start_us + row * interline_delay_us; }
};

/// Multiplicative gain field produced by a modulated light over one frame.
struct Pattern {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> gains;    // row-major rows x cols
  std::vector<double> profile;  // r(i), one entry per row
  double tilt_deg = 0.0;
  SensorConfig sensor;
  PulseParams pulse;

  double at(std::size_t i, std::size_t j) const { return gains[i * cols + j]; }
  /// Gain of a fully lit row: gain * level_on * exposure.
  double full_scale() const { return sensor.gain * pulse.level_on * sensor.exposure_us; }
};

double row_gain(const SensorConfig& cfg, const PulseParams& p, std::size_t row);

/// r(u) for a real-valued row coordinate u.
double profile_at(const SensorConfig& cfg, const PulseParams& p, double u);

std::vector<double> render_profile(const SensorConfig& cfg, const PulseParams& p);

/// gains(i, j) = r(i cos a - j sin a). Rows are rendered in parallel.
Pattern render_pattern(const SensorConfig& cfg, const PulseParams& p, double tilt_deg = 0.0);

/// Hadamard product image * pattern, applied to every channel. No clamping.
Image expose(const Image& image, const Pattern& pattern);

/// Grayscale preview of the pattern, normalized by full_scale().
Image pattern_preview(const Pattern& pattern);

void to_json(nlohmann::json& j, const SensorConfig& cfg);
void from_json(const nlohmann::json& j, SensorConfig& cfg);
/// Profile, tilt and the configuration echo; gains are omitted (reproducible from these).
void to_json(nlohmann::json& j, const Pattern& pattern);

}  // namespace rsf
