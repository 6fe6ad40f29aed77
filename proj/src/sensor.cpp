#include "rsflicker/sensor.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rsflicker/rotation.hpp"

namespace rsf {

void SensorConfig::validate() const {
  if (!(interline_delay_us > 0.0) || !std::isfinite(interline_delay_us))
    throw std::invalid_argument("interline delay must be positive");
  if (!(exposure_us > 0.0) || !std::isfinite(exposure_us))
    throw std::invalid_argument("exposure duration must be positive");
  if (!(gain > 0.0) || !std::isfinite(gain)) throw std::invalid_argument("conversion gain must be positive");
  if (rows == 0 || cols == 0) throw std::invalid_argument("sensor rows and cols must be positive");
  if (!std::isfinite(start_us)) throw std::invalid_argument("sensor start time must be finite");
}

double profile_at(const SensorConfig& cfg, const PulseParams& p, double u) {
  return cfg.gain * integrate_level(p, cfg.row_start_us(u), cfg.exposure_us);
}

double row_gain(const SensorConfig& cfg, const PulseParams& p, std::size_t row) {
  if (row >= cfg.rows)
    throw std::out_of_range("row " + std::to_string(row) + " outside sensor of " +
                            std::to_string(cfg.rows) + " rows");
  return profile_at(cfg, p, static_cast<double>(row));
}

std::vector<double> render_profile(const SensorConfig& cfg, const PulseParams& p) {
  cfg.validate();
  p.validate();
  std::vector<double> prof(cfg.rows);
  const auto n = static_cast<std::ptrdiff_t>(cfg.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) prof[i] = profile_at(cfg, p, static_cast<double>(i));
  return prof;
}

Pattern render_pattern(const SensorConfig& cfg, const PulseParams& p, double tilt_deg) {
  if (!(std::abs(tilt_deg) <= 90.0))
    throw std::invalid_argument("tilt angle must lie in [-90, 90] degrees");
  Pattern pat;
  pat.rows = cfg.rows;
  pat.cols = cfg.cols;
  pat.tilt_deg = tilt_deg;
  pat.sensor = cfg;
  pat.pulse = p;
  pat.profile = render_profile(cfg, p);
  pat.gains.resize(cfg.rows * cfg.cols);

  const auto [c, s] = exact_cos_sin(tilt_deg);
  const auto n = static_cast<std::ptrdiff_t>(cfg.rows);
  const std::size_t w = cfg.cols;
  if (s == 0.0 && c == 1.0) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < w; ++j) pat.gains[i * w + j] = pat.profile[i];
  } else if (c == 0.0) {
    // Quarter turn: gains depend on the column only.
    std::vector<double> col(w);
    for (std::size_t j = 0; j < w; ++j) col[j] = profile_at(cfg, p, -s * static_cast<double>(j));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < w; ++j) pat.gains[i * w + j] = col[j];
  } else {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < w; ++j)
        pat.gains[i * w + j] =
            profile_at(cfg, p, static_cast<double>(i) * c - static_cast<double>(j) * s);
  }
  return pat;
}

Image expose(const Image& image, const Pattern& pattern) {
  if (image.rows() != pattern.rows || image.cols() != pattern.cols)
    throw std::invalid_argument("image " + std::to_string(image.rows()) + "x" +
                                std::to_string(image.cols()) + " does not match pattern " +
                                std::to_string(pattern.rows) + "x" + std::to_string(pattern.cols));
  Image out(image.rows(), image.cols(), image.channels());
  const std::size_t ch = image.channels();
  const std::size_t w = image.cols();
  const auto n = static_cast<std::ptrdiff_t>(image.rows());
  auto src = image.data();
  auto dst = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      const double g = pattern.gains[i * w + j];
      const std::size_t base = (i * w + j) * ch;
      for (std::size_t k = 0; k < ch; ++k) dst[base + k] = src[base + k] * g;
    }
  return out;
}

Image pattern_preview(const Pattern& pattern) {
  Image out(pattern.rows, pattern.cols, 1);
  const double scale = 1.0 / pattern.full_scale();
  auto dst = out.data();
  for (std::size_t k = 0; k < pattern.gains.size(); ++k) dst[k] = pattern.gains[k] * scale;
  return out;
}

void to_json(nlohmann::json& j, const SensorConfig& cfg) {
  j = nlohmann::json{{"interline_delay_us", cfg.interline_delay_us},
                     {"exposure_us", cfg.exposure_us},
                     {"gain", cfg.gain},
                     {"rows", cfg.rows},
                     {"cols", cfg.cols},
                     {"start_us", cfg.start_us}};
}

void from_json(const nlohmann::json& j, SensorConfig& cfg) {
  SensorConfig d;
  cfg.interline_delay_us = j.value("interline_delay_us", d.interline_delay_us);
  cfg.exposure_us = j.value("exposure_us", d.exposure_us);
  cfg.gain = j.value("gain", d.gain);
  cfg.rows = j.value("rows", d.rows);
  cfg.cols = j.value("cols", d.cols);
  cfg.start_us = j.value("start_us", d.start_us);
  cfg.validate();
}

void to_json(nlohmann::json& j, const Pattern& pattern) {
  j = nlohmann::json{{"profile", pattern.profile},
                     {"tilt_deg", pattern.tilt_deg},
                     {"sensor", pattern.sensor},
                     {"pulse", pattern.pulse},
                     {"full_scale", pattern.full_scale()}};
}

}  // namespace rsf
