#include "rsflicker/reference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "filter_axis.hpp"
#include "rsflicker/rotation.hpp"

namespace rsf::reference {

Pattern render_pattern(const SensorConfig& cfg, const PulseParams& p, double tilt_deg) {
  cfg.validate();
  p.validate();
  if (!(std::abs(tilt_deg) <= 90.0)) throw std::invalid_argument("tilt angle must lie in [-90, 90] degrees");
  Pattern pat;
  pat.rows = cfg.rows;
  pat.cols = cfg.cols;
  pat.tilt_deg = tilt_deg;
  pat.sensor = cfg;
  pat.pulse = p;
  pat.profile.resize(cfg.rows);
  for (std::size_t i = 0; i < cfg.rows; ++i) pat.profile[i] = profile_at(cfg, p, static_cast<double>(i));
  const auto [c, s] = exact_cos_sin(tilt_deg);
  pat.gains.resize(cfg.rows * cfg.cols);
  for (std::size_t i = 0; i < cfg.rows; ++i)
    for (std::size_t j = 0; j < cfg.cols; ++j)
      pat.gains[i * cfg.cols + j] = profile_at(cfg, p, static_cast<double>(i) * c - static_cast<double>(j) * s);
  return pat;
}

Image expose(const Image& image, const Pattern& pattern) {
  if (image.rows() != pattern.rows || image.cols() != pattern.cols)
    throw std::invalid_argument("image does not match pattern dimensions");
  Image out = image;
  for (std::size_t i = 0; i < image.rows(); ++i)
    for (std::size_t j = 0; j < image.cols(); ++j)
      for (std::size_t c = 0; c < image.channels(); ++c) out.at(i, j, c) *= pattern.at(i, j);
  return out;
}

namespace {

std::vector<double> filter_line(const std::vector<double>& x, const FilterSpec& spec) {
  const std::size_t n = x.size();
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<std::complex<double>> spectrum(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m)
      acc += x[m] * std::polar(1.0, -two_pi * static_cast<double>((k * m) % n) / static_cast<double>(n));
    // Bin k and n-k share the gain of the non-negative frequency min(k, n-k)/n.
    spectrum[k] = acc * notch_gain(spec, static_cast<double>(std::min(k, n - k)) / static_cast<double>(n));
  }
  std::vector<double> y(n);
  for (std::size_t m = 0; m < n; ++m) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k)
      acc += spectrum[k] * std::polar(1.0, two_pi * static_cast<double>((k * m) % n) / static_cast<double>(n));
    y[m] = std::max(0.0, acc.real() / static_cast<double>(n));
  }
  return y;
}

}  // namespace

Image butterworth_notch(const Image& image, const FilterSpec& spec) {
  const auto axis = detail::resolve_axis(spec);
  Image out(image.rows(), image.cols(), image.channels());
  if (axis.along_columns) {
    for (std::size_t j = 0; j < image.cols(); ++j)
      for (std::size_t c = 0; c < image.channels(); ++c) {
        std::vector<double> line(image.rows());
        for (std::size_t i = 0; i < image.rows(); ++i) line[i] = image.at(i, j, c);
        const auto y = filter_line(line, axis.spec);
        for (std::size_t i = 0; i < image.rows(); ++i) out.at(i, j, c) = y[i];
      }
  } else {
    for (std::size_t i = 0; i < image.rows(); ++i)
      for (std::size_t c = 0; c < image.channels(); ++c) {
        std::vector<double> line(image.cols());
        for (std::size_t j = 0; j < image.cols(); ++j) line[j] = image.at(i, j, c);
        const auto y = filter_line(line, axis.spec);
        for (std::size_t j = 0; j < image.cols(); ++j) out.at(i, j, c) = y[j];
      }
  }
  return out;
}

}  // namespace rsf::reference
