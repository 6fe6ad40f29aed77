#include "rsflicker/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace rsf {
namespace {

// Portable uniform draw in [0,1): the raw mt19937_64 output is fixed by the
// standard, the distribution classes are not.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::mt19937_64 gen_;
};

struct Ellipse {
  double cy, cx, ry, rx;
  double r2(double i, double j) const {
    const double dy = (i - cy) / ry;
    const double dx = (j - cx) / rx;
    return dy * dy + dx * dx;
  }
};

}  // namespace

FeatureBand synth_feature_band(std::size_t rows) {
  return {static_cast<std::size_t>(std::floor(0.4 * rows)),
          static_cast<std::size_t>(std::floor(0.6 * rows))};
}

Image synth_face(std::uint64_t seed, std::size_t rows, std::size_t cols) {
  if (rows < 64 || cols < 64) throw std::invalid_argument("synthetic face needs at least 64x64 pixels");
  Uniform u(seed);
  const double H = static_cast<double>(rows);
  const double W = static_cast<double>(cols);

  const double background = u(0.12, 0.24);
  const double skin = u(0.6, 0.85);
  const double band_dim = u(0.7, 0.85);
  const Ellipse face{H * u(0.48, 0.53), W * u(0.46, 0.54), H * u(0.34, 0.42), W * u(0.22, 0.3)};
  const double eye_row = H * u(0.45, 0.5);
  const double eye_gap = W * u(0.07, 0.1);
  const Ellipse eye_l{eye_row, face.cx - eye_gap, H * u(0.02, 0.035), W * u(0.03, 0.045)};
  const Ellipse eye_r{eye_row, face.cx + eye_gap, eye_l.ry, eye_l.rx};
  const double eye_tone = u(0.05, 0.2);
  const double brow_row = eye_row - H * u(0.035, 0.05);
  const Ellipse brow_l{brow_row, eye_l.cx, H * 0.008, eye_l.rx * 1.3};
  const Ellipse brow_r{brow_row, eye_r.cx, H * 0.008, eye_r.rx * 1.3};
  const Ellipse mouth{H * u(0.66, 0.72), face.cx, H * u(0.015, 0.03), W * u(0.05, 0.09)};
  const double mouth_tone = u(0.25, 0.4);
  const double hair_line = face.cy - face.ry * u(0.65, 0.85);
  const double hair_tone = u(0.05, 0.15);

  const auto band = synth_feature_band(rows);
  Image img(rows, cols, 1, background);
  for (std::size_t i = 0; i < rows; ++i) {
    const double y = static_cast<double>(i) + 0.5;
    for (std::size_t j = 0; j < cols; ++j) {
      const double x = static_cast<double>(j) + 0.5;
      const double f = face.r2(y, x);
      if (f > 1.0) continue;
      double v = skin * (1.0 - 0.25 * f);
      if (y < hair_line) v = hair_tone;
      if (i >= band.begin && i < band.end) v *= band_dim;
      if (eye_l.r2(y, x) <= 1.0 || eye_r.r2(y, x) <= 1.0) v = eye_tone;
      if (brow_l.r2(y, x) <= 1.0 || brow_r.r2(y, x) <= 1.0) v = hair_tone;
      if (mouth.r2(y, x) <= 1.0) v = mouth_tone;
      img.at(i, j) = std::max(v, 0.0);
    }
  }
  return img;
}

}  // namespace rsf
