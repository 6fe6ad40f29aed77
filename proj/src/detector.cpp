#include "rsflicker/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace rsf {

void Embedding::validate() const {
  if (vector.empty()) throw std::invalid_argument("embedding has zero dimension");
  for (double v : vector)
    if (!std::isfinite(v)) throw std::invalid_argument("embedding has a non-finite entry");
}

void VerifierConfig::validate() const {
  if (!(threshold > 0.0)) throw std::invalid_argument("verification threshold must be positive");
}

DetectorVerdict stub_fringe_detect(const Image& image, RowBand band, double dark_thresh,
                                   std::size_t min_run) {
  if (band.begin >= band.end) throw std::invalid_argument("detector band is empty");
  if (band.end > image.rows()) throw std::invalid_argument("detector band exceeds image rows");
  const auto profile = row_luminance_profile(image);
  double mean = 0.0;
  for (double v : profile) mean += v;
  mean /= static_cast<double>(profile.size());
  const double cut = dark_thresh * mean;

  std::size_t run = 0;
  for (std::size_t i = band.begin; i < band.end; ++i) {
    run = profile[i] < cut ? run + 1 : 0;
    if (run >= min_run && min_run > 0) return DetectorVerdict::absent();
  }
  return DetectorVerdict::present();
}

Embedding stub_profile_embed(const Image& image, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be at least 1");
  const auto profile = row_luminance_profile(image);
  const std::size_t h = profile.size();
  Embedding e;
  e.vector.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const std::size_t lo = k * h / dim;
    const std::size_t hi = std::max(lo + 1, (k + 1) * h / dim);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += profile[i];
    e.vector[k] = acc / static_cast<double>(hi - lo);
  }
  double norm = 0.0;
  for (double v : e.vector) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0.0)
    for (double& v : e.vector) v /= norm;
  return e;
}

double feature_distance(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("embedding dimensions differ: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  double acc = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const double d = a.vector[k] - b.vector[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

RowBand FringeDetectorStub::band_for(std::size_t rows) const {
  const auto r = static_cast<double>(rows);
  return {static_cast<std::size_t>(std::floor(opts_.band_begin_fraction * r)),
          static_cast<std::size_t>(std::floor(opts_.band_end_fraction * r))};
}

DetectorVerdict FringeDetectorStub::detect(const Image& image) {
  return stub_fringe_detect(image, band_for(image.rows()), opts_.dark_thresh, opts_.min_run);
}

}  // namespace rsf
