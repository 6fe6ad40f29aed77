#include "rsflicker/defense.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <fftw3.h>
#include <nlohmann/json.hpp>
#include <omp.h>

#include "rsflicker/attack.hpp"
#include "filter_axis.hpp"

namespace rsf {
namespace {

// Distance of x to the nearest integer: where a harmonic lands after sampling.
double folded(double x) { return std::abs(x - std::round(x)); }

struct FftwBuffers {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  explicit FftwBuffers(std::size_t n) : real(fftw_alloc_real(n)), spec(fftw_alloc_complex(n / 2 + 1)) {}
  ~FftwBuffers() {
    fftw_free(real);
    fftw_free(spec);
  }
  FftwBuffers(const FftwBuffers&) = delete;
  FftwBuffers& operator=(const FftwBuffers&) = delete;
};

// Plan creation is not thread-safe in FFTW; plans are made once up front and
// then executed on per-thread buffers.
struct FftwPlans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  explicit FftwPlans(std::size_t n) {
    FftwBuffers scratch(n);
    const int len = static_cast<int>(n);
#pragma omp critical(rsflicker_fftw_planner)
    {
      forward = fftw_plan_dft_r2c_1d(len, scratch.real, scratch.spec, FFTW_ESTIMATE);
      inverse = fftw_plan_dft_c2r_1d(len, scratch.spec, scratch.real, FFTW_ESTIMATE);
    }
  }
  ~FftwPlans() {
#pragma omp critical(rsflicker_fftw_planner)
    {
      fftw_destroy_plan(forward);
      fftw_destroy_plan(inverse);
    }
  }
  FftwPlans(const FftwPlans&) = delete;
  FftwPlans& operator=(const FftwPlans&) = delete;
};

}  // namespace

void FilterSpec::validate() const {
  if (!(center_cpr > 0.0 && center_cpr < 0.5))
    throw std::invalid_argument("notch center must lie in (0, 0.5) cycles/row, got " + std::to_string(center_cpr));
  if (!(bandwidth_cpr > 0.0)) throw std::invalid_argument("notch bandwidth must be positive");
  if (order < 1) throw std::invalid_argument("Butterworth order must be at least 1");
  if (harmonics < 1) throw std::invalid_argument("at least one harmonic must be notched");
  if (!(std::abs(tilt_deg) <= 90.0)) throw std::invalid_argument("tilt must lie in [-90, 90]");
}

FilterSpec FilterSpec::tuned(double center_cpr, double tilt_deg) {
  FilterSpec s{center_cpr, center_cpr / 4.0, 4, 3, tilt_deg};
  s.validate();
  return s;
}

double notch_gain(const FilterSpec& spec, double f) {
  f = folded(f);
  if (f == 0.0) return 1.0;
  const double half = spec.bandwidth_cpr / 2.0;
  double g = 1.0;
  for (int h = 1; h <= spec.harmonics; ++h) {
    const double x = (f - folded(h * spec.center_cpr)) / half;
    g *= 1.0 - 1.0 / (1.0 + std::pow(x * x, spec.order));
  }
  return g;
}

double estimate_fringe_frequency(const Image& image) {
  if (image.rows() < 16) throw std::invalid_argument("fringe estimation needs at least 16 rows");
  auto profile = row_luminance_profile(image);
  const std::size_t n = profile.size();
  double mean = 0.0;
  for (double v : profile) mean += v;
  mean /= static_cast<double>(n);
  double spread = 0.0;
  for (double& v : profile) {
    v -= mean;
    spread = std::max(spread, std::abs(v));
  }
  if (spread <= 1e-12 * std::max(1.0, std::abs(mean))) throw NoFringeDetected("row profile is constant");

  FftwPlans plans(n);
  FftwBuffers buf(n);
  std::copy(profile.begin(), profile.end(), buf.real);
  fftw_execute_dft_r2c(plans.forward, buf.real, buf.spec);
  std::size_t best = 0;
  double best_mag = -1.0;
  // Bins strictly inside (0, 0.5).
  for (std::size_t k = 1; 2 * k < n; ++k) {
    const double mag = std::hypot(buf.spec[k][0], buf.spec[k][1]);
    if (mag > best_mag * (1.0 + 1e-12)) {
      best_mag = mag;
      best = k;
    }
  }
  if (best == 0) throw NoFringeDetected("profile too short for a fringe peak");
  return static_cast<double>(best) / static_cast<double>(n);
}

Image butterworth_notch(const Image& image, const FilterSpec& spec) {
  const auto axis = detail::resolve_axis(spec);
  const std::size_t rows = image.rows();
  const std::size_t cols = image.cols();
  const std::size_t ch = image.channels();
  const std::size_t n = axis.along_columns ? rows : cols;
  const std::size_t lines = (axis.along_columns ? cols : rows) * ch;

  std::vector<double> gain(n / 2 + 1);
  for (std::size_t k = 0; k < gain.size(); ++k)
    gain[k] = notch_gain(axis.spec, static_cast<double>(k) / static_cast<double>(n)) / static_cast<double>(n);

  Image out(rows, cols, ch);
  const auto src = image.data();
  auto dst = out.data();
  // Element m of line l lives at offset(l) + m * stride.
  const std::size_t stride = axis.along_columns ? cols * ch : ch;
  auto offset = [&](std::size_t l) {
    const std::size_t c = l % ch;
    const std::size_t p = l / ch;
    return axis.along_columns ? p * ch + c : p * cols * ch + c;
  };

  FftwPlans plans(n);
  const auto nlines = static_cast<std::ptrdiff_t>(lines);
#pragma omp parallel
  {
    FftwBuffers buf(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t l = 0; l < nlines; ++l) {
      const std::size_t base = offset(static_cast<std::size_t>(l));
      for (std::size_t m = 0; m < n; ++m) buf.real[m] = src[base + m * stride];
      fftw_execute_dft_r2c(plans.forward, buf.real, buf.spec);
      for (std::size_t k = 0; k < gain.size(); ++k) {
        buf.spec[k][0] *= gain[k];
        buf.spec[k][1] *= gain[k];
      }
      fftw_execute_dft_c2r(plans.inverse, buf.spec, buf.real);
      for (std::size_t m = 0; m < n; ++m) dst[base + m * stride] = std::max(0.0, buf.real[m]);
    }
  }
  return out;
}

double dft_magnitude_at(std::span<const double> profile, double f) {
  double mean = 0.0;
  for (double v : profile) mean += v;
  mean /= static_cast<double>(profile.size());
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < profile.size(); ++k)
    acc += (profile[k] - mean) * std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(k));
  return std::abs(acc);
}

double suppression_db(const Image& before, const Image& after, double f0) {
  const double a = dft_magnitude_at(row_luminance_profile(before), f0);
  const double b = dft_magnitude_at(row_luminance_profile(after), f0);
  if (a <= 0.0) return 0.0;
  return 20.0 * std::log10(a / std::max(b, a * 1e-15));
}

Repair notch_repair(const FilterSpec& spec) {
  spec.validate();
  return [spec](const Image& img) { return butterworth_notch(img, spec); };
}

DefenseOutcome evaluate_defense_dos(std::span<const Image> adversarial, const Repair& repair, Detector& detector) {
  if (adversarial.empty()) throw std::invalid_argument("defense evaluation needs at least one adversarial example");
  DefenseOutcome out;
  for (const auto& adv : adversarial) {
    if (detector.detect(adv).label != 0)
      throw PreconditionError("defense set member is not a successful DoS example");
    ++out.members;
    if (detector.detect(repair(adv)).label == 1) ++out.flipped;
  }
  out.rate = static_cast<double>(out.flipped) / static_cast<double>(out.members);
  return out;
}

DefenseOutcome evaluate_defense_dos(std::span<const Image> adversarial, const FilterSpec& spec, Detector& detector) {
  return evaluate_defense_dos(adversarial, notch_repair(spec), detector);
}

DefenseOutcome evaluate_defense_dodging(std::span<const std::pair<Image, Image>> adversarial, const Repair& repair,
                                        Embedder& embedder, double delta) {
  if (adversarial.empty()) throw std::invalid_argument("defense evaluation needs at least one adversarial example");
  VerifierConfig{delta}.validate();
  DefenseOutcome out;
  for (const auto& [x, u] : adversarial) {
    if (feature_distance(embedder.embed(x), embedder.embed(u)) > delta)
      throw PreconditionError("defense set member is not a successful dodging example");
    ++out.members;
    if (feature_distance(embedder.embed(repair(x)), embedder.embed(repair(u))) > delta) ++out.flipped;
  }
  out.rate = static_cast<double>(out.flipped) / static_cast<double>(out.members);
  return out;
}

void to_json(nlohmann::json& j, const FilterSpec& spec) {
  j = nlohmann::json{{"center_cpr", spec.center_cpr},
                     {"bandwidth_cpr", spec.bandwidth_cpr},
                     {"order", spec.order},
                     {"harmonics", spec.harmonics},
                     {"tilt_deg", spec.tilt_deg}};
}

void from_json(const nlohmann::json& j, FilterSpec& spec) {
  const double f0 = j.at("center_cpr").get<double>();
  spec = FilterSpec::tuned(f0);
  spec.bandwidth_cpr = j.value("bandwidth_cpr", spec.bandwidth_cpr);
  spec.order = j.value("order", spec.order);
  spec.harmonics = j.value("harmonics", spec.harmonics);
  spec.tilt_deg = j.value("tilt_deg", spec.tilt_deg);
  spec.validate();
}

}  // namespace rsf
