#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsflicker/detector.hpp"
#include "rsflicker/image.hpp"

namespace rsf {

/// Butterworth band-stop cascade notching the fringe fundamental and its
/// harmonics. Frequencies are in cycles per row measured across the fringes.
struct FilterSpec {
  double center_cpr = 0.25;
  double bandwidth_cpr = 0.0625;
  int order = 4;
  int harmonics = 3;
  /// Fringe tilt; 0 filters every column's row profile.
  double tilt_deg = 0.0;

  void validate() const;
  /// Order 4, bandwidth f0/4, 3 harmonics.
  static FilterSpec tuned(double center_cpr, double tilt_deg = 0.0);
};

class NoFringeDetected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frequency of the strongest DFT peak in (0, 0.5) of the mean-removed
/// row-luminance profile. Needs at least 16 rows.
double estimate_fringe_frequency(const Image& image);

/// Gain applied to frequency `f` (cycles/sample along the filtered axis).
/// DC passes unchanged.
double notch_gain(const FilterSpec& spec, double f);

/// Filters along the fringe axis, one 1-D profile per column (or per row
/// for near-vertical tilt). Output is clamped to be non-negative.
Image butterworth_notch(const Image& image, const FilterSpec& spec);

/// |sum_n p[n] exp(-2 pi i f n)| over the mean-removed profile.
double dft_magnitude_at(std::span<const double> profile, double f);

/// 20 log10 of the fringe magnitude before over after, on row-luminance profiles.
double suppression_db(const Image& before, const Image& after, double f0);

using Repair = std::function<Image(const Image&)>;

Repair notch_repair(const FilterSpec& spec);

struct DefenseOutcome {
  std::size_t members = 0;
  std::size_t flipped = 0;
  double rate = 0.0;
};

/// Every member must be an adversarial frame the detector misses; the rate
/// is the fraction the detector finds again after repair.
DefenseOutcome evaluate_defense_dos(std::span<const Image> adversarial, const Repair& repair, Detector& detector);
DefenseOutcome evaluate_defense_dos(std::span<const Image> adversarial, const FilterSpec& spec, Detector& detector);

/// Every member pair must verify (distance <= delta); the rate is the
/// fraction whose distance rises above delta after both are repaired.
DefenseOutcome evaluate_defense_dodging(std::span<const std::pair<Image, Image>> adversarial, const Repair& repair,
                                        Embedder& embedder, double delta);

void to_json(nlohmann::json& j, const FilterSpec& spec);
void from_json(const nlohmann::json& j, FilterSpec& spec);

}  // namespace rsf
