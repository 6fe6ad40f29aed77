#pragma once

#include <string>
#include <vector>

#include "rsflicker/attack.hpp"

namespace rsf {

/// One column of a success-rate table: a light condition, optionally with the
/// camera rolled by `tilt_deg` and the face rescaled by `scale` (a stand-in
/// for shooting distance).
struct SweepCondition {
  std::string label;
  PulseParams pulse;
  double tilt_deg = 0.0;
  double scale = 1.0;
};

/// model, condition, n_b, n_a, rate.
struct SweepRow {
  std::string model;
  std::string condition;
  std::size_t n_b = 0;
  std::size_t n_a = 0;
  double rate = 0.0;
};

std::vector<SweepCondition> pulse_period_conditions(const std::vector<double>& periods_us, double duty,
                                                    LightLevels levels = {});
std::vector<SweepCondition> scale_conditions(const std::vector<double>& scales, const PulseParams& pulse);
std::vector<SweepCondition> tilt_conditions(const std::vector<double>& tilts_deg, const PulseParams& pulse);

/// For every condition: n_b counts faces the detector finds under normal
/// light (others are excluded entirely), n_a those it misses once captured
/// under the condition.
std::vector<SweepRow> dos_sweep(const std::vector<Image>& faces, const std::vector<SweepCondition>& conditions,
                                const SensorConfig& sensor, Detector& detector, const std::string& model_name);

/// Pairs (attacker, user). m_b counts pairs that do not verify under normal
/// light (distance > delta); m_a those whose captured distance drops to <= delta.
std::vector<SweepRow> dodging_sweep(const std::vector<std::pair<Image, Image>>& pairs,
                                    const std::vector<SweepCondition>& conditions, const SensorConfig& sensor,
                                    Embedder& embedder, double delta, const std::string& model_name);

/// Re-captures `x` under every hit of a DoS search and scores it.
SweepRow score_dos_hits(const Image& x, const AttackResult& result, const CaptureModel& model,
                        Detector& detector, const std::string& model_name);

}  // namespace rsf
