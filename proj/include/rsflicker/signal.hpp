#pragma once

#include <nlohmann/json_fwd.hpp>

namespace rsf {

/// OOK drive of the LED: a rectangular wave with ideal edges.
///
/// The lamp is at `level_on` during the first `duty * period_us` of every
/// period (counted from `phase_us`) and at `level_off` otherwise. Times are
/// in microseconds, levels are relative luminance.
struct PulseParams {
  double period_us = 1000.0;
  double duty = 0.5;
  double phase_us = 0.0;
  double level_on = 1.0;
  double level_off = 0.0;

  /// Validates the fields and wraps `phase_us` into [0, period_us).
  /// Throws std::invalid_argument on a violated invariant.
  static PulseParams make(double period_us, double duty, double phase_us = 0.0,
                          double level_on = 1.0, double level_off = 0.0);

  void validate() const;
  double on_time_us() const { return duty * period_us; }
  double frequency_hz() const { return 1.0e6 / period_us; }
};

bool operator==(const PulseParams&, const PulseParams&);

double level_at(const PulseParams& p, double t_us);

/// Time spent at `level_on` inside [t_start, t_start + duration].
double on_overlap(const PulseParams& p, double t_start_us, double duration_us);

/// Exact integral of the illumination over [t_start, t_start + duration].
double integrate_level(const PulseParams& p, double t_start_us, double duration_us);

inline constexpr double kFlickerFusionHz = 200.0;

/// True when the flicker is invisible: the modulation frequency is strictly
/// above `threshold_hz`, or the light is constant (duty 0 or 1).
bool check_imperceptible(const PulseParams& p, double threshold_hz = kFlickerFusionHz);

void to_json(nlohmann::json& j, const PulseParams& p);
void from_json(const nlohmann::json& j, PulseParams& p);

}  // namespace rsf
