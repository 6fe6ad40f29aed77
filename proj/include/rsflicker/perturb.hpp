#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsflicker/sensor.hpp"
#include "rsflicker/signal.hpp"

namespace rsf {

/// Attack parameters: bright fringe width b and dark interval s (both in rows,
/// real-valued) and the tilt of the fringes in degrees.
struct PerturbationParams {
  double width_rows = 1.0;
  double interval_rows = 1.0;
  double tilt_deg = 0.0;

  void validate() const;
  friend bool operator==(const PerturbationParams&, const PerturbationParams&) = default;
};

struct FringeGeometry {
  double width_rows;
  double interval_rows;
};

struct PulseTiming {
  double period_us;
  double duty;
};

/// b = Tp D / t_d, s = Tp (1 - D) / t_d.
FringeGeometry pulse_to_fringe(double period_us, double duty, double interline_delay_us);

/// Tp = (b + s) t_d, D = b / (b + s).
PulseTiming fringe_to_pulse(double width_rows, double interval_rows, double interline_delay_us);

struct LightLevels {
  double on = 1.0;
  double off = 0.0;
};

/// Drive signal that realizes `theta` on a sensor with `cfg`'s interline delay.
/// Callers are responsible for consulting check_imperceptible on the result.
PulseParams theta_to_signal(const PerturbationParams& theta, const SensorConfig& cfg,
                            LightLevels levels = {}, double phase_us = 0.0);

struct RunLengths {
  std::vector<std::size_t> bright;
  std::vector<std::size_t> dark;
};

/// Complete bright/dark runs of a profile. A row is bright when
/// r >= bright_fraction * max(r). Runs touching either end are dropped
/// since they may be truncated.
RunLengths measure_runs(std::span<const double> profile, double bright_fraction = 0.99);

/// Parses "b,s,alpha".
PerturbationParams parse_theta(std::string_view text);

void to_json(nlohmann::json& j, const PerturbationParams& theta);
void from_json(const nlohmann::json& j, PerturbationParams& theta);

}  // namespace rsf
