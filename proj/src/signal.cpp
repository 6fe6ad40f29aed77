#include "rsflicker/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace rsf {
namespace {

// On-time accumulated in [phase, phase + u] for u of any sign: whole periods
// contribute duty * period, the partial period at most the on-time.
double cumulative_on(const PulseParams& p, double u) {
  const double periods = std::floor(u / p.period_us);
  double rem = u - periods * p.period_us;
  rem = std::clamp(rem, 0.0, p.period_us);
  return periods * p.on_time_us() + std::min(rem, p.on_time_us());
}

}  // namespace

PulseParams PulseParams::make(double period_us, double duty, double phase_us,
                              double level_on, double level_off) {
  PulseParams p{period_us, duty, phase_us, level_on, level_off};
  p.validate();
  p.phase_us = std::fmod(phase_us, period_us);
  if (p.phase_us < 0.0) p.phase_us += period_us;
  if (p.phase_us >= period_us) p.phase_us = 0.0;
  return p;
}

void PulseParams::validate() const {
  if (!(period_us > 0.0) || !std::isfinite(period_us))
    throw std::invalid_argument("pulse period must be positive, got " + std::to_string(period_us));
  if (!(duty >= 0.0 && duty <= 1.0))
    throw std::invalid_argument("duty cycle must lie in [0,1], got " + std::to_string(duty));
  if (!std::isfinite(phase_us)) throw std::invalid_argument("pulse phase must be finite");
  if (!(level_on > 0.0) || !std::isfinite(level_on))
    throw std::invalid_argument("on level must be positive");
  if (!(level_off >= 0.0 && level_off <= level_on))
    throw std::invalid_argument("off level must lie in [0, level_on]");
}

bool operator==(const PulseParams& a, const PulseParams& b) {
  return a.period_us == b.period_us && a.duty == b.duty && a.phase_us == b.phase_us &&
         a.level_on == b.level_on && a.level_off == b.level_off;
}

double level_at(const PulseParams& p, double t_us) {
  double u = std::fmod(t_us - p.phase_us, p.period_us);
  if (u < 0.0) u += p.period_us;
  return u < p.on_time_us() ? p.level_on : p.level_off;
}

double on_overlap(const PulseParams& p, double t_start_us, double duration_us) {
  if (duration_us <= 0.0 || p.duty <= 0.0) return 0.0;
  if (p.duty >= 1.0) return duration_us;
  const double u0 = t_start_us - p.phase_us;
  const double v = cumulative_on(p, u0 + duration_us) - cumulative_on(p, u0);
  return std::clamp(v, 0.0, duration_us);
}

double integrate_level(const PulseParams& p, double t_start_us, double duration_us) {
  if (duration_us <= 0.0) return 0.0;
  return p.level_off * duration_us +
         (p.level_on - p.level_off) * on_overlap(p, t_start_us, duration_us);
}

bool check_imperceptible(const PulseParams& p, double threshold_hz) {
  if (p.duty <= 0.0 || p.duty >= 1.0) return true;
  return p.frequency_hz() > threshold_hz;
}

void to_json(nlohmann::json& j, const PulseParams& p) {
  j = nlohmann::json{{"period_us", p.period_us},
                     {"duty", p.duty},
                     {"phase_us", p.phase_us},
                     {"level_on", p.level_on},
                     {"level_off", p.level_off}};
}

void from_json(const nlohmann::json& j, PulseParams& p) {
  PulseParams d;
  p = PulseParams::make(j.at("period_us").get<double>(), j.value("duty", d.duty),
                        j.value("phase_us", d.phase_us), j.value("level_on", d.level_on),
                        j.value("level_off", d.level_off));
}

}  // namespace rsf
