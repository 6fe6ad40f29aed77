#include "rsflicker/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace rsf {

void PerturbationParams::validate() const {
  if (!(width_rows > 0.0) || !std::isfinite(width_rows))
    throw std::invalid_argument("fringe width must be positive");
  if (!(interval_rows >= 0.0) || !std::isfinite(interval_rows))
    throw std::invalid_argument("fringe interval must be non-negative");
  if (!(std::abs(tilt_deg) <= 90.0)) throw std::invalid_argument("tilt must lie in [-90, 90]");
}

FringeGeometry pulse_to_fringe(double period_us, double duty, double interline_delay_us) {
  if (!(period_us > 0.0)) throw std::invalid_argument("pulse period must be positive");
  if (!(interline_delay_us > 0.0)) throw std::invalid_argument("interline delay must be positive");
  if (!(duty >= 0.0 && duty <= 1.0)) throw std::invalid_argument("duty cycle must lie in [0,1]");
  return {period_us * duty / interline_delay_us, period_us * (1.0 - duty) / interline_delay_us};
}

PulseTiming fringe_to_pulse(double width_rows, double interval_rows, double interline_delay_us) {
  if (!(interline_delay_us > 0.0)) throw std::invalid_argument("interline delay must be positive");
  if (width_rows < 0.0 || interval_rows < 0.0)
    throw std::invalid_argument("fringe width and interval must be non-negative");
  const double total = width_rows + interval_rows;
  if (!(total > 0.0)) throw std::invalid_argument("fringe width plus interval must be positive");
  return {total * interline_delay_us, width_rows / total};
}

PulseParams theta_to_signal(const PerturbationParams& theta, const SensorConfig& cfg,
                            LightLevels levels, double phase_us) {
  theta.validate();
  const auto timing = fringe_to_pulse(theta.width_rows, theta.interval_rows, cfg.interline_delay_us);
  return PulseParams::make(timing.period_us, timing.duty, phase_us, levels.on, levels.off);
}

RunLengths measure_runs(std::span<const double> profile, double bright_fraction) {
  RunLengths runs;
  if (profile.empty()) return runs;
  const double peak = *std::max_element(profile.begin(), profile.end());
  const double cut = bright_fraction * peak;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= profile.size(); ++i) {
    const bool boundary = i == profile.size() || ((profile[i] >= cut) != (profile[start] >= cut));
    if (!boundary) continue;
    if (start > 0 && i < profile.size()) {
      (profile[start] >= cut ? runs.bright : runs.dark).push_back(i - start);
    }
    start = i;
  }
  return runs;
}

PerturbationParams parse_theta(std::string_view text) {
  double vals[3];
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t end = k < 2 ? text.find(',', pos) : text.size();
    if (end == std::string_view::npos)
      throw std::invalid_argument("theta must be given as b,s,alpha: '" + std::string(text) + "'");
    std::string field(text.substr(pos, end - pos));
    const auto first = field.find_first_not_of(" \t");
    field = first == std::string::npos ? "" : field.substr(first, field.find_last_not_of(" \t") - first + 1);
    std::size_t used = 0;
    try {
      vals[k] = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != field.size())
      throw std::invalid_argument("theta field '" + field + "' is not a number");
    pos = end + 1;
  }
  PerturbationParams theta{vals[0], vals[1], vals[2]};
  theta.validate();
  return theta;
}

void to_json(nlohmann::json& j, const PerturbationParams& theta) {
  j = nlohmann::json{{"b", theta.width_rows}, {"s", theta.interval_rows}, {"alpha_deg", theta.tilt_deg}};
}

void from_json(const nlohmann::json& j, PerturbationParams& theta) {
  theta = PerturbationParams{j.at("b").get<double>(), j.at("s").get<double>(),
                             j.value("alpha_deg", 0.0)};
  theta.validate();
}

}  // namespace rsf
