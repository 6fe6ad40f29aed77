#include "rsflicker/sweep.hpp"

#include <cmath>
#include <sstream>

namespace rsf {
namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Image rescale(const Image& x, double scale) {
  if (scale == 1.0) return x;
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  const auto rows = static_cast<std::size_t>(std::lround(x.rows() * scale));
  const auto cols = static_cast<std::size_t>(std::lround(x.cols() * scale));
  if (rows == 0 || cols == 0) throw std::invalid_argument("scale too small for image");
  return resize_area(x, rows, cols);
}

}  // namespace

std::vector<SweepCondition> pulse_period_conditions(const std::vector<double>& periods_us, double duty,
                                                    LightLevels levels) {
  std::vector<SweepCondition> out;
  for (double tp : periods_us)
    out.push_back({"Tp=" + fmt_num(tp) + "us", PulseParams::make(tp, duty, 0.0, levels.on, levels.off)});
  return out;
}

std::vector<SweepCondition> scale_conditions(const std::vector<double>& scales, const PulseParams& pulse) {
  std::vector<SweepCondition> out;
  for (double s : scales) out.push_back({"scale=" + fmt_num(s), pulse, 0.0, s});
  return out;
}

std::vector<SweepCondition> tilt_conditions(const std::vector<double>& tilts_deg, const PulseParams& pulse) {
  std::vector<SweepCondition> out;
  for (double a : tilts_deg) out.push_back({"tilt=" + fmt_num(a) + "deg", pulse, a, 1.0});
  return out;
}

std::vector<SweepRow> dos_sweep(const std::vector<Image>& faces, const std::vector<SweepCondition>& conditions,
                                const SensorConfig& sensor, Detector& detector, const std::string& model_name) {
  std::vector<SweepRow> rows;
  for (const auto& cond : conditions) {
    SweepRow row{model_name, cond.label};
    for (const auto& face : faces) {
      const Image x = rescale(face, cond.scale);
      if (detector.detect(x).label != 1) continue;
      ++row.n_b;
      if (detector.detect(capture(x, cond.pulse, cond.tilt_deg, sensor)).label == 0) ++row.n_a;
    }
    row.rate = row.n_b > 0 ? success_rate_dos(row.n_a, row.n_b) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> dodging_sweep(const std::vector<std::pair<Image, Image>>& pairs,
                                    const std::vector<SweepCondition>& conditions, const SensorConfig& sensor,
                                    Embedder& embedder, double delta, const std::string& model_name) {
  VerifierConfig{delta}.validate();
  std::vector<SweepRow> rows;
  for (const auto& cond : conditions) {
    SweepRow row{model_name, cond.label};
    for (const auto& [a, b] : pairs) {
      const Image x = rescale(a, cond.scale);
      const Image u = rescale(b, cond.scale);
      if (dodging_loss(embedder.embed(x), embedder.embed(u)) <= delta) continue;
      ++row.n_b;
      const double d = dodging_loss(embedder.embed(capture(x, cond.pulse, cond.tilt_deg, sensor)),
                                    embedder.embed(capture(u, cond.pulse, cond.tilt_deg, sensor)));
      if (d <= delta) ++row.n_a;
    }
    row.rate = row.n_b > 0 ? success_rate_dodging(row.n_a, row.n_b) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

SweepRow score_dos_hits(const Image& x, const AttackResult& result, const CaptureModel& model,
                        Detector& detector, const std::string& model_name) {
  SweepRow row{model_name, "searched-theta"};
  if (detector.detect(x).label != 1) return row;
  for (const auto& hit : result.hits) {
    ++row.n_b;
    if (detector.detect(capture(x, hit.theta, model, hit.phase_us)).label == 0) ++row.n_a;
  }
  row.rate = row.n_b > 0 ? success_rate_dos(row.n_a, row.n_b) : 0.0;
  return row;
}

}  // namespace rsf
