#include "rsflicker/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace rsf {
namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// CSV field quoting for labels that may carry commas.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json to_json(const SearchSpace& space) {
  return {{"max_iters", space.max_iters}, {"b_max", space.b_max},     {"s_max", space.s_max},
          {"alpha_max", space.alpha_max}, {"b_step", space.b_step},   {"s_step", space.s_step},
          {"alpha_step", space.alpha_step}, {"mode", to_string(space.mode)}};
}

SearchSpace search_space_from_json(const nlohmann::json& j) {
  SearchSpace s;
  s.max_iters = j.value("max_iters", s.max_iters);
  s.b_max = j.value("b_max", s.b_max);
  s.s_max = j.value("s_max", s.s_max);
  s.alpha_max = j.value("alpha_max", s.alpha_max);
  s.b_step = j.value("b_step", s.b_step);
  s.s_step = j.value("s_step", s.s_step);
  s.alpha_step = j.value("alpha_step", s.alpha_step);
  s.mode = parse_search_mode(j.value("mode", std::string(to_string(s.mode))));
  s.validate();
  return s;
}

nlohmann::json to_json(const AttackResult& result) {
  nlohmann::json thetas = nlohmann::json::array();
  for (const auto& h : result.hits)
    thetas.push_back({{"b", h.theta.width_rows},
                      {"s", h.theta.interval_rows},
                      {"alpha", h.theta.tilt_deg},
                      {"loss", h.loss},
                      {"phase_us", h.phase_us}});
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& t : result.skipped_perceptible) skipped.push_back(t);
  return {{"mode", to_string(result.mode)},
          {"space", to_json(result.space)},
          {"thetas", thetas},
          {"evaluations", result.evaluations},
          {"skipped_perceptible", skipped}};
}

std::string attack_csv(const AttackResult& result) {
  std::string out = "b,s,alpha,loss,phase_us\n";
  for (const auto& h : result.hits)
    out += num(h.theta.width_rows) + "," + num(h.theta.interval_rows) + "," + num(h.theta.tilt_deg) + "," +
           num(h.loss) + "," + num(h.phase_us) + "\n";
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "model,condition,n_b,n_a,rate\n";
  for (const auto& r : rows) {
    std::ostringstream rate;
    rate << std::fixed << std::setprecision(4) << r.rate;
    out += field(r.model) + "," + field(r.condition) + "," + std::to_string(r.n_b) + "," +
           std::to_string(r.n_a) + "," + rate.str() + "\n";
  }
  return out;
}

nlohmann::json to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"model", r.model}, {"condition", r.condition}, {"n_b", r.n_b}, {"n_a", r.n_a}, {"rate", r.rate}});
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace rsf
