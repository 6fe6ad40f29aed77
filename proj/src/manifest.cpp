#include "rsflicker/manifest.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rsf {

void Manifest::validate() const {
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.path.empty()) throw std::invalid_argument("manifest entry without a path");
    if (!seen.insert(e.path.lexically_normal().string()).second)
      throw std::invalid_argument("duplicate manifest path: " + e.path.string());
    if (e.condition) e.condition->validate();
  }
}

void to_json(nlohmann::json& j, const Manifest& m) {
  j = nlohmann::json{{"entries", nlohmann::json::array()}};
  for (const auto& e : m.entries) {
    nlohmann::json cond = "normal";
    if (e.condition) cond = *e.condition;
    j["entries"].push_back({{"path", e.path.generic_string()},
                            {"subject", e.subject},
                            {"condition", cond},
                            {"distance", e.distance},
                            {"tilt", e.tilt}});
  }
}

Manifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  Manifest m;
  for (const auto& item : j.at("entries")) {
    ManifestEntry e;
    e.path = item.at("path").get<std::string>();
    if (e.path.is_relative() && !base_dir.empty()) e.path = base_dir / e.path;
    e.subject = item.value("subject", "");
    e.distance = item.value("distance", "");
    e.tilt = item.value("tilt", "");
    const auto& cond = item.contains("condition") ? item.at("condition") : nlohmann::json("normal");
    if (cond.is_string()) {
      if (cond.get<std::string>() != "normal")
        throw std::invalid_argument("manifest condition must be \"normal\" or pulse parameters");
    } else {
      e.condition = cond.get<PulseParams>();
    }
    m.entries.push_back(std::move(e));
  }
  m.validate();
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
  m.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest " + path.string());
  out << nlohmann::json(m).dump(2) << '\n';
}

}  // namespace rsf
