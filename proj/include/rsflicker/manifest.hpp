#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rsflicker/signal.hpp"

namespace rsf {

/// One captured image: who, under which light ("normal" when unmodulated),
/// and the free-form distance/tilt tags of the collection protocol.
struct ManifestEntry {
  std::filesystem::path path;
  std::string subject;
  std::optional<PulseParams> condition;  // nullopt == "normal"
  std::string distance;
  std::string tilt;
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  /// Paths unique and non-empty; throws std::invalid_argument otherwise.
  void validate() const;
};

/// Relative entry paths are resolved against the manifest's directory.
Manifest load_manifest(const std::filesystem::path& path);
void save_manifest(const Manifest& m, const std::filesystem::path& path);

void to_json(nlohmann::json& j, const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

}  // namespace rsf
