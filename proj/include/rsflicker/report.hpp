#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsflicker/attack.hpp"
#include "rsflicker/sweep.hpp"

namespace rsf {

nlohmann::json to_json(const SearchSpace& space);
SearchSpace search_space_from_json(const nlohmann::json& j);

/// {mode, space, thetas: [{b, s, alpha, loss, phase_us}], evaluations, skipped_perceptible: [theta...]}
nlohmann::json to_json(const AttackResult& result);

/// Header b,s,alpha,loss,phase_us then one row per theta.
std::string attack_csv(const AttackResult& result);

/// Header model,condition,n_b,n_a,rate.
std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json to_json(const std::vector<SweepRow>& rows);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace rsf
