#pragma once

#include <map>
#include <string>
#include <vector>

#include "decoy/types.hpp"

namespace decoy {

// Flat key = value text with [section] headers; '#' starts a comment.
// Keys are stored as "section.key" ("" section for keys above any header).
using KvMap = std::map<std::string, std::string>;

KvMap parse_kv_text(const std::string& text);

/// Builds a GameConfig from parsed keys. Unknown keys throw; omitted keys
/// keep their defaults.
GameConfig config_from_kv(const KvMap& kv);

GameConfig load_config_file(const std::string& path);

/// Round-trippable dump of every config key.
std::string config_to_text(const GameConfig& config);

/// Named starting points: "partial_overlap" (challenger comparisons),
/// "two_moons" (disjoint-support regime), "fully_overlapping" (rejection
/// decoys), "random_baseline" (prior-driven adversary).
GameConfig preset_config(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace decoy
