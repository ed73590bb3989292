#pragma once

/// @file presets.hpp
/// @brief JSON mapping of TboConfig and the shipped experiment presets.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbo/core.hpp"

namespace tbo {

/// Full JSON form; field names mirror TboConfig.
nlohmann::json config_to_json(const TboConfig& cfg);

/// Missing fields keep their TboConfig defaults; unknown keys are rejected.
/// Throws std::invalid_argument with the offending path on malformed input.
TboConfig config_from_json(const nlohmann::json& j);

struct Preset {
    std::string key;   ///< file / CLI identifier, e.g. "high_diversity"
    TboConfig config;  ///< config.name holds the display name, e.g. "High diversity"
};

/// The five trust-based configurations followed by the island-model baseline.
const std::vector<Preset>& builtin_presets();

/// Looks a preset up by key or display name (case-insensitive).
std::optional<Preset> find_preset(const std::string& name);

/// Lower-case identifier derived from a display name ("Small society" -> "small_society").
std::string slugify(const std::string& name);

}  // namespace tbo
