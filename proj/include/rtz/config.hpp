#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rtz/experiments.hpp"

namespace rtz {

/// Parses the flat `key = value` experiment format. Blank lines and `#` comments
/// are ignored; unknown keys, duplicate keys, malformed values and failed
/// validation raise ConfigError carrying the field and its line number.
///
/// Keys: gamma, slow, law, q, n_min, n_max, trials, delta, eta, master_seed,
/// cumulative_n_min, cumulative_n_max. Missing keys keep their defaults.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "<config>");

ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(format_config(c)) == c.
std::string format_config(const ExperimentConfig& config);

}  // namespace rtz
