#pragma once

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace cutoffprobe::cli {

inline constexpr std::string_view kEnvPrefix = "CUTOFFPROBE_";

/// CUTOFFPROBE_<NAME> for a long flag name: upper case, '-' becomes '_'.
std::string env_name(std::string_view flag);

using EnvLookup = std::function<const char*(const char*)>;

/// Splices `--config` file values into args (argv without the program name) as explicit flags,
/// but only for keys the command line and the environment leave unset. This yields the
/// precedence flags > environment > config file > defaults once CLI11 applies env vars.
///
/// The file is a JSON object of long flag names. A nested object keyed by a subcommand name
/// applies to that subcommand only and wins over top-level keys.
std::vector<std::string> apply_config_overlay(const CLI::App& app, std::vector<std::string> args,
                                              const EnvLookup& getenv = [](const char* k) { return std::getenv(k); });

/// Final value of every option on `sub` after parsing, keyed by flag name, skipping `exclude`.
nlohmann::ordered_json effective_config(const CLI::App& sub, const std::set<std::string>& exclude);

}  // namespace cutoffprobe::cli
