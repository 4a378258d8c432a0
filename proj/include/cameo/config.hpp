#pragma once

// Run configuration. Settings are flat key=value pairs; a config file and
// command-line flags both produce them, flags win, and resolve_config()
// fills every missing key with its (environment-dependent) default.

#include <filesystem>
#include <map>
#include <string>

#include "cameo/environment.hpp"
#include "cameo/sampler.hpp"

namespace cameo {

using Settings = std::map<std::string, std::string>;

struct RunConfig {
  std::string env = "gridworld";
  EnvOptions env_options;
  SamplerConfig sampler;
};

/// Keys understood by resolve_config, in manifest order.
const std::vector<std::string>& setting_keys();

/// key=value per line; blank lines and '#' comments ignored.
Settings parse_settings(const std::string& text);
Settings read_settings_file(const std::filesystem::path& path);

/// Later maps override earlier ones.
Settings merge_settings(const Settings& base, const Settings& overrides);

/// Throws ConfigError on unknown keys or unparsable values.
RunConfig resolve_config(const Settings& settings);

/// Effective configuration, every key present.
Settings to_settings(const RunConfig& config);

double default_temperature(const std::string& env);

std::string to_string(SamplerMode m);
std::string to_string(BootstrapMode m);
std::string to_string(PriorKind p);

}  // namespace cameo
