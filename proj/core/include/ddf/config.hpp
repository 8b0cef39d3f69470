#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "ddf/simulation.hpp"

namespace ddf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "key = value" lines; '#' starts a comment. Later keys override earlier ones.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Applies recognised keys on top of `base`; unknown keys and malformed
/// values raise ConfigError. Lists are comma separated; snr_db also accepts
/// "start:step:stop".
SimConfig apply_config(const std::map<std::string, std::string>& kv, SimConfig base = {});

SimConfig load_config_file(const std::string& path, SimConfig base = {});

}  // namespace ddf
