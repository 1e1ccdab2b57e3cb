// SPDX-License-Identifier: Apache-2.0
//
// mirs — cascaded multi-IRS mmWave link simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// JSON configuration. Unknown keys are rejected; missing keys fall back to
// the built-in defaults and each fallback is logged. Physical quantities
// carry the unit in the key name (p_dbm, d_t_m, freq_ghz, ...).

#ifndef MIRS_CONFIG_HPP
#define MIRS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mirs/scenario.hpp"
#include "mirs/sim.hpp"

namespace mirs {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error("config:" + std::to_string(line) + ": " + message), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

struct Config {
  Scenario scenario{};
  SweepSpec sweep{};
};

// Parses a config document. Default notices ("using default <key> = <value>")
// go to `log`. Throws ConfigError with a 1-based line number on parse errors,
// unknown keys, or invalid values.
Config parse_config(const std::string& text, std::ostream& log);

// Reads and parses a config file; unreadable path throws ConfigError(0, ...).
Config load_config_file(const std::string& path, std::ostream& log);

// Full resolved key set as a JSON document, sufficient to rerun the exact
// configuration.
std::string resolved_config_json(const Config& config);

// Base-seed precedence: --seed flag, then the MIRS_SEED environment variable,
// then the config file. A malformed override throws ConfigError.
std::uint64_t resolve_base_seed(std::uint64_t config_seed, const char* env_value,
                                std::optional<std::uint64_t> flag_value);

}  // namespace mirs

#endif  // MIRS_CONFIG_HPP
