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

#include "mirs/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mirs {

namespace {

using nlohmann::json;

// 1-based line of the first occurrence of "key" in the source text; 0 when
// the key cannot be located (e.g. synthesized errors).
int key_line(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const std::size_t pos = text.find(needle);
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

int byte_to_line(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

class Reader {
 public:
  Reader(const json& doc, const std::string& text, std::ostream& log, std::string prefix)
      : doc_(doc), text_(text), log_(log), prefix_(std::move(prefix)) {}

  template <typename T>
  T get(const std::string& key, const T& fallback) {
    seen_.insert(key);
    if (!doc_.contains(key)) {
      log_ << "[config] using default " << prefix_ << key << " = " << json(fallback) << "\n";
      return fallback;
    }
    return read<T>(key);
  }

  template <typename T>
  T read(const std::string& key) {
    seen_.insert(key);
    try {
      return doc_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(key_line(text_, key), "invalid value for " + prefix_ + key + ": " + e.what());
    }
  }

  bool contains(const std::string& key) {
    seen_.insert(key);
    return doc_.contains(key);
  }

  void reject_unknown() const {
    for (const auto& item : doc_.items())
      if (!seen_.contains(item.key()))
        throw ConfigError(key_line(text_, item.key()), "unknown key: " + prefix_ + item.key());
  }

 private:
  const json& doc_;
  const std::string& text_;
  std::ostream& log_;
  std::string prefix_;
  std::set<std::string> seen_;
};

// Per-hop antenna gains: a bare number broadcasts to all K+1 hops.
std::vector<double> gain_list(Reader& reader, const std::string& key, int hops) {
  if (!reader.contains(key)) return {};
  const json node = reader.read<json>(key);
  if (node.is_number()) return std::vector<double>(static_cast<std::size_t>(hops), node.get<double>());
  if (node.is_array()) {
    try {
      return node.get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw std::invalid_argument(key + ": " + e.what());
    }
  }
  throw std::invalid_argument(key + " must be a number or an array of numbers");
}

GainMode gain_mode_from_string(const std::string& s) {
  if (s == "random") return GainMode::Random;
  if (s == "deterministic_amplitude") return GainMode::DeterministicAmplitude;
  if (s == "paper_literal") return GainMode::PaperLiteral;
  throw std::invalid_argument(
      "gain_mode must be one of random|deterministic_amplitude|paper_literal");
}

std::string to_string(GainMode m) {
  switch (m) {
    case GainMode::Random: return "random";
    case GainMode::DeterministicAmplitude: return "deterministic_amplitude";
    case GainMode::PaperLiteral: return "paper_literal";
  }
  return "?";
}

}  // namespace

Config parse_config(const std::string& text, std::ostream& log) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(byte_to_line(text, e.byte), std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError(1, "top-level document must be an object");

  Config config;
  Scenario& sc = config.scenario;
  Reader reader(doc, text, log, "");

  try {
    sc.freq_ghz = reader.get("freq_ghz", sc.freq_ghz);
    sc.bs_antennas = reader.get("n_bs_antennas", sc.bs_antennas);
    sc.irs_elements = reader.get("m_irs_elements", sc.irs_elements);
    sc.irs_count = reader.get("k_irs", sc.irs_count);
    sc.p_dbm = reader.get("p_dbm", sc.p_dbm);
    sc.noise_dbm = reader.get("noise_dbm", sc.noise_dbm);
    sc.d_t_m = reader.get("d_t_m", sc.d_t_m);
    sc.d_irs_m = reader.get("d_irs_m", sc.d_irs_m);
    sc.d_r.start_m = reader.get("d_r_start_m", sc.d_r.start_m);
    sc.d_r.stop_m = reader.get("d_r_stop_m", sc.d_r.stop_m);
    sc.d_r.points = reader.get("d_r_points", sc.d_r.points);
    const std::string spacing = reader.get<std::string>("d_r_spacing", "log");
    if (spacing != "log" && spacing != "linear")
      throw std::invalid_argument("d_r_spacing must be log|linear");
    sc.d_r.log_spaced = spacing == "log";
    sc.path_loss.exponent_n = reader.get("path_loss_exponent", sc.path_loss.exponent_n);
    sc.path_loss.pl_d0_db = reader.get("pl_d0_db", sc.path_loss.pl_d0_db);
    sc.path_loss.d0_m = reader.get("d0_m", sc.path_loss.d0_m);
    sc.gain_mode = gain_mode_from_string(
        reader.get<std::string>("gain_mode", to_string(sc.gain_mode)));
    sc.antenna_gain_tx = gain_list(reader, "antenna_gain_tx", sc.irs_count + 1);
    sc.antenna_gain_rx = gain_list(reader, "antenna_gain_rx", sc.irs_count + 1);
    const std::string policy = reader.get<std::string>("angle_policy", "uniform");
    if (policy != "uniform" && policy != "fixed")
      throw std::invalid_argument("angle_policy must be uniform|fixed");
    sc.angle_policy = policy == "fixed" ? AnglePolicy::Fixed : AnglePolicy::UniformRandom;
    if (sc.angle_policy == AnglePolicy::Fixed) {
      sc.fixed_aod_rad = reader.get("fixed_aod_rad",
                                    std::vector<double>(static_cast<std::size_t>(sc.irs_count) + 1, 0.0));
      sc.fixed_aoa_rad = reader.get("fixed_aoa_rad",
                                    std::vector<double>(static_cast<std::size_t>(sc.irs_count), 0.0));
    } else {
      if (reader.contains("fixed_aod_rad") || reader.contains("fixed_aoa_rad"))
        throw std::invalid_argument("fixed angles given but angle_policy is uniform");
    }
    sc.trials = reader.get("trials", sc.trials);
    if (reader.contains("base_seed")) {
      const json seed_node = reader.read<json>("base_seed");
      if (!seed_node.is_number_unsigned() &&
          !(seed_node.is_number_integer() && seed_node.get<std::int64_t>() >= 0))
        throw ConfigError(key_line(text, "base_seed"),
                          "invalid value for base_seed: must be a non-negative integer");
      sc.base_seed = seed_node.get<std::uint64_t>();
    } else {
      log << "[config] using default base_seed = " << sc.base_seed << "\n";
    }
    const std::string mean = reader.get<std::string>("snr_mean", "linear");
    if (mean != "linear" && mean != "db") throw std::invalid_argument("snr_mean must be linear|db");
    sc.mean_scale = mean == "db" ? MeanScale::Db : MeanScale::Linear;
    sc.threads = reader.get("threads", sc.threads);

    if (reader.contains("sweep")) {
      const json sweep_doc = reader.read<json>("sweep");
      if (!sweep_doc.is_object()) throw std::invalid_argument("sweep must be an object");
      Reader sweep_reader(sweep_doc, text, log, "sweep.");
      config.sweep.variable =
          sweep_variable_from_string(sweep_reader.get<std::string>("variable", "d_r"));
      config.sweep.values = sweep_reader.get("values", std::vector<double>{});
      const auto solver_names =
          sweep_reader.get("solvers", std::vector<std::string>{"closed_form"});
      if (solver_names.empty()) throw std::invalid_argument("sweep.solvers must not be empty");
      config.sweep.solvers.clear();
      for (const auto& name : solver_names) config.sweep.solvers.push_back(SolverSpec::parse(name));
      sweep_reader.reject_unknown();
    } else {
      log << "[config] using default sweep = {\"variable\":\"d_r\",\"solvers\":[\"closed_form\"]}\n";
    }

    reader.reject_unknown();
    sc.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }
  return config;
}

Config load_config_file(const std::string& path, std::ostream& log) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), log);
}

std::string resolved_config_json(const Config& config) {
  const Scenario& sc = config.scenario;
  json doc;
  doc["freq_ghz"] = sc.freq_ghz;
  doc["n_bs_antennas"] = sc.bs_antennas;
  doc["m_irs_elements"] = sc.irs_elements;
  doc["k_irs"] = sc.irs_count;
  doc["p_dbm"] = sc.p_dbm;
  doc["noise_dbm"] = sc.noise_dbm;
  doc["d_t_m"] = sc.d_t_m;
  doc["d_irs_m"] = sc.d_irs_m;
  doc["d_r_start_m"] = sc.d_r.start_m;
  doc["d_r_stop_m"] = sc.d_r.stop_m;
  doc["d_r_points"] = sc.d_r.points;
  doc["d_r_spacing"] = sc.d_r.log_spaced ? "log" : "linear";
  doc["path_loss_exponent"] = sc.path_loss.exponent_n;
  doc["pl_d0_db"] = sc.path_loss.pl_d0_db;
  doc["d0_m"] = sc.path_loss.d0_m;
  doc["gain_mode"] = to_string(sc.gain_mode);
  if (!sc.antenna_gain_tx.empty()) doc["antenna_gain_tx"] = sc.antenna_gain_tx;
  if (!sc.antenna_gain_rx.empty()) doc["antenna_gain_rx"] = sc.antenna_gain_rx;
  doc["angle_policy"] = sc.angle_policy == AnglePolicy::Fixed ? "fixed" : "uniform";
  if (sc.angle_policy == AnglePolicy::Fixed) {
    doc["fixed_aod_rad"] = sc.fixed_aod_rad;
    doc["fixed_aoa_rad"] = sc.fixed_aoa_rad;
  }
  doc["trials"] = sc.trials;
  doc["base_seed"] = sc.base_seed;
  doc["snr_mean"] = sc.mean_scale == MeanScale::Db ? "db" : "linear";
  doc["threads"] = sc.threads;
  json sweep;
  sweep["variable"] = to_string(config.sweep.variable);
  if (!config.sweep.values.empty()) sweep["values"] = config.sweep.values;
  std::vector<std::string> solver_names;
  solver_names.reserve(config.sweep.solvers.size());
  for (const auto& s : config.sweep.solvers) solver_names.push_back(s.name());
  sweep["solvers"] = solver_names;
  doc["sweep"] = sweep;
  return doc.dump();
}

std::uint64_t resolve_base_seed(std::uint64_t config_seed, const char* env_value,
                                std::optional<std::uint64_t> flag_value) {
  if (flag_value.has_value()) return *flag_value;
  if (env_value != nullptr && *env_value != '\0') {
    std::uint64_t seed = 0;
    const std::string_view text(env_value);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw ConfigError(0, std::string("invalid MIRS_SEED value: ") + env_value);
    return seed;
  }
  return config_seed;
}

}  // namespace mirs
