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

#ifndef MIRS_SCENARIO_HPP
#define MIRS_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mirs/channel.hpp"
#include "mirs/metrics.hpp"
#include "mirs/types.hpp"

namespace mirs {

enum class AnglePolicy { UniformRandom, Fixed };
enum class MeanScale { Linear, Db };

// UE distance grid: `points` values from start to stop, geometrically spaced
// by default (log axis), linear otherwise.
struct DistanceRange {
  double start_m = 1.0;
  double stop_m = 100.0;
  int points = 25;
  bool log_spaced = true;
};

// Full simulation scenario. Defaults: 28 GHz carrier, 128 BS antennas,
// 1000-element IRSs, K = 3, 46 dBm transmit power, -94 dBm noise, 61.4 dB
// reference loss at 1 m with exponent 2, and 20 m BS/inter-IRS spacing.
struct Scenario {
  double freq_ghz = 28.0;
  int bs_antennas = 128;    // N
  int irs_elements = 1000;  // M
  int irs_count = 3;        // K
  double p_dbm = 46.0;
  double noise_dbm = -94.0;
  double d_t_m = 20.0;
  double d_irs_m = 20.0;
  DistanceRange d_r{};
  PathLossLaw path_loss{};
  GainMode gain_mode = GainMode::DeterministicAmplitude;
  std::vector<double> antenna_gain_tx{};  // per hop (K+1) or empty for unity
  std::vector<double> antenna_gain_rx{};
  AnglePolicy angle_policy = AnglePolicy::UniformRandom;
  std::vector<double> fixed_aod_rad{};  // K+1 entries when policy is Fixed
  std::vector<double> fixed_aoa_rad{};  // K entries when policy is Fixed
  int trials = 10000;
  std::uint64_t base_seed = 1;
  MeanScale mean_scale = MeanScale::Linear;
  int threads = 0;  // 0 = hardware concurrency

  double p_tx_w() const { return dbm_to_watt(p_dbm); }
  double noise_w() const { return dbm_to_watt(noise_dbm); }

  LinkGeometry link(double d_r_m) const {
    return LinkGeometry{bs_antennas, irs_elements,    irs_count,      d_t_m,
                        d_irs_m,     d_r_m,           path_loss,      antenna_gain_tx,
                        antenna_gain_rx};
  }

  AnalyticScenario analytic(double d_r_m, bool literal_mode) const {
    AnalyticScenario a;
    a.d_t_m = d_t_m;
    a.d_r_m = d_r_m;
    a.d_irs_m = d_irs_m;
    a.exponent_n = path_loss.exponent_n;
    a.g0 = std::pow(10.0, -path_loss.pl_d0_db / 10.0);
    a.d0_m = path_loss.d0_m;
    a.budget = LinkBudget{p_tx_w(), noise_w(), bs_antennas, irs_elements, irs_count};
    a.literal_mode = literal_mode;
    return a;
  }

  std::vector<double> d_r_values() const {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(d_r.points));
    if (d_r.points == 1) {
      values.push_back(d_r.start_m);
      return values;
    }
    for (int i = 0; i < d_r.points; ++i) {
      const double frac = static_cast<double>(i) / (d_r.points - 1);
      values.push_back(d_r.log_spaced
                           ? d_r.start_m * std::pow(d_r.stop_m / d_r.start_m, frac)
                           : d_r.start_m + (d_r.stop_m - d_r.start_m) * frac);
    }
    return values;
  }

  void validate() const {
    link(d_r.start_m).validate();
    if (d_r.points < 1) throw std::invalid_argument("Scenario: d_r points must be >= 1");
    if (!(d_r.start_m >= path_loss.d0_m))
      throw std::invalid_argument("Scenario: d_r start must be >= d0");
    if (!(d_r.stop_m >= d_r.start_m))
      throw std::invalid_argument("Scenario: d_r stop must be >= start");
    if (trials < 1) throw std::invalid_argument("Scenario: trials must be >= 1");
    if (threads < 0) throw std::invalid_argument("Scenario: threads must be >= 0");
    if (!(freq_ghz > 0.0)) throw std::invalid_argument("Scenario: freq_ghz must be > 0");
    if (angle_policy == AnglePolicy::Fixed) {
      if (fixed_aod_rad.size() != static_cast<std::size_t>(irs_count) + 1)
        throw std::invalid_argument("Scenario: fixed_aod_rad needs K+1 entries");
      if (fixed_aoa_rad.size() != static_cast<std::size_t>(irs_count))
        throw std::invalid_argument("Scenario: fixed_aoa_rad needs K entries");
    }
  }
};

}  // namespace mirs

#endif  // MIRS_SCENARIO_HPP
