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
// Monte-Carlo trial engine and parameter sweeps. Trials are independent and
// seeded as derive_seed(base_seed, value_index, trial_index), so results are
// identical whether trials run serially or across threads; the per-row
// reduction is an ordered fold by trial index.

#ifndef MIRS_SIM_HPP
#define MIRS_SIM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mirs/optimize.hpp"
#include "mirs/scenario.hpp"

namespace mirs {

enum class SweepVariable { DistanceToUe, IrsCount, IrsElements };

std::string to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(const std::string& s);

struct SweepSpec {
  SweepVariable variable = SweepVariable::DistanceToUe;
  // Strictly increasing. May be empty for the distance sweep, in which case
  // the scenario's d_r grid is used; K/M sweeps need explicit values.
  std::vector<double> values{};
  std::vector<SolverSpec> solvers{SolverSpec{}};
};

struct SweepRow {
  std::string variable;
  double value = 0.0;
  std::string solver;
  double mean_snr_db = 0.0;
  double stderr_db = 0.0;
  int trials = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

// One channel realization, one solve, one evaluation; returns the linear SNR.
// Pure function of (scenario, d_r, solver, value_index, trial_index).
double run_trial(const Scenario& scenario, double d_r_m, const SolverSpec& solver,
                 std::uint64_t value_index, std::uint64_t trial_index);

// Resolved sweep grid (fills in the d_r values when the spec leaves them out).
std::vector<double> sweep_values(const Scenario& scenario, const SweepSpec& spec);

// Mean SNR per (value, solver) over scenario.trials trials. Rows are ordered
// by (value index, solver index). K and M sweeps hold the UE at the start of
// the d_r range.
SweepResult run_sweep(const Scenario& scenario, const SweepSpec& spec);

}  // namespace mirs

#endif  // MIRS_SIM_HPP
