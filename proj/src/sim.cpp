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

#include "mirs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "mirs/metrics.hpp"
#include "mirs/rng.hpp"

namespace mirs {

namespace {

// Salt separating solver-internal randomness from the channel stream.
constexpr std::uint64_t kSolverStream = 0x736f6c766572ULL;

struct MeanStats {
  double mean_db = 0.0;
  double stderr_db = 0.0;
};

// Ordered fold over the samples; identical bytes regardless of how the
// samples were produced.
MeanStats reduce(const std::vector<double>& snr_linear_samples, MeanScale scale) {
  const auto n = static_cast<double>(snr_linear_samples.size());
  MeanStats out;
  if (scale == MeanScale::Linear) {
    double sum = 0.0;
    for (const double x : snr_linear_samples) sum += x;
    const double mean = sum / n;
    double var = 0.0;
    for (const double x : snr_linear_samples) var += (x - mean) * (x - mean);
    var = snr_linear_samples.size() > 1 ? var / (n - 1.0) : 0.0;
    out.mean_db = linear_to_db(mean);
    const double stderr_lin = std::sqrt(var / n);
    out.stderr_db = mean > 0.0 ? 10.0 / std::numbers::ln10 * stderr_lin / mean : 0.0;
  } else {
    double sum = 0.0;
    for (const double x : snr_linear_samples) sum += linear_to_db(x);
    const double mean = sum / n;
    double var = 0.0;
    for (const double x : snr_linear_samples) {
      const double d = linear_to_db(x) - mean;
      var += d * d;
    }
    var = snr_linear_samples.size() > 1 ? var / (n - 1.0) : 0.0;
    out.mean_db = mean;
    out.stderr_db = std::sqrt(var / n);
  }
  return out;
}

Scenario apply_value(const Scenario& base, SweepVariable variable, double value) {
  Scenario sc = base;
  switch (variable) {
    case SweepVariable::DistanceToUe:
      break;
    case SweepVariable::IrsCount:
    case SweepVariable::IrsElements: {
      if (value < 1.0 || value != std::floor(value))
        throw std::invalid_argument("run_sweep: K/M sweep values must be positive integers");
      if (variable == SweepVariable::IrsCount)
        sc.irs_count = static_cast<int>(value);
      else
        sc.irs_elements = static_cast<int>(value);
      break;
    }
  }
  return sc;
}

}  // namespace

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::DistanceToUe: return "d_r";
    case SweepVariable::IrsCount: return "K";
    case SweepVariable::IrsElements: return "M";
  }
  return "?";
}

SweepVariable sweep_variable_from_string(const std::string& s) {
  if (s == "d_r") return SweepVariable::DistanceToUe;
  if (s == "K") return SweepVariable::IrsCount;
  if (s == "M") return SweepVariable::IrsElements;
  throw std::invalid_argument("unknown sweep variable: " + s);
}

double run_trial(const Scenario& scenario, double d_r_m, const SolverSpec& solver,
                 std::uint64_t value_index, std::uint64_t trial_index) {
  const std::uint64_t seed = derive_seed(scenario.base_seed, value_index, trial_index);
  Rng rng(seed);
  const AngleAssignment angles =
      scenario.angle_policy == AnglePolicy::Fixed
          ? AngleAssignment::fixed(scenario.fixed_aod_rad, scenario.fixed_aoa_rad)
          : AngleAssignment::uniform(scenario.irs_count, rng);
  const CascadeChanneld chain =
      build_cascade<double>(scenario.link(d_r_m), scenario.gain_mode, angles, rng);

  const double power = scenario.p_tx_w();
  BeamformingSolutiond sol;
  switch (solver.kind) {
    case SolverSpec::Kind::ClosedForm:
      sol = solve_closed_form(chain, power);
      break;
    case SolverSpec::Kind::GreedyQuantized:
      sol = solve_greedy_quantized(chain, power, solver.bits);
      break;
    case SolverSpec::Kind::RandomPhase:
      sol = solve_random_phase(chain, power, derive_seed(seed, kSolverStream));
      break;
    case SolverSpec::Kind::AlternatingOpt:
      sol = solve_alternating(to_dense(chain), power, solver.max_iters, solver.tol).solution;
      break;
    case SolverSpec::Kind::BruteForce:
      sol = brute_force(to_dense(chain), power, solver.levels).solution;
      break;
  }
  return snr_linear(received_power(chain, sol), scenario.noise_w());
}

std::vector<double> sweep_values(const Scenario& scenario, const SweepSpec& spec) {
  std::vector<double> values = spec.values;
  if (values.empty()) {
    if (spec.variable != SweepVariable::DistanceToUe)
      throw std::invalid_argument("run_sweep: K/M sweeps need an explicit values list");
    values = scenario.d_r_values();
  }
  if (values.empty()) throw std::invalid_argument("run_sweep: empty value grid");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw std::invalid_argument("run_sweep: values must be strictly increasing");
  if (spec.variable == SweepVariable::DistanceToUe && values.front() < scenario.path_loss.d0_m)
    throw std::invalid_argument("run_sweep: UE distances must be >= the reference distance d0");
  return values;
}

SweepResult run_sweep(const Scenario& scenario, const SweepSpec& spec) {
  scenario.validate();
  if (spec.solvers.empty()) throw std::invalid_argument("run_sweep: no solvers given");
  const std::vector<double> values = sweep_values(scenario, spec);

  unsigned workers = scenario.threads > 0 ? static_cast<unsigned>(scenario.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(scenario.trials));

  SweepResult result;
  result.rows.reserve(values.size() * spec.solvers.size());
  const std::string variable = to_string(spec.variable);

  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    const double value = values[vi];
    const Scenario sc = apply_value(scenario, spec.variable, value);
    const double d_r_m =
        spec.variable == SweepVariable::DistanceToUe ? value : scenario.d_r.start_m;

    for (const SolverSpec& solver : spec.solvers) {
      std::vector<double> samples(static_cast<std::size_t>(sc.trials));
      std::vector<std::exception_ptr> errors(workers);

      auto worker = [&](std::size_t slot, std::size_t lo, std::size_t hi) {
        try {
          for (std::size_t t = lo; t < hi; ++t)
            samples[t] = run_trial(sc, d_r_m, solver, vi, t);
        } catch (...) {
          errors[slot] = std::current_exception();
        }
      };

      if (workers <= 1) {
        worker(0, 0, samples.size());
      } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (samples.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
          const std::size_t lo = chunk * w;
          const std::size_t hi = std::min(samples.size(), lo + chunk);
          if (lo >= hi) break;
          pool.emplace_back(worker, w, lo, hi);
        }
        for (auto& th : pool) th.join();
      }
      for (const auto& error : errors)
        if (error) std::rethrow_exception(error);

      const MeanStats stats = reduce(samples, sc.mean_scale);
      result.rows.push_back(SweepRow{variable, value, solver.name(), stats.mean_db,
                                     stats.stderr_db, sc.trials});
    }
  }
  return result;
}

}  // namespace mirs
