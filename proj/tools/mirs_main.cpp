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
// Command-line front end.
//
//   mirs sweep        run the configured parameter sweep, emit CSV/JSON
//   mirs compare      d_r sweep over an explicit solver list
//   mirs mmin         element-count threshold and add-IRS SNR ratio
//   mirs oracle-check brute-force verification of the closed-form solver
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/config error, 3 IO error.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mirs/config.hpp"
#include "mirs/optimize.hpp"
#include "mirs/sim.hpp"
#include "mirs/sweep_io.hpp"

#ifndef MIRS_GIT_REV
#define MIRS_GIT_REV "unversioned"
#endif

namespace {

constexpr const char* kVersion = "0.1.0+" MIRS_GIT_REV;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_path = "-";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

mirs::Config load_and_resolve(const CommonOptions& opts) {
  mirs::Config config = mirs::load_config_file(opts.config_path, std::cerr);
  config.scenario.base_seed = mirs::resolve_base_seed(config.scenario.base_seed,
                                                      std::getenv("MIRS_SEED"), opts.seed);
  if (opts.threads.has_value()) config.scenario.threads = *opts.threads;
  std::cerr << "[mirs] version " << kVersion << " seed " << config.scenario.base_seed << "\n";
  std::cerr << "[mirs] resolved config: " << mirs::resolved_config_json(config) << "\n";
  return config;
}

int emit(const mirs::SweepResult& result, const CommonOptions& opts) {
  const std::string content = opts.format == "json" ? mirs::to_json(result) : mirs::to_csv(result);
  mirs::write_text(opts.out_path, content);
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

int cmd_sweep(const CommonOptions& opts) {
  const mirs::Config config = load_and_resolve(opts);
  return emit(mirs::run_sweep(config.scenario, config.sweep), opts);
}

int cmd_compare(const CommonOptions& opts, const std::string& solver_list) {
  const mirs::Config config = load_and_resolve(opts);
  const std::vector<std::string> names = split_list(solver_list);
  if (names.empty()) throw std::invalid_argument("compare: empty solver list");
  mirs::SweepSpec spec;
  spec.variable = mirs::SweepVariable::DistanceToUe;
  spec.solvers.clear();
  for (const auto& name : names) spec.solvers.push_back(mirs::SolverSpec::parse(name));
  return emit(mirs::run_sweep(config.scenario, spec), opts);
}

int cmd_mmin(const CommonOptions& opts) {
  const mirs::Config config = load_and_resolve(opts);
  const mirs::AnalyticScenario analytic =
      config.scenario.analytic(config.scenario.d_r.start_m, true);
  const double threshold = mirs::min_elements_for_added_irs(analytic);
  const double ratio = mirs::snr_gain_add_irs(analytic);
  if (opts.format == "json") {
    nlohmann::json doc;
    doc["m_min"] = threshold;
    doc["add_irs_snr_ratio"] = ratio;
    doc["m_irs_elements"] = config.scenario.irs_elements;
    mirs::write_text(opts.out_path, doc.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "m_min = " << threshold << "\n"
        << "add_irs_snr_ratio(M=" << config.scenario.irs_elements << ") = " << ratio << "\n";
    mirs::write_text(opts.out_path, out.str());
  }
  return kExitOk;
}

int cmd_oracle_check(int m, int k, int n, int levels, int trials, std::uint64_t seed) {
  using namespace mirs;
  std::cerr << "[mirs] version " << kVersion << " seed " << seed << "\n";

  LinkGeometry geo;
  geo.bs_antennas = n;
  geo.irs_elements = m;
  geo.irs_count = k;
  geo.d_t_m = geo.d_irs_m = geo.d_r_m = 1.0;
  geo.path_loss = PathLossLaw{0.0, 2.0, 1.0};

  const double bound = std::pow(std::cos(std::numbers::pi / levels), 2.0 * k);
  int failures = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const AngleAssignment angles = AngleAssignment::uniform(k, rng);
    const CascadeChanneld chain = build_cascade<double>(geo, GainMode::Random, angles, rng);
    const double closed = received_power(chain, solve_closed_form(chain, 1.0));
    const double brute = brute_force(chain, 1.0, levels).power_w;
    const bool upper_ok = brute <= closed * (1.0 + 1e-9);
    const bool lower_ok = brute >= closed * bound * (1.0 - 1e-9);
    if (!upper_ok || !lower_ok) {
      ++failures;
      std::cerr << "[oracle-check] violation at instance " << i << ": closed " << closed
                << " brute " << brute << " bound " << closed * bound << "\n";
    }
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
  std::cout << "oracle-check: " << (trials - failures) << "/" << trials
            << " instances passed (M=" << m << " K=" << k << " N=" << n << " levels=" << levels
            << ", " << elapsed.count() << " ms)\n";
  return failures == 0 ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascaded multi-IRS mmWave link simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "Run the configured parameter sweep");
  sweep->add_option("--config", sweep_opts.config_path, "Config file (JSON)")->required();
  sweep->add_option("--out", sweep_opts.out_path, "Output path, - for stdout");
  sweep->add_option("--format", sweep_opts.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--seed", sweep_opts.seed, "Base seed override");
  sweep->add_option("--threads", sweep_opts.threads, "Worker thread override");

  CommonOptions compare_opts;
  std::string solver_list;
  CLI::App* compare = app.add_subcommand("compare", "Distance sweep over an explicit solver list");
  compare->add_option("--config", compare_opts.config_path, "Config file (JSON)")->required();
  compare->add_option("--solvers", solver_list, "Comma-separated solver names")->required();
  compare->add_option("--out", compare_opts.out_path, "Output path, - for stdout");
  compare->add_option("--format", compare_opts.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  compare->add_option("--seed", compare_opts.seed, "Base seed override");
  compare->add_option("--threads", compare_opts.threads, "Worker thread override");

  CommonOptions mmin_opts;
  CLI::App* mmin = app.add_subcommand("mmin", "Element-count threshold for adding an IRS");
  mmin->add_option("--config", mmin_opts.config_path, "Config file (JSON)")->required();
  mmin->add_option("--out", mmin_opts.out_path, "Output path, - for stdout");
  mmin->add_option("--format", mmin_opts.format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  int oc_m = 2;
  int oc_k = 2;
  int oc_n = 2;
  int oc_levels = 16;
  int oc_trials = 100;
  std::uint64_t oc_seed = 1;
  CLI::App* oracle = app.add_subcommand("oracle-check", "Brute-force check of the closed form");
  oracle->add_option("--m", oc_m, "IRS elements")->check(CLI::PositiveNumber);
  oracle->add_option("--k", oc_k, "IRS count")->check(CLI::PositiveNumber);
  oracle->add_option("--n", oc_n, "BS antennas")->check(CLI::PositiveNumber);
  oracle->add_option("--levels", oc_levels, "Phase grid size")->check(CLI::Range(2, 1 << 20));
  oracle->add_option("--trials", oc_trials, "Random instances")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oc_seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
    if (compare->parsed()) return cmd_compare(compare_opts, solver_list);
    if (mmin->parsed()) return cmd_mmin(mmin_opts);
    if (oracle->parsed()) return cmd_oracle_check(oc_m, oc_k, oc_n, oc_levels, oc_trials, oc_seed);
  } catch (const mirs::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mirs::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
