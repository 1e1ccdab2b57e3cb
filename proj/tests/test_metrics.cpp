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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "mirs/channel.hpp"
#include "mirs/metrics.hpp"
#include "mirs/optimize.hpp"
#include "mirs/scenario.hpp"

using namespace mirs;
using Cx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

CascadeChanneld random_chain(int n, int m, int k, std::uint64_t seed, GainMode mode) {
  LinkGeometry geo;
  geo.bs_antennas = n;
  geo.irs_elements = m;
  geo.irs_count = k;
  geo.d_t_m = geo.d_irs_m = geo.d_r_m = 1.0;
  geo.path_loss = PathLossLaw{0.0, 2.0, 1.0};
  Rng rng(seed);
  const auto angles = AngleAssignment::uniform(k, rng);
  return build_cascade<double>(geo, mode, angles, rng);
}

AnalyticScenario section_v_analytic(int m, int n, int k, bool literal) {
  AnalyticScenario s;
  s.d_t_m = 20.0;
  s.d_r_m = 20.0;
  s.d_irs_m = 20.0;
  s.exponent_n = 2.0;
  s.g0 = std::pow(10.0, -6.14);
  s.budget = LinkBudget{dbm_to_watt(46.0), dbm_to_watt(-94.0), n, m, k};
  s.literal_mode = literal;
  return s;
}

}  // namespace

TEST_CASE("received power of the identity scalar chain is one") {
  const CascadeChanneld chain{make_rank1<double>(Cx(1.0), CVecd::Ones(1), CVecd::Ones(1)),
                              {},
                              make_rank1<double>(Cx(1.0), CVecd::Ones(1), CVecd::Ones(1))};
  BeamformingSolutiond sol;
  sol.precoder = CVecd::Ones(1);
  sol.phase_shifts.push_back(RVecd::Zero(1));
  CHECK(received_power(chain, sol) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(received_power(to_dense(chain), sol) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("zero precoder receives nothing") {
  const auto chain = random_chain(3, 4, 2, 40, GainMode::Random);
  BeamformingSolutiond sol;
  sol.precoder = CVecd::Zero(3);
  sol.phase_shifts.assign(2, RVecd::Zero(4));
  CHECK(received_power(chain, sol) == 0.0);
}

TEST_CASE("received_power validates dimensions") {
  const auto chain = random_chain(3, 4, 2, 41, GainMode::Random);
  BeamformingSolutiond sol;
  sol.precoder = CVecd::Ones(2);  // wrong N
  sol.phase_shifts.assign(2, RVecd::Zero(4));
  CHECK_THROWS_AS((void)received_power(chain, sol), std::invalid_argument);

  sol.precoder = CVecd::Ones(3);
  sol.phase_shifts.assign(1, RVecd::Zero(4));  // wrong K
  CHECK_THROWS_AS((void)received_power(chain, sol), std::invalid_argument);

  sol.phase_shifts.assign(2, RVecd::Zero(3));  // wrong M
  CHECK_THROWS_AS((void)received_power(to_dense(chain), sol), std::invalid_argument);
}

TEST_CASE("factored-storage evaluator agrees with the dense evaluator") {
  for (int trial = 0; trial < 50; ++trial) {
    const auto chain = random_chain(1 + trial % 5, 1 + trial % 7, 1 + trial % 3,
                                    derive_seed(42, trial), GainMode::Random);
    const auto sol = solve_random_phase(chain, 2.5, derive_seed(43, trial));
    const double dense = received_power(to_dense(chain), sol);
    const double fast = received_power(chain, sol);
    CHECK(fast == doctest::Approx(dense).epsilon(1e-12));
  }
}

TEST_CASE("snr conversions") {
  CHECK(snr_linear(1e-9, 1e-12) == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(snr_db(1e-9, 1e-12) == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(snr_linear(0.0, 1.0) == 0.0);
  CHECK(snr_db(0.0, 1.0) == -std::numeric_limits<double>::infinity());
  CHECK(snr_linear(3.5e-7, 3.5e-7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(snr_db(3.5e-7, 3.5e-7) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)snr_linear(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("analytic SNR with one IRS ignores the inter-IRS spacing") {
  AnalyticScenario s = section_v_analytic(64, 16, 1, true);
  const double base = analytic_snr(s);
  s.d_irs_m = 123.0;
  CHECK(analytic_snr(s) == doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("doubling the element count multiplies the analytic SNR by 2^(2K)") {
  for (int k = 1; k <= 4; ++k) {
    AnalyticScenario s = section_v_analytic(250, 32, k, true);
    const double base = analytic_snr(s);
    s.budget.irs_elements = 500;
    CHECK(analytic_snr(s) / base == doctest::Approx(std::pow(2.0, 2.0 * k)).epsilon(1e-9));
  }
}

TEST_CASE("analytic SNR golden values for the default link budget") {
  // K=3, M=1000, N=128, P=46 dBm, N0=-94 dBm, d_t=d_r=d_irs=20 m, n=2,
  // g0=10^-6.14. Frozen from independent high-precision evaluation.
  const double literal = analytic_snr(section_v_analytic(1000, 128, 3, true));
  CHECK(literal == doctest::Approx(3.45915485459468244e11).epsilon(1e-12));
  const double power_consistent = analytic_snr(section_v_analytic(1000, 128, 3, false));
  CHECK(power_consistent == doctest::Approx(0.137711435166908322).epsilon(1e-12));
  CHECK_THROWS_AS((void)analytic_snr(section_v_analytic(10, 4, 0, true)), std::invalid_argument);
}

TEST_CASE("the analytic distance law has slope -10n per decade") {
  for (double n_exp : {2.0, 2.6, 3.7}) {
    AnalyticScenario s = section_v_analytic(100, 8, 2, true);
    s.exponent_n = n_exp;
    s.d_r_m = 2.0;
    const double db_1 = linear_to_db(analytic_snr(s));
    s.d_r_m = 47.0;
    const double db_2 = linear_to_db(analytic_snr(s));
    const double slope = (db_2 - db_1) / (std::log10(47.0) - std::log10(2.0));
    CHECK(slope == doctest::Approx(-10.0 * n_exp).epsilon(1e-9));
  }
}

TEST_CASE("add-IRS ratio crosses one exactly at the element threshold") {
  const AnalyticScenario s = section_v_analytic(1000, 128, 3, true);
  const double m_min = min_elements_for_added_irs(s);
  CHECK(m_min == doctest::Approx(23497.9510987905908).epsilon(1e-12));
  CHECK(snr_gain_add_irs(s, m_min) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(snr_gain_add_irs(s, std::floor(m_min) - 1.0) < 1.0);
  CHECK(snr_gain_add_irs(s, std::ceil(m_min) + 1.0) > 1.0);
  CHECK(snr_gain_add_irs(s) == doctest::Approx(1.81108990018747516e-3).epsilon(1e-12));
}

TEST_CASE("element threshold closed-form properties") {
  AnalyticScenario s;
  s.d_irs_m = 7.0;
  s.exponent_n = 2.0;
  s.g0 = 49.0;  // g0 = d^n
  s.budget.irs_count = 1;
  CHECK(min_elements_for_added_irs(s) == doctest::Approx(1.0).epsilon(1e-12));

  AnalyticScenario t = section_v_analytic(10, 4, 2, true);
  const double base = min_elements_for_added_irs(t);
  t.d_irs_m *= 4.0;
  CHECK(min_elements_for_added_irs(t) ==
        doctest::Approx(base * std::pow(4.0, t.exponent_n / 2.0)).epsilon(1e-12));

  // With exponent 2.6 the threshold lands between 5e4 and 7e4.
  AnalyticScenario u = section_v_analytic(1000, 128, 3, true);
  u.exponent_n = 2.6;
  const double m_min = min_elements_for_added_irs(u);
  CHECK(m_min == doctest::Approx(57721.6841916658723).epsilon(1e-12));
  CHECK(m_min > 5e4);
  CHECK(m_min < 7e4);
}

TEST_CASE("deterministic simulation matches the power-consistent analytic SNR") {
  Scenario sc;
  sc.bs_antennas = 8;
  sc.irs_elements = 16;
  sc.irs_count = 2;
  sc.gain_mode = GainMode::DeterministicAmplitude;
  sc.d_t_m = 20.0;
  sc.d_irs_m = 20.0;

  const double d_r = 20.0;
  Rng rng(4242);
  const auto angles = AngleAssignment::uniform(sc.irs_count, rng);
  const auto chain = build_cascade<double>(sc.link(d_r), sc.gain_mode, angles, rng);
  const auto sol = solve_closed_form(chain, sc.p_tx_w());
  CHECK(std::abs(chain.bs_to_irs.tx.squaredNorm() - 1.0) < 1e-12);

  const double simulated = snr_linear(received_power(chain, sol), sc.noise_w());
  const double analytic = analytic_snr(sc.analytic(d_r, false));
  CHECK(simulated == doctest::Approx(analytic).epsilon(1e-6));
}
