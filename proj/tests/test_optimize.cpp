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
#include <numbers>

#include "mirs/channel.hpp"
#include "mirs/metrics.hpp"
#include "mirs/optimize.hpp"
#include "mirs/rng.hpp"

using namespace mirs;
using Cx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

LinkGeometry desk_geometry(int n, int m, int k) {
  LinkGeometry geo;
  geo.bs_antennas = n;
  geo.irs_elements = m;
  geo.irs_count = k;
  geo.d_t_m = geo.d_irs_m = geo.d_r_m = 1.0;
  geo.path_loss = PathLossLaw{0.0, 2.0, 1.0};
  return geo;
}

CascadeChanneld random_chain(int n, int m, int k, std::uint64_t seed,
                             GainMode mode = GainMode::Random) {
  Rng rng(seed);
  const auto angles = AngleAssignment::uniform(k, rng);
  return build_cascade<double>(desk_geometry(n, m, k), mode, angles, rng);
}

BeamformingSolutiond random_phases(const CascadeChanneld& chain, double power, std::uint64_t seed) {
  return solve_random_phase(chain, power, seed);
}

double mu_power_product(const CascadeChanneld& chain) {
  double p = std::norm(chain.bs_to_irs.mu) * std::norm(chain.irs_to_ue.mu);
  for (const auto& link : chain.irs_links) p *= std::norm(link.mu);
  return p;
}

// All-ones scalar chain: M = N = 1, every mu = 1.
CascadeChanneld unit_scalar_chain() {
  CascadeChanneld chain{make_rank1<double>(Cx(1.0), CVecd::Ones(1), CVecd::Ones(1)),
                        {},
                        make_rank1<double>(Cx(1.0), CVecd::Ones(1), CVecd::Ones(1))};
  return chain;
}

}  // namespace

TEST_CASE("alignment_vectors on the scalar chain") {
  const auto us = alignment_vectors(unit_scalar_chain());
  REQUIRE(us.size() == 1);
  REQUIRE(us[0].size() == 1);
  CHECK(std::abs(us[0][0] - Cx(1.0)) < 1e-15);
}

TEST_CASE("alignment_vectors element-wise product convention") {
  // Arrival response (1/sqrt 2)[1, 1], departure response (1/sqrt 2)[1, -1]:
  // u = conj(depart) .* arrive = (1/2)[1, -1].
  const double s = 1.0 / std::sqrt(2.0);
  CVecd arrive(2);
  arrive << Cx(s), Cx(s);
  CVecd depart(2);
  depart << Cx(s), Cx(-s);
  CascadeChanneld chain{make_rank1<double>(Cx(1.0), arrive, CVecd::Ones(1)),
                        {},
                        make_rank1<double>(Cx(1.0), CVecd::Ones(1), depart)};
  const auto us = alignment_vectors(chain);
  REQUIRE(us.size() == 1);
  CHECK(std::abs(us[0][0] - Cx(0.5)) < 1e-15);
  CHECK(std::abs(us[0][1] - Cx(-0.5)) < 1e-15);
}

TEST_CASE("alignment vectors of any chain have unit absolute sum") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 8);
    const int k = 1 + static_cast<int>(rng.next_u64() % 3);
    const auto chain = random_chain(2, m, k, derive_seed(100, trial));
    for (const auto& u : alignment_vectors(chain))
      CHECK(u.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("factored form equals the dense chain for arbitrary phases") {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 6);
    const int k = 1 + static_cast<int>(rng.next_u64() % 3);
    const int n = 1 + static_cast<int>(rng.next_u64() % 6);
    const auto chain = random_chain(n, m, k, derive_seed(200, trial));
    const auto sol = random_phases(chain, 2.0, derive_seed(201, trial));
    const Cx dense = end_to_end_gain(to_dense(chain), sol);
    const Cx factored = factored_gain(chain, sol);
    CHECK(std::abs(dense - factored) <= 1e-9 * std::max(1e-300, std::abs(dense)));
  }
}

TEST_CASE("phase_align cancels the argument of every entry") {
  CVecd u(3);
  u << Cx(1.0, 0.0), Cx(0.0, 1.0), Cx(-1.0, 0.0);
  const RVecd theta = phase_align(u);
  CHECK(theta[0] == doctest::Approx(0.0));
  CHECK(theta[1] == doctest::Approx(-kPi / 2.0));
  CHECK(std::abs(std::remainder(theta[2] - kPi, 2.0 * kPi)) < 1e-12);
  Cx sum(0.0);
  for (int i = 0; i < 3; ++i) sum += std::polar(1.0, theta[i]) * u[i];
  CHECK(std::abs(sum - Cx(3.0)) < 1e-12);
}

TEST_CASE("phase_align keeps aligned input untouched") {
  CVecd u(2);
  u << Cx(0.5), Cx(0.5);
  const RVecd theta = phase_align(u);
  CHECK(theta[0] == 0.0);
  CHECK(theta[1] == 0.0);
}

TEST_CASE("phase_align reaches the absolute-sum bound") {
  Rng rng(23);
  CVecd u(64);
  for (int i = 0; i < 64; ++i) u[i] = Cx(rng.next_uniform(-1, 1), rng.next_uniform(-1, 1));
  const RVecd theta = phase_align(u);
  Cx sum(0.0);
  double abs_sum = 0.0;
  for (int i = 0; i < 64; ++i) {
    sum += std::polar(1.0, theta[i]) * u[i];
    abs_sum += std::abs(u[i]);
  }
  CHECK(std::abs(sum - Cx(abs_sum)) < 1e-10);
}

TEST_CASE("phase_align maps zero entries to phase zero") {
  CVecd u(2);
  u << Cx(0.0), Cx(0.0, -2.0);
  const RVecd theta = phase_align(u);
  CHECK(theta[0] == 0.0);
  CHECK(theta[1] == doctest::Approx(kPi / 2.0));
}

TEST_CASE("mrt_precoder examples and power use") {
  const CVecd w = mrt_precoder<double>(CVecd::Ones(1), 4.0);
  CHECK(std::abs(w[0] - Cx(2.0)) < 1e-15);

  CVecd beta(4);
  beta << Cx(0.5), Cx(0.5), Cx(0.5), Cx(0.5);
  const CVecd w2 = mrt_precoder(beta, 1.0);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(w2[i] - Cx(0.5)) < 1e-15);

  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto b = array_response<double>(8, rng.next_uniform(-kPi / 2.0, kPi / 2.0));
    const double p = rng.next_uniform(0.1, 9.0);
    const CVecd w3 = mrt_precoder(b, p);
    CHECK(w3.squaredNorm() == doctest::Approx(p).epsilon(1e-12));
    CHECK(std::norm(b.dot(w3)) == doctest::Approx(p).epsilon(1e-12));
  }

  CHECK_THROWS_AS((void)mrt_precoder<double>(CVecd::Zero(3), 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)mrt_precoder<double>(CVecd::Ones(1), 0.0), std::invalid_argument);
}

TEST_CASE("closed form on the lossless scalar chain delivers the full power") {
  const auto chain = unit_scalar_chain();
  const auto sol = solve_closed_form(chain, 1.0);
  CHECK(received_power(chain, sol) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form received power equals P times the squared gain product") {
  LinkGeometry geo = desk_geometry(4, 4, 2);
  geo.path_loss = PathLossLaw{10.0, 2.0, 1.0};
  Rng rng(32);
  const auto angles = AngleAssignment::uniform(2, rng);
  const auto chain = build_cascade<double>(geo, GainMode::DeterministicAmplitude, angles, rng);
  const double p = 3.0;
  const auto sol = solve_closed_form(chain, p);
  const double expected = p * mu_power_product(chain);
  CHECK(received_power(chain, sol) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(received_power(to_dense(chain), sol) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("closed-form power does not depend on the angle draw") {
  LinkGeometry geo = desk_geometry(4, 8, 3);
  geo.path_loss = PathLossLaw{5.0, 2.0, 1.0};
  Rng rng(33);
  double first = -1.0;
  for (int redraw = 0; redraw < 5; ++redraw) {
    const auto angles = AngleAssignment::uniform(3, rng);
    const auto chain = build_cascade<double>(geo, GainMode::DeterministicAmplitude, angles, rng);
    const double power = received_power(chain, solve_closed_form(chain, 1.0));
    if (first < 0.0)
      first = power;
    else
      CHECK(power == doctest::Approx(first).epsilon(1e-9));
  }
}

TEST_CASE("closed form dominates every other solver on rank-1 chains") {
  for (int trial = 0; trial < 25; ++trial) {
    const auto chain = random_chain(3, 3, 2, derive_seed(300, trial));
    const double p = 2.0;
    const double closed = received_power(chain, solve_closed_form(chain, p));
    const double greedy = received_power(chain, solve_greedy_quantized(chain, p, 2));
    const double random = received_power(chain, solve_random_phase(chain, p, trial));
    const double alt = solve_alternating(chain, p, 20, 1e-12).power_trace.back();
    const double brute = brute_force(chain, p, 8).power_w;
    const double slack = closed * (1.0 + 1e-9);
    CHECK(greedy <= slack);
    CHECK(random <= slack);
    CHECK(alt <= slack);
    CHECK(brute <= slack);
  }
}

TEST_CASE("greedy with a single element matches the closed form") {
  const auto chain = random_chain(3, 1, 2, 404);
  const double closed = received_power(chain, solve_closed_form(chain, 1.0));
  for (int bits = 1; bits <= 3; ++bits) {
    const double greedy = received_power(chain, solve_greedy_quantized(chain, 1.0, bits));
    CHECK(greedy == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("one-bit greedy on u = (1/2)[1, j] matches the exhaustive grid") {
  // Arrival response at angle 0, departure response with pi sin(angle) = -pi/2,
  // so u = conj(depart) .* arrive = (1/2)[1, j].
  const CVecd arrive = array_response<double>(2, 0.0);
  const CVecd depart = array_response<double>(2, std::asin(-0.5));
  CascadeChanneld chain{make_rank1<double>(Cx(1.0), arrive, CVecd::Ones(1)),
                        {},
                        make_rank1<double>(Cx(1.0), CVecd::Ones(1), depart)};
  const auto us = alignment_vectors(chain);
  REQUIRE(us.size() == 1);
  CHECK(std::abs(us[0][0] - Cx(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(us[0][1] - Cx(0.0, 0.5)) < 1e-12);

  const double closed = received_power(chain, solve_closed_form(chain, 1.0));
  const double greedy = received_power(chain, solve_greedy_quantized(chain, 1.0, 1));

  // Exhaustive 1-bit grid: phases in {0, pi} per element.
  double best = 0.0;
  for (int q0 = 0; q0 < 2; ++q0)
    for (int q1 = 0; q1 < 2; ++q1) {
      BeamformingSolutiond sol;
      RVecd theta(2);
      theta << q0 * kPi, q1 * kPi;
      sol.phase_shifts.push_back(theta);
      sol.precoder = mrt_precoder(chain.bs_to_irs.tx, 1.0);
      best = std::max(best, received_power(chain, sol));
    }
  CHECK(greedy == doctest::Approx(best).epsilon(1e-12));
  CHECK(greedy < closed * (1.0 - 1e-6));
  CHECK(best == doctest::Approx(0.5).epsilon(1e-12));  // |1 + j|^2 / 4
}

TEST_CASE("greedy quantization loss is bounded by cos^(2K)(pi/2^bits)") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto chain = random_chain(2, 5, 2, derive_seed(500, trial));
    const double closed = received_power(chain, solve_closed_form(chain, 1.0));
    for (int bits = 1; bits <= 4; ++bits) {
      const double greedy = received_power(chain, solve_greedy_quantized(chain, 1.0, bits));
      const double bound = std::pow(std::cos(kPi / (1 << bits)), 4.0);  // K = 2
      CHECK(greedy >= closed * bound * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("random-phase solver is deterministic per seed") {
  const auto chain = random_chain(3, 4, 2, 600);
  const auto a = solve_random_phase(chain, 1.0, 42);
  const auto b = solve_random_phase(chain, 1.0, 42);
  const auto c = solve_random_phase(chain, 1.0, 43);
  for (int k = 0; k < 2; ++k) {
    CHECK((a.phase_shifts[k].array() == b.phase_shifts[k].array()).all());
  }
  CHECK_FALSE((a.phase_shifts[0].array() == c.phase_shifts[0].array()).all());
}

TEST_CASE("random-phase solver with one element matches the closed form") {
  const auto chain = random_chain(4, 1, 1, 601);
  const double closed = received_power(chain, solve_closed_form(chain, 1.0));
  const double random = received_power(chain, solve_random_phase(chain, 1.0, 9));
  CHECK(random == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("random phases lose a factor of about M on one IRS") {
  const int m = 8;
  const auto chain = random_chain(2, m, 1, 602);
  const double closed = received_power(chain, solve_closed_form(chain, 1.0));
  double sum = 0.0;
  const int n = 20'000;
  for (int seed = 0; seed < n; ++seed)
    sum += received_power(chain, solve_random_phase(chain, 1.0, derive_seed(603, seed)));
  const double ratio = (sum / n) / closed;
  CHECK(ratio == doctest::Approx(1.0 / m).epsilon(0.10));
}

TEST_CASE("alternating optimization reaches the closed form in one sweep on rank-1 chains") {
  for (int trial = 0; trial < 10; ++trial) {
    const auto chain = random_chain(4, 5, 2, derive_seed(700, trial));
    const double closed = received_power(chain, solve_closed_form(chain, 1.0));
    const auto res = solve_alternating(chain, 1.0, 10, 1e-12);
    REQUIRE(!res.power_trace.empty());
    CHECK(res.power_trace.front() == doctest::Approx(closed).epsilon(1e-9));
    CHECK(res.converged);
  }
}

TEST_CASE("alternating optimization power trace is nondecreasing") {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    // Two-path hops make the problem genuinely multimodal.
    auto path = [&] {
      return PathComponent<double>{Cx(rng.next_uniform(-1, 1), rng.next_uniform(-1, 1)),
                                   rng.next_uniform(-kPi / 2, kPi / 2),
                                   rng.next_uniform(-kPi / 2, kPi / 2)};
    };
    const MultipathCascade<double> cascade{
        MultipathChannel<double>({path(), path()}, 3, 2),
        {},
        MultipathChannel<double>({path(), path()}, 1, 3)};
    const auto res = solve_alternating(to_dense(cascade), 1.0, 25, 1e-15);
    for (std::size_t i = 1; i < res.power_trace.size(); ++i)
      CHECK(res.power_trace[i] >= res.power_trace[i - 1] * (1.0 - 1e-12));
  }
}

TEST_CASE("alternating optimization on a two-path instance is near brute force or a fixed point") {
  Rng rng(72);
  int matched = 0;
  for (int trial = 0; trial < 8; ++trial) {
    auto path = [&] {
      return PathComponent<double>{Cx(rng.next_uniform(-1, 1), rng.next_uniform(-1, 1)),
                                   rng.next_uniform(-kPi / 2, kPi / 2),
                                   rng.next_uniform(-kPi / 2, kPi / 2)};
    };
    const MultipathCascade<double> cascade{
        MultipathChannel<double>({path(), path()}, 2, 2),
        {},
        MultipathChannel<double>({path(), path()}, 1, 2)};
    const auto dense = to_dense(cascade);
    const auto res = solve_alternating(dense, 1.0, 60, 1e-14);
    const auto brute = brute_force(dense, 1.0, 64);
    const double final_power = res.power_trace.back();
    if (final_power >= 0.999 * brute.power_w) {
      ++matched;
    } else {
      // Must at least be a fixed point of the sweep.
      CHECK(res.converged);
    }
  }
  CHECK(matched >= 1);
}

TEST_CASE("brute force equals the closed form for a single element") {
  const auto chain = random_chain(2, 1, 1, 800);
  const double closed = received_power(chain, solve_closed_form(chain, 1.0));
  for (int levels : {2, 3, 16}) {
    const auto res = brute_force(chain, 1.0, levels);
    CHECK(res.power_w == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("brute force brackets the closed form at 16 levels") {
  for (int trial = 0; trial < 5; ++trial) {
    const auto chain = random_chain(2, 2, 2, derive_seed(801, trial));
    const double closed = received_power(chain, solve_closed_form(chain, 1.0));
    const auto res = brute_force(chain, 1.0, 16);
    CHECK(res.power_w <= closed * (1.0 + 1e-9));
    CHECK(res.power_w >= closed * std::pow(std::cos(kPi / 16.0), 4.0) * (1.0 - 1e-12));
  }
}

TEST_CASE("brute force enforces the search-space guard") {
  const auto chain = random_chain(2, 4, 4, 802);
  CHECK_THROWS_AS((void)brute_force(chain, 1.0, 16), std::length_error);
}

TEST_CASE("refining the phase grid never lowers the brute-force optimum") {
  // The q/L grid is a subset of the q/(2L) grid, so doubling levels can only
  // improve the exhaustive optimum.
  for (int trial = 0; trial < 5; ++trial) {
    const auto chain = random_chain(3, 2, 2, derive_seed(810, trial));
    double previous = 0.0;
    for (int levels : {2, 4, 8, 16}) {
      const double power = brute_force(chain, 1.0, levels).power_w;
      CHECK(power >= previous * (1.0 - 1e-12));
      previous = power;
    }
  }
}

TEST_CASE("brute force on the same grid dominates the greedy alignment") {
  for (int trial = 0; trial < 10; ++trial) {
    const auto chain = random_chain(2, 3, 2, derive_seed(820, trial));
    for (int bits = 1; bits <= 3; ++bits) {
      const double greedy = received_power(chain, solve_greedy_quantized(chain, 1.0, bits));
      const double brute = brute_force(chain, 1.0, 1 << bits).power_w;
      CHECK(brute >= greedy * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("generated multipath cascades feed the rank-agnostic solvers") {
  LinkGeometry geo = desk_geometry(3, 4, 2);
  Rng rng(830);
  const auto cascade = build_multipath_cascade<double>(geo, 3, GainMode::Random, rng);
  CHECK(cascade.irs_count() == 2);
  CHECK(cascade.bs_to_irs.paths.size() == 3);
  const auto dense = to_dense(cascade);
  CHECK(dense.bs_to_irs.rows() == 4);
  CHECK(dense.bs_to_irs.cols() == 3);
  CHECK(dense.irs_to_ue.cols() == 4);

  const auto res = solve_alternating(dense, 1.0, 30, 1e-14);
  for (std::size_t i = 1; i < res.power_trace.size(); ++i)
    CHECK(res.power_trace[i] >= res.power_trace[i - 1] * (1.0 - 1e-12));

  Rng rng2(830);
  const auto again = build_multipath_cascade<double>(geo, 3, GainMode::Random, rng2);
  CHECK((to_dense(again).bs_to_irs.array() == dense.bs_to_irs.array()).all());

  CHECK_THROWS_AS((void)build_multipath_cascade<double>(geo, 0, GainMode::Random, rng),
                  std::invalid_argument);
}

TEST_CASE("brute force result does not depend on the thread split") {
  const auto chain = random_chain(2, 2, 2, 803);
  const auto serial = brute_force(chain, 1.0, 8, 1);
  const auto parallel = brute_force(chain, 1.0, 8, 3);
  CHECK(serial.power_w == parallel.power_w);
  CHECK(serial.candidate_index == parallel.candidate_index);
}

TEST_CASE("scaling the power budget scales every solver's power linearly") {
  const auto chain = random_chain(3, 3, 2, 900);
  const double c = 3.7;
  const auto lo = solve_closed_form(chain, 1.0);
  const auto hi = solve_closed_form(chain, c);
  CHECK(received_power(chain, hi) ==
        doctest::Approx(c * received_power(chain, lo)).epsilon(1e-12));
  for (int k = 0; k < 2; ++k)
    CHECK((lo.phase_shifts[k].array() == hi.phase_shifts[k].array()).all());

  const auto glo = solve_greedy_quantized(chain, 1.0, 2);
  const auto ghi = solve_greedy_quantized(chain, c, 2);
  CHECK(received_power(chain, ghi) ==
        doctest::Approx(c * received_power(chain, glo)).epsilon(1e-12));
}

TEST_CASE("a global phase on any hop gain leaves achieved powers unchanged") {
  auto chain = random_chain(3, 3, 2, 901);
  const double closed = received_power(chain, solve_closed_form(chain, 1.0));
  const double greedy = received_power(chain, solve_greedy_quantized(chain, 1.0, 2));
  const double random = received_power(chain, solve_random_phase(chain, 1.0, 5));

  chain.irs_links[0].mu *= std::polar(1.0, 1.234);
  CHECK(received_power(chain, solve_closed_form(chain, 1.0)) ==
        doctest::Approx(closed).epsilon(1e-12));
  CHECK(received_power(chain, solve_greedy_quantized(chain, 1.0, 2)) ==
        doctest::Approx(greedy).epsilon(1e-12));
  CHECK(received_power(chain, solve_random_phase(chain, 1.0, 5)) ==
        doctest::Approx(random).epsilon(1e-12));
}

TEST_CASE("solver specs parse and print consistently") {
  CHECK(SolverSpec::parse("closed_form").kind == SolverSpec::Kind::ClosedForm);
  CHECK(SolverSpec::parse("random_phase").kind == SolverSpec::Kind::RandomPhase);
  CHECK(SolverSpec::parse("alt_opt").kind == SolverSpec::Kind::AlternatingOpt);
  CHECK(SolverSpec::parse("greedy_q2").bits == 2);
  CHECK(SolverSpec::parse("greedy_q11").bits == 11);
  CHECK(SolverSpec::parse("brute_force16").levels == 16);
  for (const char* name : {"closed_form", "random_phase", "greedy_q2", "alt_opt", "brute_force8"})
    CHECK(SolverSpec::parse(name).name() == name);
  CHECK_THROWS_AS((void)SolverSpec::parse("magic"), std::invalid_argument);
  CHECK_THROWS_AS((void)SolverSpec::parse("greedy_q0"), std::invalid_argument);
  CHECK_THROWS_AS((void)SolverSpec::parse("greedy_qx"), std::invalid_argument);
  CHECK_THROWS_AS((void)SolverSpec::parse(""), std::invalid_argument);
}

TEST_CASE("core solvers also instantiate in single precision") {
  Rng rng(77);
  const auto angles = AngleAssignment::uniform(1, rng);
  const auto chain = build_cascade<float>(desk_geometry(2, 3, 1), GainMode::Random, angles, rng);
  const auto sol = solve_closed_form(chain, 1.0f);
  const float dense = received_power(to_dense(chain), sol);
  const float fast = received_power(chain, sol);
  CHECK(dense == doctest::Approx(fast).epsilon(1e-4));
}
