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
// Received-power and SNR evaluation. The dense-chain evaluator is the ground
// truth every solver is scored by: it multiplies the matrix chain
//   h_ue^H Theta_K G_{K-1} ... G_1 Theta_1 T w
// out directly, with no factorization shortcuts. The analytic formulas give
// the closed-form SNR for the deterministic gain conventions.

#ifndef MIRS_METRICS_HPP
#define MIRS_METRICS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "mirs/channel.hpp"
#include "mirs/types.hpp"

namespace mirs {

namespace detail {

template <typename T>
void check_solution_dims(Eigen::Index m, Eigen::Index n, int k_irs,
                         const BeamformingSolution<T>& sol) {
  if (sol.precoder.size() != n)
    throw std::invalid_argument("received_power: precoder length does not match BS antennas");
  if (sol.irs_count() != k_irs)
    throw std::invalid_argument("received_power: solution has wrong number of phase vectors");
  for (const auto& th : sol.phase_shifts)
    if (th.size() != m)
      throw std::invalid_argument("received_power: phase vector length does not match elements");
}

template <typename T>
CVec<T> unit_phasors(const RVec<T>& theta) {
  CVec<T> p(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) p[i] = std::polar(T(1), theta[i]);
  return p;
}

}  // namespace detail

// End-to-end complex gain of the materialized chain under a given solution.
template <typename T>
std::complex<T> end_to_end_gain(const DenseCascade<T>& chain, const BeamformingSolution<T>& sol) {
  const int k_irs = chain.irs_count();
  detail::check_solution_dims(chain.elements(), chain.antennas(), k_irs, sol);
  CVec<T> x = chain.bs_to_irs * sol.precoder;
  for (int k = 0; k < k_irs; ++k) {
    x.array() *= detail::unit_phasors(sol.phase_shifts[static_cast<std::size_t>(k)]).array();
    if (k + 1 < k_irs) x = chain.irs_links[static_cast<std::size_t>(k)] * x;
  }
  return (chain.irs_to_ue * x)(0);
}

// Same chain algebra on the factored rank-1 hops, O(K*M + N) per call. Agrees
// with the dense evaluator to rounding error; used where M is large.
template <typename T>
std::complex<T> end_to_end_gain(const CascadeChannel<T>& chain, const BeamformingSolution<T>& sol) {
  const int k_irs = chain.irs_count();
  detail::check_solution_dims(chain.elements(), chain.antennas(), k_irs, sol);
  const std::complex<T> into_first = chain.bs_to_irs.mu * chain.bs_to_irs.tx.dot(sol.precoder);
  CVec<T> x = into_first * chain.bs_to_irs.rx;
  for (int k = 0; k < k_irs; ++k) {
    x.array() *= detail::unit_phasors(sol.phase_shifts[static_cast<std::size_t>(k)]).array();
    if (k + 1 < k_irs) {
      const auto& link = chain.irs_links[static_cast<std::size_t>(k)];
      x = (link.mu * link.tx.dot(x)) * link.rx;
    }
  }
  return chain.irs_to_ue.mu * chain.irs_to_ue.tx.dot(x);
}

template <typename T>
T received_power(const DenseCascade<T>& chain, const BeamformingSolution<T>& sol) {
  return std::norm(end_to_end_gain(chain, sol));
}

template <typename T>
T received_power(const CascadeChannel<T>& chain, const BeamformingSolution<T>& sol) {
  return std::norm(end_to_end_gain(chain, sol));
}

inline double snr_linear(double p_rx_w, double noise_w) {
  if (!(noise_w > 0.0)) throw std::invalid_argument("snr_linear: noise power must be > 0");
  return p_rx_w / noise_w;
}

inline double snr_db(double p_rx_w, double noise_w) {
  return linear_to_db(snr_linear(p_rx_w, noise_w));
}

// Transmit/noise budget, P and sigma_n^2 in watts.
struct LinkBudget {
  double p_tx_w = 1.0;
  double noise_w = 1.0;
  int bs_antennas = 1;   // N
  int irs_elements = 1;  // M
  int irs_count = 1;     // K
};

// Inputs of the closed-form SNR expression for equal inter-IRS spacing and
// deterministic gains. g0 = 10^(-PL(d0)/10) is the reference path gain.
// literal_mode keeps the published form with a squared noise power in the
// denominator; with it off the denominator carries the noise power once,
// which is what the power-consistent simulation reproduces.
struct AnalyticScenario {
  double d_t_m = 1.0;
  double d_r_m = 1.0;
  double d_irs_m = 1.0;
  double exponent_n = 2.0;
  double g0 = 1.0;
  double d0_m = 1.0;
  LinkBudget budget{};
  bool literal_mode = true;
};

// Closed-form SNR:
//   M^{2K} N P g0^{K+1} / ( (d_r/d0)^n (d_t/d0)^n (d_irs/d0)^{n(K-1)} N0^q )
// with q = 2 in literal mode, q = 1 otherwise.
inline double analytic_snr(const AnalyticScenario& s) {
  const int k = s.budget.irs_count;
  if (k < 1) throw std::invalid_argument("analytic_snr: irs_count must be >= 1");
  if (s.budget.bs_antennas < 1 || s.budget.irs_elements < 1)
    throw std::invalid_argument("analytic_snr: array sizes must be >= 1");
  if (!(s.budget.p_tx_w > 0.0) || !(s.budget.noise_w > 0.0))
    throw std::invalid_argument("analytic_snr: powers must be > 0");
  if (!(s.g0 > 0.0) || !(s.d0_m > 0.0)) throw std::invalid_argument("analytic_snr: invalid g0/d0");
  const double m = static_cast<double>(s.budget.irs_elements);
  const double n_ant = static_cast<double>(s.budget.bs_antennas);
  const double num = std::pow(m, 2.0 * k) * n_ant * s.budget.p_tx_w * std::pow(s.g0, k + 1);
  const double den = std::pow(s.d_r_m / s.d0_m, s.exponent_n) *
                     std::pow(s.d_t_m / s.d0_m, s.exponent_n) *
                     std::pow(s.d_irs_m / s.d0_m, s.exponent_n * (k - 1)) *
                     (s.literal_mode ? s.budget.noise_w * s.budget.noise_w : s.budget.noise_w);
  return num / den;
}

// SNR ratio after appending one more IRS at spacing d_irs (UE distance kept):
//   gamma_{K+1} / gamma_K = m^2 g0 / (d_irs/d0)^n.
// Independent of K, d_t, d_r and of the noise-power convention.
inline double snr_gain_add_irs(const AnalyticScenario& s, double m_elements) {
  if (!(s.g0 > 0.0) || !(s.d0_m > 0.0))
    throw std::invalid_argument("snr_gain_add_irs: invalid g0/d0");
  return m_elements * m_elements * s.g0 / std::pow(s.d_irs_m / s.d0_m, s.exponent_n);
}

inline double snr_gain_add_irs(const AnalyticScenario& s) {
  return snr_gain_add_irs(s, static_cast<double>(s.budget.irs_elements));
}

// Element count at which adding an IRS stops hurting: sqrt((d_irs/d0)^n / g0).
inline double min_elements_for_added_irs(const AnalyticScenario& s) {
  if (!(s.g0 > 0.0) || !(s.d0_m > 0.0))
    throw std::invalid_argument("min_elements_for_added_irs: invalid g0/d0");
  return std::sqrt(std::pow(s.d_irs_m / s.d0_m, s.exponent_n) / s.g0);
}

}  // namespace mirs

#endif  // MIRS_METRICS_HPP
