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
// Joint phase-shift / precoder solvers for the rank-1 cascade.
//
// On a rank-1 chain the end-to-end gain factors into one complex scalar per
// IRS:  gain = (prod_h mu_h) * prod_k (sum_i e^{j theta_{k,i}} u_{k,i}) * (beta_0^H w)
// with u_k the element-wise product of the conjugate departure response of
// the hop leaving IRS k and the arrival response of the hop entering it.
// Each factor is maximized independently: theta_{k,i} = -arg(u_{k,i}) makes
// the k-th sum real and equal to sum_i |u_{k,i}|, and the precoder is MRT on
// beta_0. That joint closed form is the solver of record here; the others
// (random phases, per-element quantized greedy, alternating ascent, brute
// force) are baselines and verification oracles.

#ifndef MIRS_OPTIMIZE_HPP
#define MIRS_OPTIMIZE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mirs/channel.hpp"
#include "mirs/metrics.hpp"
#include "mirs/rng.hpp"
#include "mirs/types.hpp"

namespace mirs {

// Per-IRS alignment vectors u_k = conj(beta_out,k) .* alpha_in,k, where
// alpha_in,k is the arrival response of the hop entering IRS k and beta_out,k
// the departure response of the hop leaving it. Built from normalized
// responses, sum_i |u_{k,i}| = 1 for every k.
template <typename T>
std::vector<CVec<T>> alignment_vectors(const CascadeChannel<T>& chain) {
  const int k_irs = chain.irs_count();
  std::vector<CVec<T>> us;
  us.reserve(static_cast<std::size_t>(k_irs));
  for (int k = 0; k < k_irs; ++k) {
    const CVec<T>& arrive =
        k == 0 ? chain.bs_to_irs.rx : chain.irs_links[static_cast<std::size_t>(k - 1)].rx;
    const CVec<T>& depart = k + 1 == k_irs ? chain.irs_to_ue.tx
                                           : chain.irs_links[static_cast<std::size_t>(k)].tx;
    us.push_back(depart.conjugate().cwiseProduct(arrive));
  }
  return us;
}

// theta_i = -arg(u_i), so that sum_i e^{j theta_i} u_i = sum_i |u_i|.
// Zero entries get phase 0.
template <typename T>
RVec<T> phase_align(const CVec<T>& u) {
  RVec<T> theta(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    theta[i] = u[i] == std::complex<T>(0) ? T(0) : -std::arg(u[i]);
  return theta;
}

// Maximum ratio transmission: w = sqrt(P) * beta0 / |beta0|, which attains
// |beta0^H w|^2 = P |beta0|^2 and spends the full power budget.
template <typename T>
CVec<T> mrt_precoder(const CVec<T>& beta0, T total_power_w) {
  if (!(total_power_w > T(0))) throw std::invalid_argument("mrt_precoder: power must be > 0");
  const T norm = beta0.norm();
  if (norm == T(0)) throw std::invalid_argument("mrt_precoder: zero channel vector");
  return (std::sqrt(total_power_w) / norm) * beta0;
}

template <typename T>
BeamformingSolution<T> solve_closed_form(const CascadeChannel<T>& chain, T total_power_w) {
  BeamformingSolution<T> sol;
  for (const auto& u : alignment_vectors(chain)) sol.phase_shifts.push_back(phase_align(u));
  sol.precoder = mrt_precoder(chain.bs_to_irs.tx, total_power_w);
  return sol;
}

// (P3)-style factored evaluation of the same solution:
//   (prod mu) * prod_k (theta_k . u_k) * (beta_0^H w).
// Test-side counterpart of the dense evaluator; keeping the two routes in
// agreement pins down the u_k convention.
template <typename T>
std::complex<T> factored_gain(const CascadeChannel<T>& chain, const BeamformingSolution<T>& sol) {
  const auto us = alignment_vectors(chain);
  std::complex<T> acc = chain.bs_to_irs.mu * chain.bs_to_irs.tx.dot(sol.precoder);
  for (std::size_t k = 0; k < us.size(); ++k) {
    std::complex<T> factor(0);
    const RVec<T>& theta = sol.phase_shifts.at(k);
    for (Eigen::Index i = 0; i < us[k].size(); ++i)
      factor += std::polar(T(1), theta[i]) * us[k][i];
    acc *= factor;
    if (k > 0) acc *= chain.irs_links[k - 1].mu;
  }
  acc *= chain.irs_to_ue.mu;
  return acc;
}

// Per-element alignment restricted to the 2^bits phase grid {2 pi q / 2^bits}:
// each element takes the grid point maximizing Re(e^{j phi} u_i), ties broken
// toward the lowest grid index. Precoder by MRT. This is the per-IRS
// sequential baseline; the per-element rounding error is at most pi/2^bits.
template <typename T>
BeamformingSolution<T> solve_greedy_quantized(const CascadeChannel<T>& chain, T total_power_w,
                                              int bits) {
  if (bits < 1 || bits > 24) throw std::invalid_argument("solve_greedy_quantized: bits in [1,24]");
  const int levels = 1 << bits;
  std::vector<T> grid(static_cast<std::size_t>(levels));
  for (int q = 0; q < levels; ++q)
    grid[static_cast<std::size_t>(q)] =
        T(2) * std::numbers::pi_v<T> * static_cast<T>(q) / static_cast<T>(levels);

  BeamformingSolution<T> sol;
  for (const auto& u : alignment_vectors(chain)) {
    RVec<T> theta(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      int best_q = 0;
      T best_re = std::numeric_limits<T>::lowest();
      for (int q = 0; q < levels; ++q) {
        const T re = (std::polar(T(1), grid[static_cast<std::size_t>(q)]) * u[i]).real();
        if (re > best_re) {
          best_re = re;
          best_q = q;
        }
      }
      theta[i] = grid[static_cast<std::size_t>(best_q)];
    }
    sol.phase_shifts.push_back(std::move(theta));
  }
  sol.precoder = mrt_precoder(chain.bs_to_irs.tx, total_power_w);
  return sol;
}

// Control baseline: phases uniform on [0, 2 pi), precoder by MRT.
// Deterministic per seed; draw order is IRS-major, element-minor.
template <typename T>
BeamformingSolution<T> solve_random_phase(const CascadeChannel<T>& chain, T total_power_w,
                                          std::uint64_t seed) {
  Rng rng(seed);
  BeamformingSolution<T> sol;
  const Eigen::Index m = chain.elements();
  for (int k = 0; k < chain.irs_count(); ++k) {
    RVec<T> theta(m);
    for (Eigen::Index i = 0; i < m; ++i)
      theta[i] = static_cast<T>(rng.next_uniform(0.0, 2.0 * std::numbers::pi));
    sol.phase_shifts.push_back(std::move(theta));
  }
  sol.precoder = mrt_precoder(chain.bs_to_irs.tx, total_power_w);
  return sol;
}

template <typename T>
struct AlternatingResult {
  BeamformingSolution<T> solution;
  std::vector<T> power_trace;  // received power after each sweep
  int sweeps = 0;
  bool converged = false;
};

namespace detail {

// Row vector of everything left of Theta_k (0-based k), i.e.
// h Theta_K G_{K-1} ... Theta_{k+2} G_{k+1}.
template <typename T>
CRow<T> left_of_irs(const DenseCascade<T>& chain, const BeamformingSolution<T>& sol, int k) {
  const int k_irs = chain.irs_count();
  CRow<T> row = chain.irs_to_ue;
  for (int j = k_irs - 1; j > k; --j) {
    row.array() *= unit_phasors(sol.phase_shifts[static_cast<std::size_t>(j)]).transpose().array();
    row = row * chain.irs_links[static_cast<std::size_t>(j - 1)];
  }
  return row;
}

// Column vector of everything right of Theta_k: G_{k-1} Theta_{k-1} ... T w.
template <typename T>
CVec<T> right_of_irs(const DenseCascade<T>& chain, const BeamformingSolution<T>& sol, int k) {
  CVec<T> col = chain.bs_to_irs * sol.precoder;
  for (int j = 0; j < k; ++j) {
    col.array() *= unit_phasors(sol.phase_shifts[static_cast<std::size_t>(j)]).array();
    col = chain.irs_links[static_cast<std::size_t>(j)] * col;
  }
  return col;
}

// Effective 1 x N channel seen by the precoder under the current phases.
template <typename T>
CRow<T> effective_bs_channel(const DenseCascade<T>& chain, const BeamformingSolution<T>& sol) {
  CRow<T> row = chain.irs_to_ue;
  const int k_irs = chain.irs_count();
  for (int j = k_irs - 1; j >= 0; --j) {
    row.array() *= unit_phasors(sol.phase_shifts[static_cast<std::size_t>(j)]).transpose().array();
    if (j > 0) row = row * chain.irs_links[static_cast<std::size_t>(j - 1)];
  }
  return row * chain.bs_to_irs;
}

}  // namespace detail

// Coordinate ascent for chains of any rank: sweep IRS 1..K aligning each
// element to the current effective scalar channel, then MRT on the effective
// end-to-end channel, until the relative power improvement drops below tol.
// The received power is nondecreasing across sweeps by construction.
template <typename T>
AlternatingResult<T> solve_alternating(const DenseCascade<T>& chain, T total_power_w,
                                       int max_iters, T tol) {
  if (max_iters < 1) throw std::invalid_argument("solve_alternating: max_iters must be >= 1");
  const Eigen::Index m = chain.elements();
  const Eigen::Index n = chain.antennas();
  const int k_irs = chain.irs_count();

  AlternatingResult<T> res;
  BeamformingSolution<T>& sol = res.solution;
  sol.phase_shifts.assign(static_cast<std::size_t>(k_irs), RVec<T>::Zero(m));
  sol.precoder = CVec<T>::Constant(n, std::sqrt(total_power_w / static_cast<T>(n)));
  {
    const CRow<T> eff = detail::effective_bs_channel(chain, sol);
    if (eff.norm() > T(0)) sol.precoder = mrt_precoder<T>(eff.adjoint(), total_power_w);
  }

  T prev = received_power(chain, sol);
  for (int iter = 0; iter < max_iters; ++iter) {
    for (int k = 0; k < k_irs; ++k) {
      const CRow<T> left = detail::left_of_irs(chain, sol, k);
      const CVec<T> right = detail::right_of_irs(chain, sol, k);
      RVec<T>& theta = sol.phase_shifts[static_cast<std::size_t>(k)];
      for (Eigen::Index i = 0; i < m; ++i) {
        const std::complex<T> c = left[i] * right[i];
        if (c != std::complex<T>(0)) theta[i] = -std::arg(c);
      }
    }
    const CRow<T> eff = detail::effective_bs_channel(chain, sol);
    if (eff.norm() > T(0)) sol.precoder = mrt_precoder<T>(eff.adjoint(), total_power_w);

    const T power = received_power(chain, sol);
    res.power_trace.push_back(power);
    res.sweeps = iter + 1;
    if (power - prev <= tol * std::max(prev, std::numeric_limits<T>::min())) {
      res.converged = true;
      break;
    }
    prev = power;
  }
  return res;
}

template <typename T>
AlternatingResult<T> solve_alternating(const CascadeChannel<T>& chain, T total_power_w,
                                       int max_iters, T tol) {
  return solve_alternating(to_dense(chain), total_power_w, max_iters, tol);
}

template <typename T>
struct BruteForceResult {
  T power_w = T(0);
  BeamformingSolution<T> solution;
  std::uint64_t candidate_index = 0;  // lexicographic rank of the argmax
};

inline constexpr std::uint64_t kBruteForceGuard = 100'000'000;  // max enumerated candidates

namespace detail {

// Candidate digits are big-endian over (IRS K element 0) ... (IRS 1 element
// M-1), so the inner M digits belong to IRS 1 and row prefixes for the outer
// IRSs can be cached. For each candidate the precoder is MRT on the effective
// channel, i.e. power = P * |h_eff(theta)|^2, evaluated from the materialized
// matrices. Deterministic for any range split: every cache level is a pure
// function of the digits above it.
template <typename T>
struct BruteForceScan {
  const DenseCascade<T>& chain;
  T total_power_w;
  int levels;
  Eigen::Index m, n;
  int k_irs;
  std::uint64_t inner_count;  // levels^M
  std::vector<std::complex<T>> grid;

  BruteForceScan(const DenseCascade<T>& c, T p, int lv)
      : chain(c), total_power_w(p), levels(lv), m(c.elements()), n(c.antennas()),
        k_irs(c.irs_count()) {
    inner_count = 1;
    for (Eigen::Index i = 0; i < m; ++i) inner_count *= static_cast<std::uint64_t>(levels);
    grid.resize(static_cast<std::size_t>(levels));
    for (int q = 0; q < levels; ++q)
      grid[static_cast<std::size_t>(q)] =
          std::polar(T(1), T(2) * std::numbers::pi_v<T> * static_cast<T>(q) / static_cast<T>(levels));
  }

  // Row left of IRS 1 for the outer-digit assignment: h (.* theta_K) G_{K-1} ... G_1.
  CRow<T> outer_row(const std::vector<int>& outer_digits) const {
    CRow<T> row = chain.irs_to_ue;
    std::size_t d = 0;
    for (int j = k_irs - 1; j >= 1; --j) {
      for (Eigen::Index i = 0; i < m; ++i)
        row[i] *= grid[static_cast<std::size_t>(outer_digits[d++])];
      row = row * chain.irs_links[static_cast<std::size_t>(j - 1)];
    }
    return row;
  }

  // Scans candidates [lo, hi) and reports the best (power, index).
  void scan(std::uint64_t lo, std::uint64_t hi, T& best_power, std::uint64_t& best_index) const {
    best_power = T(-1);
    best_index = 0;
    if (lo >= hi) return;

    std::vector<int> outer_digits(static_cast<std::size_t>(m) * (k_irs - 1), 0);
    std::uint64_t outer = lo / inner_count;
    decode(outer, outer_digits);
    CRow<T> row = outer_row(outer_digits);

    // Per-element contributions of IRS 1: v_i = row_i * T.row(i), so that
    // h_eff = sum_i e^{j theta_1,i} v_i.
    CMat<T> v(m, n);
    auto refresh_v = [&] {
      for (Eigen::Index i = 0; i < m; ++i) v.row(i) = row[i] * chain.bs_to_irs.row(i);
    };
    refresh_v();

    // Partial prefix sums over the inner digits; partial.row(i) = sum of the
    // first i contributions.
    CMat<T> partial = CMat<T>::Zero(m + 1, n);
    std::vector<int> inner_digits(static_cast<std::size_t>(m), 0);
    std::uint64_t inner = lo % inner_count;
    decode(inner, inner_digits);
    for (Eigen::Index i = 0; i < m; ++i)
      partial.row(i + 1) =
          partial.row(i) + grid[static_cast<std::size_t>(inner_digits[static_cast<std::size_t>(i)])] * v.row(i);

    for (std::uint64_t c = lo; c < hi; ++c) {
      const T power = total_power_w * partial.row(m).squaredNorm();
      if (power > best_power) {
        best_power = power;
        best_index = c;
      }
      if (c + 1 == hi) break;

      // Advance the inner odometer; on wrap, advance the outer digits and
      // rebuild the caches from the changed level down.
      Eigen::Index pos = m - 1;
      while (pos >= 0) {
        auto& dig = inner_digits[static_cast<std::size_t>(pos)];
        if (++dig < levels) break;
        dig = 0;
        --pos;
      }
      if (pos < 0) {
        ++outer;
        decode(outer, outer_digits);
        row = outer_row(outer_digits);
        refresh_v();
        pos = 0;
      }
      for (Eigen::Index i = pos; i < m; ++i)
        partial.row(i + 1) =
            partial.row(i) + grid[static_cast<std::size_t>(inner_digits[static_cast<std::size_t>(i)])] * v.row(i);
    }
  }

  void decode(std::uint64_t index, std::vector<int>& digits) const {
    for (std::size_t d = digits.size(); d-- > 0;) {
      digits[d] = static_cast<int>(index % static_cast<std::uint64_t>(levels));
      index /= static_cast<std::uint64_t>(levels);
    }
  }
};

}  // namespace detail

// Exhaustive search over all per-element phases on the uniform levels-point
// grid, with MRT precoding per candidate. Ties break toward the lowest
// lexicographic candidate index, so the result does not depend on the thread
// split. Guarded to levels^(M*K) <= 1e8 candidates.
template <typename T>
BruteForceResult<T> brute_force(const DenseCascade<T>& chain, T total_power_w, int levels,
                                int threads = 1) {
  if (levels < 2) throw std::invalid_argument("brute_force: levels must be >= 2");
  if (!(total_power_w > T(0))) throw std::invalid_argument("brute_force: power must be > 0");
  const Eigen::Index m = chain.elements();
  const int k_irs = chain.irs_count();

  long double budget = 1.0L;
  for (Eigen::Index i = 0; i < m * k_irs; ++i) {
    budget *= levels;
    if (budget > static_cast<long double>(kBruteForceGuard))
      throw std::length_error("brute_force: levels^(M*K) exceeds the 1e8 candidate guard");
  }
  const auto total = static_cast<std::uint64_t>(budget);

  detail::BruteForceScan<T> scan(chain, total_power_w, levels);

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(total)));
  std::vector<T> powers(static_cast<std::size_t>(workers), T(-1));
  std::vector<std::uint64_t> indices(static_cast<std::size_t>(workers), 0);
  if (workers == 1) {
    scan.scan(0, total, powers[0], indices[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t lo = chunk * static_cast<std::uint64_t>(w);
      const std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
      pool.emplace_back([&, w, lo, hi] {
        scan.scan(lo, hi, powers[static_cast<std::size_t>(w)], indices[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& th : pool) th.join();
  }

  BruteForceResult<T> best;
  best.power_w = T(-1);
  for (int w = 0; w < workers; ++w) {
    const auto wi = static_cast<std::size_t>(w);
    if (powers[wi] > best.power_w ||
        (powers[wi] == best.power_w && indices[wi] < best.candidate_index)) {
      best.power_w = powers[wi];
      best.candidate_index = indices[wi];
    }
  }

  // Rebuild the argmax solution from its candidate index.
  std::vector<int> digits(static_cast<std::size_t>(m) * k_irs, 0);
  scan.decode(best.candidate_index, digits);
  best.solution.phase_shifts.assign(static_cast<std::size_t>(k_irs), RVec<T>::Zero(m));
  std::size_t d = 0;
  for (int j = k_irs - 1; j >= 0; --j)
    for (Eigen::Index i = 0; i < m; ++i)
      best.solution.phase_shifts[static_cast<std::size_t>(j)][i] =
          T(2) * std::numbers::pi_v<T> * static_cast<T>(digits[d++]) / static_cast<T>(levels);
  const CRow<T> eff = detail::effective_bs_channel(chain, best.solution);
  best.solution.precoder = eff.norm() > T(0)
                               ? mrt_precoder<T>(eff.adjoint(), total_power_w)
                               : CVec<T>::Constant(chain.antennas(),
                                                   std::sqrt(total_power_w / static_cast<T>(chain.antennas())));
  best.power_w = received_power(chain, best.solution);
  return best;
}

template <typename T>
BruteForceResult<T> brute_force(const CascadeChannel<T>& chain, T total_power_w, int levels,
                                int threads = 1) {
  return brute_force(to_dense(chain), total_power_w, levels, threads);
}

// Named solver configuration, parseable from strings like "closed_form",
// "random_phase", "greedy_q2", "alt_opt", "brute_force16".
struct SolverSpec {
  enum class Kind { ClosedForm, RandomPhase, GreedyQuantized, AlternatingOpt, BruteForce };

  Kind kind = Kind::ClosedForm;
  int bits = 2;         // GreedyQuantized
  int max_iters = 50;   // AlternatingOpt
  double tol = 1e-12;   // AlternatingOpt
  int levels = 16;      // BruteForce

  std::string name() const {
    switch (kind) {
      case Kind::ClosedForm: return "closed_form";
      case Kind::RandomPhase: return "random_phase";
      case Kind::GreedyQuantized: return "greedy_q" + std::to_string(bits);
      case Kind::AlternatingOpt: return "alt_opt";
      case Kind::BruteForce: return "brute_force" + std::to_string(levels);
    }
    return "unknown";
  }

  static SolverSpec parse(const std::string& text) {
    SolverSpec spec;
    auto suffix_int = [&](const std::string& prefix, int min_value) {
      const std::string tail = text.substr(prefix.size());
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(tail, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("unknown solver: " + text);
      }
      if (used != tail.size() || value < min_value)
        throw std::invalid_argument("unknown solver: " + text);
      return value;
    };
    if (text == "closed_form") {
      spec.kind = Kind::ClosedForm;
    } else if (text == "random_phase") {
      spec.kind = Kind::RandomPhase;
    } else if (text == "alt_opt") {
      spec.kind = Kind::AlternatingOpt;
    } else if (text.rfind("greedy_q", 0) == 0) {
      spec.kind = Kind::GreedyQuantized;
      spec.bits = suffix_int("greedy_q", 1);
    } else if (text.rfind("brute_force", 0) == 0) {
      spec.kind = Kind::BruteForce;
      spec.levels = suffix_int("brute_force", 2);
    } else {
      throw std::invalid_argument("unknown solver: " + text);
    }
    return spec;
  }
};

}  // namespace mirs

#endif  // MIRS_OPTIMIZE_HPP
