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
// Rank-1 mmWave channel chain: BS -> IRS_1 -> ... -> IRS_K -> UE.
//
// Every hop is a single-path (LOS) channel stored in factored form
//   H = mu * rx * tx^H
// with normalized uniform-linear-array response vectors on both sides and a
// complex gain mu that carries the array factor, the antenna gains and the
// distance-dependent path gain. Multipath hops (L > 1 paths) are supported
// for channel generation; only the general-purpose solvers consume them.

#ifndef MIRS_CHANNEL_HPP
#define MIRS_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "mirs/rng.hpp"
#include "mirs/types.hpp"

namespace mirs {

// Normalized ULA steering vector, half-wavelength spacing:
//   a_i = (1/sqrt(size)) * exp(j*pi*i*sin(angle)),  i = 0..size-1.
// Every entry has modulus 1/sqrt(size) and the squared norm is 1.
template <typename T>
CVec<T> array_response(Eigen::Index size, T angle) {
  if (size < 1) throw std::invalid_argument("array_response: size must be >= 1");
  CVec<T> a(size);
  const T scale = T(1) / std::sqrt(static_cast<T>(size));
  const T step = std::numbers::pi_v<T> * std::sin(angle);
  for (Eigen::Index i = 0; i < size; ++i)
    a[i] = std::polar(scale, step * static_cast<T>(i));
  return a;
}

// True when every entry of v has modulus 1/sqrt(len) and |v|^2 = 1, i.e. v
// could be a normalized array response.
template <typename T>
bool is_normalized_response(const CVec<T>& v, T tol = T(1e-12)) {
  if (v.size() < 1) return false;
  const T want = T(1) / std::sqrt(static_cast<T>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
    if (std::abs(std::abs(v[i]) - want) > tol) return false;
  }
  return std::abs(v.squaredNorm() - T(1)) <= tol;
}

// Log-distance path loss, positive-loss convention:
//   PL(d) = PL(d0) + 10 n log10(d/d0)   [dB].
struct PathLossLaw {
  double pl_d0_db = 61.4;   // loss at the reference distance
  double exponent_n = 2.0;  // >= 0
  double d0_m = 1.0;        // reference distance, > 0
};

// Total loss in dB at distance d. Distances below d0 are clamped to d0; the
// optional flag reports when that happened.
inline double path_loss_db(const PathLossLaw& law, double d_m, bool* clamped = nullptr) {
  if (!(d_m > 0.0)) throw std::invalid_argument("path_loss_db: distance must be > 0");
  if (!(law.d0_m > 0.0) || law.exponent_n < 0.0)
    throw std::invalid_argument("path_loss_db: invalid law");
  double d = d_m;
  if (clamped != nullptr) *clamped = false;
  if (d < law.d0_m) {
    d = law.d0_m;
    if (clamped != nullptr) *clamped = true;
  }
  return law.pl_d0_db + 10.0 * law.exponent_n * std::log10(d / law.d0_m);
}

// How per-hop complex gains are drawn from a path loss PL (dB):
//   Random                 g ~ CN(0, 10^(-PL/10))        (E|g|^2 = 10^(-PL/10))
//   DeterministicAmplitude g = 10^(-PL/20)               (|g|^2 = 10^(-PL/10))
//   PaperLiteral           g = 10^(-PL/10)
// PaperLiteral plugs the mean *power* in as an amplitude; it is kept for
// replicating published curves that use that convention.
enum class GainMode { Random, DeterministicAmplitude, PaperLiteral };

inline std::complex<double> sample_gain(GainMode mode, double pl_db, Rng& rng) {
  if (!std::isfinite(pl_db)) throw std::invalid_argument("sample_gain: non-finite path loss");
  switch (mode) {
    case GainMode::Random:
      return rng.next_cgauss(std::pow(10.0, -pl_db / 10.0));
    case GainMode::DeterministicAmplitude:
      return {std::pow(10.0, -pl_db / 20.0), 0.0};
    case GainMode::PaperLiteral:
      return {std::pow(10.0, -pl_db / 10.0), 0.0};
  }
  throw std::invalid_argument("sample_gain: unknown mode");
}

// One rank-1 hop, H = mu * rx * tx^H. rx/tx are normalized array responses of
// the receiving/transmitting array; a single-antenna side is the trivial
// response [1].
template <typename T>
struct Rank1Channel {
  std::complex<T> mu;
  CVec<T> rx;
  CVec<T> tx;

  Eigen::Index rows() const { return rx.size(); }
  Eigen::Index cols() const { return tx.size(); }

  CMat<T> dense() const { return mu * (rx * tx.adjoint()); }
};

using Rank1Channeld = Rank1Channel<double>;

template <typename T>
Rank1Channel<T> make_rank1(std::complex<T> mu, CVec<T> rx, CVec<T> tx) {
  if (!is_normalized_response(rx) || !is_normalized_response(tx))
    throw std::invalid_argument("make_rank1: rx/tx must be normalized array responses");
  return Rank1Channel<T>{mu, std::move(rx), std::move(tx)};
}

// One path of a Saleh-Valenzuela style channel.
template <typename T>
struct PathComponent {
  std::complex<T> gain;  // complex path gain, antenna gains folded in
  T aoa;                 // angle of arrival at the receiving array
  T aod;                 // angle of departure at the transmitting array
};

// L-path channel, H = sqrt(rx_size*tx_size/L) * sum_l g_l a_rx(aoa_l) a_tx(aod_l)^H.
// With L = 1 this coincides with Rank1Channel{scale()*g, a_rx, a_tx}.
template <typename T>
struct MultipathChannel {
  std::vector<PathComponent<T>> paths;
  Eigen::Index rx_size = 0;
  Eigen::Index tx_size = 0;

  MultipathChannel(std::vector<PathComponent<T>> p, Eigen::Index rx_n, Eigen::Index tx_n)
      : paths(std::move(p)), rx_size(rx_n), tx_size(tx_n) {
    if (paths.empty()) throw std::invalid_argument("MultipathChannel: needs L >= 1 paths");
    if (rx_size < 1 || tx_size < 1)
      throw std::invalid_argument("MultipathChannel: array sizes must be >= 1");
  }

  T scale() const {
    return std::sqrt(static_cast<T>(rx_size * tx_size) / static_cast<T>(paths.size()));
  }

  CMat<T> dense() const {
    CMat<T> h = CMat<T>::Zero(rx_size, tx_size);
    for (const auto& p : paths)
      h += p.gain * (array_response<T>(rx_size, p.aoa) * array_response<T>(tx_size, p.aod).adjoint());
    return scale() * h;
  }
};

// Angles for every hop of a K-IRS chain. Hop 0 is BS -> IRS_1, hops
// 1..K-1 connect consecutive IRSs, hop K is IRS_K -> UE. The UE is a single
// antenna, so hop K has no meaningful arrival angle (kept at 0).
struct HopAngles {
  double aod = 0.0;
  double aoa = 0.0;
};

struct AngleAssignment {
  std::vector<HopAngles> hops;  // size K+1

  int irs_count() const { return static_cast<int>(hops.size()) - 1; }

  // Draw order: hop 0..K-1 each (aod, aoa), then hop K (aod only),
  // all uniform on [-pi/2, pi/2].
  static AngleAssignment uniform(int irs_count, Rng& rng) {
    if (irs_count < 1) throw std::invalid_argument("AngleAssignment: irs_count must be >= 1");
    constexpr double half_pi = std::numbers::pi / 2.0;
    AngleAssignment a;
    a.hops.resize(static_cast<std::size_t>(irs_count) + 1);
    for (int h = 0; h < irs_count; ++h) {
      a.hops[h].aod = rng.next_uniform(-half_pi, half_pi);
      a.hops[h].aoa = rng.next_uniform(-half_pi, half_pi);
    }
    a.hops[irs_count].aod = rng.next_uniform(-half_pi, half_pi);
    return a;
  }

  // aod per hop (size K+1) and aoa per receiving IRS (size K).
  static AngleAssignment fixed(const std::vector<double>& aod, const std::vector<double>& aoa) {
    if (aod.size() != aoa.size() + 1 || aoa.empty())
      throw std::invalid_argument("AngleAssignment: need K+1 departure and K arrival angles");
    AngleAssignment a;
    a.hops.resize(aod.size());
    for (std::size_t h = 0; h < aod.size(); ++h) {
      a.hops[h].aod = aod[h];
      a.hops[h].aoa = h < aoa.size() ? aoa[h] : 0.0;
    }
    return a;
  }
};

// The rank-1 chain of one realization: bs_to_irs is M x N, each inter-IRS
// link M x M, irs_to_ue is the 1 x M row toward the single-antenna UE
// (rx = [1], tx = the departure response at IRS_K).
template <typename T>
struct CascadeChannel {
  Rank1Channel<T> bs_to_irs;
  std::vector<Rank1Channel<T>> irs_links;
  Rank1Channel<T> irs_to_ue;

  int irs_count() const { return static_cast<int>(irs_links.size()) + 1; }
  Eigen::Index elements() const { return bs_to_irs.rx.size(); }  // M
  Eigen::Index antennas() const { return bs_to_irs.tx.size(); }  // N
};

using CascadeChanneld = CascadeChannel<double>;

// General multipath chain, same hop layout as CascadeChannel.
template <typename T>
struct MultipathCascade {
  MultipathChannel<T> bs_to_irs;
  std::vector<MultipathChannel<T>> irs_links;
  MultipathChannel<T> irs_to_ue;

  int irs_count() const { return static_cast<int>(irs_links.size()) + 1; }
};

using MultipathCascaded = MultipathCascade<double>;

// Materialized chain matrices, the form the ground-truth evaluator and the
// general solvers work on.
template <typename T>
struct DenseCascade {
  CMat<T> bs_to_irs;               // M x N
  std::vector<CMat<T>> irs_links;  // M x M each
  CRow<T> irs_to_ue;               // 1 x M

  int irs_count() const { return static_cast<int>(irs_links.size()) + 1; }
  Eigen::Index elements() const { return bs_to_irs.rows(); }
  Eigen::Index antennas() const { return bs_to_irs.cols(); }
};

using DenseCascaded = DenseCascade<double>;

template <typename T>
DenseCascade<T> to_dense(const CascadeChannel<T>& c) {
  DenseCascade<T> d;
  d.bs_to_irs = c.bs_to_irs.dense();
  d.irs_links.reserve(c.irs_links.size());
  for (const auto& g : c.irs_links) d.irs_links.push_back(g.dense());
  d.irs_to_ue = c.irs_to_ue.dense();
  return d;
}

template <typename T>
DenseCascade<T> to_dense(const MultipathCascade<T>& c) {
  DenseCascade<T> d;
  d.bs_to_irs = c.bs_to_irs.dense();
  d.irs_links.reserve(c.irs_links.size());
  for (const auto& g : c.irs_links) d.irs_links.push_back(g.dense());
  d.irs_to_ue = c.irs_to_ue.dense();
  return d;
}

// Geometry and gain parameters for one chain realization.
struct LinkGeometry {
  int bs_antennas = 1;    // N
  int irs_elements = 1;   // M
  int irs_count = 1;      // K
  double d_t_m = 1.0;     // BS -> IRS_1
  double d_irs_m = 1.0;   // between consecutive IRSs
  double d_r_m = 1.0;     // IRS_K -> UE
  PathLossLaw path_loss{};
  // Per-hop antenna gains (amplitude factors), size K+1; empty means unity.
  std::vector<double> antenna_gain_tx{};
  std::vector<double> antenna_gain_rx{};

  double gain_tx(int hop) const {
    return antenna_gain_tx.empty() ? 1.0 : antenna_gain_tx.at(static_cast<std::size_t>(hop));
  }
  double gain_rx(int hop) const {
    return antenna_gain_rx.empty() ? 1.0 : antenna_gain_rx.at(static_cast<std::size_t>(hop));
  }

  void validate() const {
    if (irs_count < 1) throw std::invalid_argument("LinkGeometry: irs_count must be >= 1");
    if (bs_antennas < 1 || irs_elements < 1)
      throw std::invalid_argument("LinkGeometry: array sizes must be >= 1");
    if (!(d_t_m > 0.0) || !(d_irs_m > 0.0) || !(d_r_m > 0.0))
      throw std::invalid_argument("LinkGeometry: distances must be > 0");
    const std::size_t hops = static_cast<std::size_t>(irs_count) + 1;
    if (!antenna_gain_tx.empty() && antenna_gain_tx.size() != hops)
      throw std::invalid_argument("LinkGeometry: antenna_gain_tx must have K+1 entries");
    if (!antenna_gain_rx.empty() && antenna_gain_rx.size() != hops)
      throw std::invalid_argument("LinkGeometry: antenna_gain_rx must have K+1 entries");
  }
};

// Builds the chain t, G_1..G_{K-1}, h_r for one realization. Hop gains:
//   mu_0 = sqrt(M N) g_t L_t L_r     (BS -> IRS_1, loss at d_t)
//   mu_k = M g_k L_t L_r             (IRS_k -> IRS_{k+1}, loss at d_irs)
//   mu_K = sqrt(M) g_r L_t L_r       (IRS_K -> UE, loss at d_r)
// Gains are drawn in hop order from the caller's stream, so the result is a
// pure function of (geometry, mode, angles, rng state at entry).
template <typename T>
CascadeChannel<T> build_cascade(const LinkGeometry& geo, GainMode mode,
                                const AngleAssignment& angles, Rng& rng) {
  geo.validate();
  const int k_irs = geo.irs_count;
  if (angles.irs_count() != k_irs)
    throw std::invalid_argument("build_cascade: angle assignment does not match irs_count");

  const Eigen::Index m = geo.irs_elements;
  const Eigen::Index n = geo.bs_antennas;
  const T sqrt_m = std::sqrt(static_cast<T>(m));
  const T sqrt_n = std::sqrt(static_cast<T>(n));

  CascadeChannel<T> chain;

  const double pl_t = path_loss_db(geo.path_loss, geo.d_t_m);
  const std::complex<T> g_t = static_cast<std::complex<T>>(sample_gain(mode, pl_t, rng));
  chain.bs_to_irs.mu = sqrt_m * sqrt_n * g_t * static_cast<T>(geo.gain_tx(0) * geo.gain_rx(0));
  chain.bs_to_irs.rx = array_response<T>(m, static_cast<T>(angles.hops[0].aoa));
  chain.bs_to_irs.tx = array_response<T>(n, static_cast<T>(angles.hops[0].aod));

  chain.irs_links.reserve(static_cast<std::size_t>(k_irs) - 1);
  const double pl_irs = k_irs > 1 ? path_loss_db(geo.path_loss, geo.d_irs_m) : 0.0;
  for (int k = 1; k < k_irs; ++k) {
    const std::complex<T> g_k = static_cast<std::complex<T>>(sample_gain(mode, pl_irs, rng));
    Rank1Channel<T> link;
    link.mu = static_cast<T>(m) * g_k * static_cast<T>(geo.gain_tx(k) * geo.gain_rx(k));
    link.rx = array_response<T>(m, static_cast<T>(angles.hops[k].aoa));
    link.tx = array_response<T>(m, static_cast<T>(angles.hops[k].aod));
    chain.irs_links.push_back(std::move(link));
  }

  const double pl_r = path_loss_db(geo.path_loss, geo.d_r_m);
  const std::complex<T> g_r = static_cast<std::complex<T>>(sample_gain(mode, pl_r, rng));
  chain.irs_to_ue.mu = sqrt_m * g_r * static_cast<T>(geo.gain_tx(k_irs) * geo.gain_rx(k_irs));
  chain.irs_to_ue.rx = CVec<T>::Ones(1);
  chain.irs_to_ue.tx = array_response<T>(m, static_cast<T>(angles.hops[k_irs].aod));

  return chain;
}

// General L-path chain for the rank-agnostic solvers. Per hop, each path
// draws its own gain at that hop's path loss and its own angles uniform on
// [-pi/2, pi/2]; the 1/sqrt(L) power split lives in MultipathChannel::scale().
// With paths_per_hop = 1 the dense matrices match build_cascade's hops in
// distribution.
template <typename T>
MultipathCascade<T> build_multipath_cascade(const LinkGeometry& geo, int paths_per_hop,
                                            GainMode mode, Rng& rng) {
  geo.validate();
  if (paths_per_hop < 1)
    throw std::invalid_argument("build_multipath_cascade: needs L >= 1 paths per hop");
  constexpr double half_pi = std::numbers::pi / 2.0;

  auto draw_hop = [&](Eigen::Index rx_n, Eigen::Index tx_n, double d_m, int hop) {
    const double pl = path_loss_db(geo.path_loss, d_m);
    const T lam = static_cast<T>(geo.gain_tx(hop) * geo.gain_rx(hop));
    std::vector<PathComponent<T>> paths;
    paths.reserve(static_cast<std::size_t>(paths_per_hop));
    for (int l = 0; l < paths_per_hop; ++l) {
      const auto g = static_cast<std::complex<T>>(sample_gain(mode, pl, rng));
      paths.push_back(PathComponent<T>{lam * g,
                                       static_cast<T>(rng.next_uniform(-half_pi, half_pi)),
                                       static_cast<T>(rng.next_uniform(-half_pi, half_pi))});
    }
    return MultipathChannel<T>(std::move(paths), rx_n, tx_n);
  };

  const Eigen::Index m = geo.irs_elements;
  MultipathChannel<T> bs_to_irs = draw_hop(m, geo.bs_antennas, geo.d_t_m, 0);
  std::vector<MultipathChannel<T>> irs_links;
  irs_links.reserve(static_cast<std::size_t>(geo.irs_count) - 1);
  for (int k = 1; k < geo.irs_count; ++k)
    irs_links.push_back(draw_hop(m, m, geo.d_irs_m, k));
  MultipathChannel<T> irs_to_ue = draw_hop(1, m, geo.d_r_m, geo.irs_count);
  return MultipathCascade<T>{std::move(bs_to_irs), std::move(irs_links), std::move(irs_to_ue)};
}

}  // namespace mirs

#endif  // MIRS_CHANNEL_HPP
