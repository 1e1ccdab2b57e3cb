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

#ifndef MIRS_RNG_HPP
#define MIRS_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace mirs {

// splitmix64 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Order-sensitive seed derivation: folds each index into a running hash.
// Because mix64 is bijective, two seeds derived with the same prefix and a
// different final index never collide.
template <typename... Index>
constexpr std::uint64_t derive_seed(std::uint64_t base, Index... index) noexcept {
  std::uint64_t h = mix64(base + kGoldenGamma);
  ((h = mix64(h ^ (static_cast<std::uint64_t>(index) + kGoldenGamma))), ...);
  return h;
}

// Counter-based generator (splitmix64): the state advances by a fixed odd
// increment and each output is the avalanche mix of the counter. Streams for
// parallel trials are split with derive_seed, so draws are reproducible
// independent of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_double(); }

  // One Box-Muller pair of independent standard normals.
  void next_normal_pair(double& z0, double& z1) noexcept {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    z0 = r * std::cos(phi);
    z1 = r * std::sin(phi);
  }

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> next_cgauss(double variance) noexcept {
    double x = 0.0;
    double y = 0.0;
    next_normal_pair(x, y);
    const double s = std::sqrt(variance / 2.0);
    return {s * x, s * y};
  }

 private:
  std::uint64_t state_;
};

}  // namespace mirs

#endif  // MIRS_RNG_HPP
