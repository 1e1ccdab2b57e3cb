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

#ifndef MIRS_TYPES_HPP
#define MIRS_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace mirs {

template <typename T>
using CVec = Eigen::Vector<std::complex<T>, Eigen::Dynamic>;
template <typename T>
using CRow = Eigen::RowVector<std::complex<T>, Eigen::Dynamic>;
template <typename T>
using CMat = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using RVec = Eigen::Vector<T, Eigen::Dynamic>;

using CVecd = CVec<double>;
using CRowd = CRow<double>;
using CMatd = CMat<double>;
using RVecd = RVec<double>;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// 10*log10(x); x = 0 maps to -inf, the sentinel for "no signal".
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// Joint transmit design for one chain realization: the BS precoder (amplitude
// units sqrt(W)) plus one phase vector per IRS, in radians. Reflection
// coefficients are exp(j*theta), so unit modulus holds by construction.
template <typename T>
struct BeamformingSolution {
  CVec<T> precoder;
  std::vector<RVec<T>> phase_shifts;

  int irs_count() const { return static_cast<int>(phase_shifts.size()); }
};

using BeamformingSolutiond = BeamformingSolution<double>;

}  // namespace mirs

#endif  // MIRS_TYPES_HPP
