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

#ifndef MIRS_SWEEP_IO_HPP
#define MIRS_SWEEP_IO_HPP

#include <stdexcept>
#include <string>

#include "mirs/sim.hpp"

namespace mirs {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV with header `variable,value,solver,mean_snr_db,stderr_db,trials`,
// '\n' line endings, locale-independent shortest-round-trip numbers.
// Non-finite dB values print as inf/-inf/nan.
std::string to_csv(const SweepResult& result);

// The same rows as a JSON array of objects with identical field names.
// Non-finite numbers serialize as null.
std::string to_json(const SweepResult& result);

// Writes to a file, or to stdout when path is "-". Throws IoError on failure.
void write_text(const std::string& path, const std::string& content);

}  // namespace mirs

#endif  // MIRS_SWEEP_IO_HPP
