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

#include "mirs/sweep_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

namespace mirs {

namespace {

// Shortest round-trip decimal form; independent of the global locale.
std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace

std::string to_csv(const SweepResult& result) {
  std::string out = "variable,value,solver,mean_snr_db,stderr_db,trials\n";
  for (const SweepRow& row : result.rows) {
    out += row.variable;
    out += ',';
    out += format_number(row.value);
    out += ',';
    out += row.solver;
    out += ',';
    out += format_number(row.mean_snr_db);
    out += ',';
    out += format_number(row.stderr_db);
    out += ',';
    out += std::to_string(row.trials);
    out += '\n';
  }
  return out;
}

std::string to_json(const SweepResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : result.rows) {
    nlohmann::json r;
    r["variable"] = row.variable;
    r["value"] = row.value;
    r["solver"] = row.solver;
    r["mean_snr_db"] = row.mean_snr_db;
    r["stderr_db"] = row.stderr_db;
    r["trials"] = row.trials;
    rows.push_back(r);
  }
  return rows.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    if (!std::cout) throw IoError("failed to write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("failed to write output file: " + path);
}

}  // namespace mirs
