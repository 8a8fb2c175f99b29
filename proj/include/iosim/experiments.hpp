// SPDX-License-Identifier: Apache-2.0
//
// iosim: joint digital/analog beamforming for dual-polarized omni-surfaces
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

#pragma once

#include "iosim/baselines.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace iosim {

enum class SweepParam { none, user_ratio, xpd_bi, power };

std::string to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& id);

struct SweepSpec {
  SweepParam parameter = SweepParam::none;
  std::vector<double> values{0.0};
  int trials = 200;
  std::vector<Scheme> schemes = all_schemes();
  ScenarioConfig base;
  SchemeOptions options;
  Execution execution = Execution::serial;

  void validate() const;
};

struct ResultRow {
  Scheme scheme = Scheme::dualpol_ios;
  SweepParam param = SweepParam::none;
  double value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double sum_rate = 0.0;
  int iterations = 0;
  bool converged = false;
  double p_v = 0.0;
  double p_h = 0.0;
  std::optional<double> epsilon;
  std::string error;  // non-empty marks a failed row

  bool ok() const { return error.empty(); }
};

/// Per-trial seed from (base, value index, trial index).
std::uint64_t trial_seed(std::uint64_t base, std::size_t value_index, std::size_t trial);

/// Applies one sweep value to a copy of the base config. user_ratio keeps
/// k_r + k_t fixed and sets k_r = round(ratio * (k_r + k_t)).
ScenarioConfig apply_parameter(const ScenarioConfig& base, SweepParam param, double value);

/// Channels for one trial of a config.
ChannelSet trial_channels(const ScenarioConfig& config, std::uint64_t seed);

/// Rows in (value, trial, scheme) order for either execution mode.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

struct Aggregate {
  Scheme scheme = Scheme::dualpol_ios;
  SweepParam param = SweepParam::none;
  double value = 0.0;
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n); 0 for n = 1
  int n = 0;
  int excluded = 0;
};

/// Groups by (value, scheme) in first-appearance order. Error rows are
/// excluded and counted; a group with no valid rows throws std::domain_error.
std::vector<Aggregate> aggregate(const std::vector<ResultRow>& rows);

std::string results_csv(const std::vector<ResultRow>& rows);
std::string summary_csv(const std::vector<Aggregate>& aggregates);
/// Whitespace-separated: x followed by one mean column per scheme.
std::string plot_data(const std::vector<Aggregate>& aggregates);

/// Parses results.csv content back into rows.
std::vector<ResultRow> parse_results_csv(const std::string& text);

/// Writes results.csv, summary.csv and plot_<param>.dat into `dir`, creating
/// it if needed. Throws std::runtime_error naming the failing path.
void emit(const std::vector<ResultRow>& rows, const std::vector<Aggregate>& aggregates,
          const std::filesystem::path& dir);

}  // namespace iosim
