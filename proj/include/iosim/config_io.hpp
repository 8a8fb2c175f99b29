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

#include "iosim/experiments.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace iosim {

/// Raised for malformed or out-of-range configuration documents.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario plus the run-level settings read from the optional "experiment"
/// object. See docs/config-schema.md.
struct ExperimentConfig {
  ScenarioConfig scenario;
  SchemeOptions options;
  int trials = 200;
  std::vector<Scheme> schemes = all_schemes();
  Execution execution = Execution::serial;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_json(const ExperimentConfig& config);

/// Phases are written as codebook indices.
std::string to_json(const DualPolIosState& state);
std::string to_json(const PowerDomainIosState& state);

DiscreteMethod parse_discrete_method(const std::string& id);
std::string to_string(DiscreteMethod m);

}  // namespace iosim
