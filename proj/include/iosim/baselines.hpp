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

#include "iosim/optimizer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace iosim {

enum class Scheme { dualpol_ios, power_domain_ios, dualpol_ris, cellular };

std::string to_string(Scheme s);
/// Throws std::invalid_argument for an unknown identifier.
Scheme parse_scheme(const std::string& id);
const std::vector<Scheme>& all_schemes();

struct SchemeResult {
  Beamformer w;
  RVec phases;  // raw surface variables; empty for cellular
  IterTrace trace;
  double sum_rate = 0.0;
  std::optional<double> epsilon;
};

struct PowerDomainResult : SchemeResult {
  PowerDomainIosState state;
};

PowerDomainResult optimize_power_domain(const ScenarioConfig& config, const ChannelSet& channels, double epsilon,
                                        bool coupled_phases = false, const RunOptions& options = {});

/// Both polarization blocks reflect; refract-side users see only the direct
/// link.
SchemeResult optimize_dualpol_ris(const ScenarioConfig& config, const ChannelSet& channels,
                                  const RunOptions& options = {});

/// G = 0: plain WMMSE on the direct channels.
SchemeResult optimize_cellular(const ScenarioConfig& config, const ChannelSet& channels,
                               const RunOptions& options = {});

struct SchemeOptions {
  double epsilon = 1.0;
  bool coupled_phases = false;
  RunOptions run;
};

SchemeResult run_scheme(Scheme scheme, const ScenarioConfig& config, const ChannelSet& channels,
                        const SchemeOptions& options = {});

/// Closed-form sum rate of a power-domain surface in terms of per-user
/// direct-link SINR tau and surface-path SINR chi:
///   sum_r log2(1 + tau + eps/(1+eps) chi) + sum_t log2(1 + tau + chi/(1+eps))
struct PowerSplitModel {
  std::vector<double> tau;
  std::vector<double> chi;
  std::vector<Side> sides;
  double epsilon = 1.0;

  void validate() const;
};

double power_domain_rate(const PowerSplitModel& model);
/// d rate / d epsilon.
double power_split_derivative(const PowerSplitModel& model);
/// Golden-section search on log(eps) over [1e-3, 1e3]. Returns 1 when the rate
/// does not depend on eps.
double optimal_epsilon(const PowerSplitModel& model, double tolerance = 1e-6);

}  // namespace iosim
