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

#include "iosim/analog.hpp"
#include "iosim/digital.hpp"
#include "iosim/ios_model.hpp"
#include "iosim/metrics.hpp"
#include "iosim/scenario.hpp"

#include <string>
#include <vector>

namespace iosim {

/// MMSE receivers u_k = h_k W^(k) / (||h_k W||^2 + sigma2).
CVec update_receivers(const CMat& h, const CMat& w, double sigma2);
CVec update_receivers(const ChannelSet& channels, const CVec& g, const Beamformer& w, double sigma2);

/// MSE weights f_k = 1 / (1 - u_k W^(k)H h_k^H). Throws std::domain_error when
/// the denominator is not positive.
RVec update_weights(const CMat& h, const CMat& w, const CVec& u);
RVec update_weights(const ChannelSet& channels, const CVec& g, const Beamformer& w, const CVec& u);

/// One outer iteration. `surrogate` is taken right after the u/f update;
/// `surrogate_analog` and `surrogate_digital` after the two block steps with
/// u, f held fixed.
struct IterRecord {
  int iteration = 0;
  double surrogate = 0.0;
  double surrogate_analog = 0.0;
  double surrogate_digital = 0.0;
  double sum_rate = 0.0;
  double transmit_power = 0.0;
  double lambda = 0.0;
  double analog_objective = 0.0;
};

struct IterTrace {
  std::vector<IterRecord> records;
  bool converged = false;
  int iterations = 0;
};

/// One JSON object per line.
std::string to_json_lines(const IterTrace& trace);

struct RunOptions {
  int max_iterations = 100;
  double tolerance = 1e-4;  // relative surrogate change
  DiscreteMethod discrete = DiscreteMethod::automatic;
  Execution execution = Execution::serial;
  bool optimize_analog = true;
};

struct OptimizeResult {
  CMat w;  // stacked
  RVec phases;
  double sum_rate = 0.0;
  IterTrace trace;
};

/// Alternating u/f, analog and digital updates over an arbitrary surface map.
/// The best iterate by sum rate is returned.
OptimizeResult optimize(const ChannelSet& channels, const SurfaceMap& map, const RVec& init_phases, double p_bs,
                        double sigma2, int n_bits, const RunOptions& options = {});

/// Per-user MRT columns with equal power, total power p_bs.
CMat mrt_init(const CMat& h, double p_bs);

struct RunResult {
  Beamformer w;
  DualPolIosState state;
  IterTrace trace;
  double sum_rate = 0.0;
};

/// Dual-polarized IOS with amplitudes from the configured geometry.
RunResult run(const ScenarioConfig& config, const ChannelSet& channels, const RunOptions& options = {});

}  // namespace iosim
