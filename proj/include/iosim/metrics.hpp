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

#include "iosim/ios_model.hpp"
#include "iosim/scenario.hpp"
#include "iosim/types.hpp"

#include <utility>

namespace iosim {

/// Stacked precoder [W_r, W_t] over the 2N_t ports. Column k of stacked()
/// serves user k (reflect users first).
struct Beamformer {
  CMat w_r;
  CMat w_t;

  static Beamformer from_stacked(const CMat& w, int k_r);
  CMat stacked() const;
  double total_power() const { return w_r.squaredNorm() + w_t.squaredNorm(); }
};

struct AuxWeights {
  CVec u;
  RVec f;
};

CRow effective_channel(const ChannelSet& channels, const CVec& g, int k);
/// All users' effective channels as rows, each user seeing its own diagonal
/// from the surface map.
CMat effective_channels(const ChannelSet& channels, const SurfaceMap& map, const RVec& phases);
/// Same coefficient diagonal for every user.
CMat effective_channels(const ChannelSet& channels, const CVec& g);

// Row-matrix forms: `h` stacks the users' effective channels, `w` is the
// stacked precoder with one column per user.
double sinr(const CMat& h, const CMat& w, double sigma2, int k);
double sum_rate(const CMat& h, const CMat& w, double sigma2);
double mse(const CMat& h, const CMat& w, const AuxWeights& aux, double sigma2, int k);
RVec mses(const CMat& h, const CMat& w, const AuxWeights& aux, double sigma2);

double sinr(const ChannelSet& channels, const CVec& g, const Beamformer& w, double sigma2, int k);
double sum_rate(const ChannelSet& channels, const CVec& g, const Beamformer& w, double sigma2);
double mse(const ChannelSet& channels, const CVec& g, const Beamformer& w, const AuxWeights& aux,
           double sigma2, int k);

/// sum_k (log2 f_k - f_k e_k). Throws if any f_k <= 0.
double surrogate(const AuxWeights& aux, const RVec& mse_values);

/// (p_v, p_h): energy on the vertical and horizontal port rows of [W_r, W_t].
std::pair<double, double> polarization_power(const Beamformer& w, int n_t);

}  // namespace iosim
