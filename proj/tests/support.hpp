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

#include "iosim/config_io.hpp"
#include "oracles.hpp"

#include <filesystem>
#include <random>

namespace testing_support {

using namespace iosim;

/// Unit-variance channels with no geometry behind them.
inline ChannelSet random_channels(int n_t, int m, int k_r, int k_t, std::mt19937_64& rng, double direct = 1.0) {
  ChannelSet ch;
  ch.h_bi = oracle::random_cmat(2 * m, 2 * n_t, rng);
  for (int k = 0; k < k_r + k_t; ++k) {
    ch.h_iu.push_back(oracle::random_cmat(1, 2 * m, rng));
    ch.h_bu.push_back(oracle::random_cmat(1, 2 * n_t, rng, direct));
    ch.side_label.push_back(k < k_r ? Side::reflect : Side::refract);
  }
  return ch;
}

inline CVec random_unit_diag(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  CVec g(n);
  for (Eigen::Index i = 0; i < n; ++i) g(i) = std::polar(1.0, u(rng));
  return g;
}

inline RVec random_phases(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  RVec p(n);
  for (Eigen::Index i = 0; i < n; ++i) p(i) = u(rng);
  return p;
}

/// Stacked effective channel from the dense oracle.
inline CMat dense_effective(const ChannelSet& ch, const CVec& g) {
  CMat h(ch.users(), ch.h_bi.cols());
  for (int k = 0; k < ch.users(); ++k)
    h.row(k) = oracle::effective_channel(ch.h_bu[static_cast<std::size_t>(k)], ch.h_iu[static_cast<std::size_t>(k)],
                                         g, ch.h_bi);
  return h;
}

inline std::filesystem::path config_path(const char* name) {
  return std::filesystem::path(IOSIM_SOURCE_DIR) / "configs" / name;
}

/// Surface-dominant scenario shipped in configs/.
inline ScenarioConfig surface_dominant() { return load_config(config_path("surface_dominant.json")).scenario; }

}  // namespace testing_support
