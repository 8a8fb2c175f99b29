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

#include "iosim/types.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace iosim {

/// Element re-radiation model. The normalized intensity is
/// F(theta) = cos^q(theta) on the radiating half-space and 0 behind it
/// (q = 0 is isotropic everywhere).
struct ElementGainModel {
  double power_gain = 1.0;
  double area = 1.0;
  double pattern_exponent = 3.0;

  double intensity(double cos_theta) const;
};

/// PL(d) = C0 * d^-alpha, per link class. `direct_extra_db` is an additional
/// attenuation applied to the BS-user link only (obstructed direct path).
struct PathLossModel {
  double c0_db = -30.0;
  double alpha_bi = 2.2;
  double alpha_iu = 2.8;
  double alpha_bu = 3.5;
  double direct_extra_db = 0.0;

  double gain(double distance_m, double alpha) const;
};

/// Layout parameters from which build_geometry derives concrete positions.
struct LayoutSpec {
  Vec3 bs_position{0.0, 30.0, 5.0};
  Vec3 ios_center{30.0, 0.0, 5.0};
  Vec3 ios_normal{0.0, 1.0, 0.0};  // points into the reflection half-space
  Vec3 reflect_anchor{35.0, 5.0, 1.5};
  double user_radius = 3.0;
  double element_spacing = 0.05;
};

enum class PolarizationModel {
  /// Co- and cross-polar blocks drawn independently.
  independent,
  /// One spatial draw per link shared by all four polarization blocks, each
  /// block weighted by a unit-modulus random phase (Kronecker model).
  shared_spatial,
};

struct ScenarioConfig {
  int n_t = 4;
  int m_elems = 4;
  int k_r = 2;
  int k_t = 2;
  double beta_bi = 0.1;
  double beta_iu = 0.1;
  double beta_bu = 0.1;
  double p_bs = 1.0;
  double sigma2 = 1e-8;
  int n_bits = 2;
  ElementGainModel gain_model;
  LayoutSpec layout;
  PathLossModel path_loss;
  PolarizationModel polarization = PolarizationModel::independent;
  std::uint64_t seed = 1;

  int users() const { return k_r + k_t; }
  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

struct Geometry {
  Vec3 bs_position;
  Vec3 ios_center;
  Vec3 ios_normal;  // unit
  Vec3 reflect_anchor;
  Vec3 refract_anchor;
  std::vector<Vec3> element_positions;
  std::vector<Vec3> user_positions;
  std::vector<Side> side_label;

  /// Signed distance from the surface plane; positive on the reflection side.
  double plane_offset(const Vec3& p) const { return ios_normal.dot(p - ios_center); }
  /// Throws std::logic_error if a user is on the wrong side or an element is
  /// off the plane.
  void validate() const;
};

Geometry build_geometry(const ScenarioConfig& config);

enum class SurfaceMode { reflect, refract };

/// sqrt(G S F(theta_i) F(theta_r)), clamped to [0, 1]. In reflect mode the
/// receiver must share the transmitter's half-space; in refract mode it must be
/// on the opposite one. A receiver outside the radiating half-space gets 0
/// unless the pattern is isotropic.
double element_amplitude(const Geometry& geometry, const ElementGainModel& gain, int m,
                         const Vec3& tx_point, const Vec3& rx_point, SurfaceMode mode);

/// Dual-polarized channels. Element/port index layout is [v-half, h-half]:
/// h_bi rows are the 2M element ports (v then h), columns the 2N_t BS ports.
/// For a reflect user h_iu = [h^vv, h^vh]; for a refract user [h^hv, h^hh].
/// Users are ordered reflect-side first.
struct ChannelSet {
  CMat h_bi;
  std::vector<CRow> h_iu;
  std::vector<CRow> h_bu;
  std::vector<Side> side_label;

  int n_t() const { return static_cast<int>(h_bi.cols()) / 2; }
  int m_elems() const { return static_cast<int>(h_bi.rows()) / 2; }
  int users() const { return static_cast<int>(side_label.size()); }
  int reflect_users() const;
  void validate() const;
  /// FNV-1a over the raw doubles; used to check that schemes share draws.
  std::uint64_t checksum() const;
};

ChannelSet synthesize_channels(const ScenarioConfig& config, const Geometry& geometry,
                               std::mt19937_64& rng);

enum class LinkClass { bs_ios, ios_user, bs_user };

/// Pooled co-/cross-polar energy ratio over the samples. Returns +inf when no
/// cross-polar energy is present; throws if `expected_beta` is positive and the
/// cross-polar energy is zero, or if the samples carry no energy at all.
double empirical_xpd(std::span<const ChannelSet> samples, LinkClass link,
                     std::optional<double> expected_beta = std::nullopt);

}  // namespace iosim
