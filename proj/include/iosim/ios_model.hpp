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

#include "iosim/scenario.hpp"
#include "iosim/types.hpp"

#include <utility>
#include <vector>

namespace iosim {

/// Uniform N-bit phase alphabet {2*pi*l / 2^N : l = 0 .. 2^N - 1}.
class PhaseCodebook {
 public:
  explicit PhaseCodebook(int n_bits);

  int bits() const { return bits_; }
  int size() const { return size_; }
  double step() const { return kTwoPi / size_; }
  double value(int index) const { return step() * index; }
  std::vector<double> values() const;

  /// Nearest entry under circular distance; exact midpoints go to the lower
  /// index.
  int nearest_index(double psi) const;
  /// Index of an entry that is already (within 1e-9 rad) on the alphabet.
  int index_of(double psi) const;

 private:
  int bits_;
  int size_;
};

PhaseCodebook codebook(int n_bits);
double quantize_phase(double psi, const PhaseCodebook& book);

struct DualPolIosState {
  int n_bits = 1;
  std::vector<double> psi_vv, psi_hh;
  std::vector<double> amp_vv, amp_hh;

  int m_elems() const { return static_cast<int>(psi_vv.size()); }
  void validate() const;
};

/// Diagonal of G = diag{g^vv_1..g^vv_M, g^hh_1..g^hh_M}.
CVec coefficient_matrix(const DualPolIosState& state);

struct PowerDomainIosState {
  double epsilon = 1.0;
  bool coupled_phases = false;  // psi_t mirrors psi_r when set
  int n_bits = 1;
  std::vector<double> psi_r, psi_t;
  std::vector<double> amp;

  void validate() const;
};

/// (reflect diagonal, refract diagonal), each of length M.
std::pair<CVec, CVec> power_domain_matrices(const PowerDomainIosState& state);

/// Per-element amplitudes seen toward each side's user anchor.
struct ElementAmplitudes {
  std::vector<double> reflect;  // drives the vv coefficients
  std::vector<double> refract;  // drives the hh coefficients
};

ElementAmplitudes element_amplitudes(const Geometry& geometry, const ElementGainModel& gain);

/// Maps a vector of optimization phases onto each user's view of the 2M
/// surface coefficients: entry p of user k is weight * exp(j * phase[var]),
/// or zero when var < 0. This lets one optimizer drive the dual-polarized
/// surface, the power-domain surface, the reflect-only surface and the
/// surface-free cellular case.
class SurfaceMap {
 public:
  struct Tap {
    int var = -1;
    double weight = 0.0;
  };

  SurfaceMap(int num_vars, std::vector<std::vector<Tap>> taps);

  int num_vars() const { return num_vars_; }
  int users() const { return static_cast<int>(taps_.size()); }
  int ports() const { return taps_.empty() ? 0 : static_cast<int>(taps_.front().size()); }
  const std::vector<Tap>& taps(int k) const { return taps_[static_cast<std::size_t>(k)]; }

  /// Coefficient diagonal seen by user k for the given phases.
  CVec diagonal(int k, const RVec& phases) const;

 private:
  int num_vars_;
  std::vector<std::vector<Tap>> taps_;
};

SurfaceMap dual_pol_map(const std::vector<double>& amp_vv, const std::vector<double>& amp_hh,
                        int users);
SurfaceMap power_domain_map(const std::vector<double>& amp, double epsilon, bool coupled_phases,
                            const std::vector<Side>& sides);
SurfaceMap reflect_only_map(const std::vector<double>& amp_vv, const std::vector<double>& amp_hh,
                            const std::vector<Side>& sides);
SurfaceMap empty_map(int m_elems, int users);

}  // namespace iosim
