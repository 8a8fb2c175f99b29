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

#include "iosim/ios_model.hpp"

#include <cmath>
#include <stdexcept>

namespace iosim {

PhaseCodebook::PhaseCodebook(int n_bits) : bits_(n_bits), size_(0) {
  if (n_bits < 1 || n_bits > 16) throw std::invalid_argument("codebook: n_bits must be in [1, 16]");
  size_ = 1 << n_bits;
}

std::vector<double> PhaseCodebook::values() const {
  std::vector<double> out(static_cast<std::size_t>(size_));
  for (int l = 0; l < size_; ++l) out[static_cast<std::size_t>(l)] = value(l);
  return out;
}

int PhaseCodebook::nearest_index(double psi) const {
  if (!std::isfinite(psi)) throw std::invalid_argument("quantize_phase: non-finite phase");
  double wrapped = std::fmod(psi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  const double t = wrapped / step();
  const int lower = static_cast<int>(std::floor(t)) % size_;
  const int upper = (lower + 1) % size_;
  const double frac = t - std::floor(t);
  if (std::abs(frac - 0.5) <= 1e-12) return std::min(lower, upper);
  return frac < 0.5 ? lower : upper;
}

int PhaseCodebook::index_of(double psi) const {
  const int l = nearest_index(psi);
  double d = std::remainder(psi - value(l), kTwoPi);
  if (std::abs(d) > 1e-9) throw std::invalid_argument("phase is not a codebook entry");
  return l;
}

PhaseCodebook codebook(int n_bits) { return PhaseCodebook(n_bits); }

double quantize_phase(double psi, const PhaseCodebook& book) { return book.value(book.nearest_index(psi)); }

void DualPolIosState::validate() const {
  const std::size_t m = psi_vv.size();
  if (psi_hh.size() != m || amp_vv.size() != m || amp_hh.size() != m)
    throw std::invalid_argument("dual-pol state: inconsistent element counts");
  const PhaseCodebook book(n_bits);
  for (std::size_t i = 0; i < m; ++i) {
    book.index_of(psi_vv[i]);
    book.index_of(psi_hh[i]);
    if (!(amp_vv[i] >= 0.0 && amp_vv[i] <= 1.0) || !(amp_hh[i] >= 0.0 && amp_hh[i] <= 1.0))
      throw std::invalid_argument("dual-pol state: amplitudes must lie in [0, 1]");
  }
}

CVec coefficient_matrix(const DualPolIosState& state) {
  const int m = state.m_elems();
  CVec g(2 * m);
  for (int i = 0; i < m; ++i) {
    g(i) = std::polar(state.amp_vv[static_cast<std::size_t>(i)], state.psi_vv[static_cast<std::size_t>(i)]);
    g(m + i) = std::polar(state.amp_hh[static_cast<std::size_t>(i)], state.psi_hh[static_cast<std::size_t>(i)]);
  }
  return g;
}

void PowerDomainIosState::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("power-domain state: epsilon must be positive");
  if (psi_r.size() != amp.size() || psi_t.size() != amp.size())
    throw std::invalid_argument("power-domain state: inconsistent element counts");
}

std::pair<CVec, CVec> power_domain_matrices(const PowerDomainIosState& state) {
  state.validate();
  const double r_scale = std::sqrt(state.epsilon / (1.0 + state.epsilon));
  const double t_scale = std::sqrt(1.0 / (1.0 + state.epsilon));
  const auto m = static_cast<Eigen::Index>(state.amp.size());
  CVec r(m), t(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto s = static_cast<std::size_t>(i);
    r(i) = std::polar(state.amp[s] * r_scale, state.psi_r[s]);
    t(i) = std::polar(state.amp[s] * t_scale, state.coupled_phases ? state.psi_r[s] : state.psi_t[s]);
  }
  return {r, t};
}

ElementAmplitudes element_amplitudes(const Geometry& geometry, const ElementGainModel& gain) {
  ElementAmplitudes out;
  for (int m = 0; m < static_cast<int>(geometry.element_positions.size()); ++m) {
    out.reflect.push_back(element_amplitude(geometry, gain, m, geometry.bs_position, geometry.reflect_anchor,
                                            SurfaceMode::reflect));
    out.refract.push_back(element_amplitude(geometry, gain, m, geometry.bs_position, geometry.refract_anchor,
                                            SurfaceMode::refract));
  }
  return out;
}

SurfaceMap::SurfaceMap(int num_vars, std::vector<std::vector<Tap>> taps)
    : num_vars_(num_vars), taps_(std::move(taps)) {
  for (const auto& user : taps_) {
    if (user.size() != taps_.front().size()) throw std::invalid_argument("surface map: ragged taps");
    for (const auto& t : user)
      if (t.var >= num_vars_) throw std::invalid_argument("surface map: tap references unknown variable");
  }
}

CVec SurfaceMap::diagonal(int k, const RVec& phases) const {
  const auto& t = taps(k);
  CVec d = CVec::Zero(static_cast<Eigen::Index>(t.size()));
  for (std::size_t p = 0; p < t.size(); ++p)
    if (t[p].var >= 0) d(static_cast<Eigen::Index>(p)) = std::polar(t[p].weight, phases(t[p].var));
  return d;
}

SurfaceMap dual_pol_map(const std::vector<double>& amp_vv, const std::vector<double>& amp_hh, int users) {
  const int m = static_cast<int>(amp_vv.size());
  std::vector<SurfaceMap::Tap> row(static_cast<std::size_t>(2 * m));
  for (int i = 0; i < m; ++i) {
    row[static_cast<std::size_t>(i)] = {i, amp_vv[static_cast<std::size_t>(i)]};
    row[static_cast<std::size_t>(m + i)] = {m + i, amp_hh[static_cast<std::size_t>(i)]};
  }
  return SurfaceMap(2 * m, std::vector<std::vector<SurfaceMap::Tap>>(static_cast<std::size_t>(users), row));
}

SurfaceMap power_domain_map(const std::vector<double>& amp, double epsilon, bool coupled_phases,
                            const std::vector<Side>& sides) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("power-domain map: epsilon must be positive");
  const int m = static_cast<int>(amp.size());
  const double r_scale = std::sqrt(epsilon / (1.0 + epsilon));
  const double t_scale = std::sqrt(1.0 / (1.0 + epsilon));
  std::vector<std::vector<SurfaceMap::Tap>> taps;
  for (Side s : sides) {
    std::vector<SurfaceMap::Tap> row(static_cast<std::size_t>(2 * m));
    for (int p = 0; p < 2 * m; ++p) {
      const int e = p % m;  // the element responds identically to both polarizations
      const bool reflect = s == Side::reflect;
      const int var = reflect || coupled_phases ? e : m + e;
      row[static_cast<std::size_t>(p)] = {var, amp[static_cast<std::size_t>(e)] * (reflect ? r_scale : t_scale)};
    }
    taps.push_back(std::move(row));
  }
  return SurfaceMap(coupled_phases ? m : 2 * m, std::move(taps));
}

SurfaceMap reflect_only_map(const std::vector<double>& amp_vv, const std::vector<double>& amp_hh,
                            const std::vector<Side>& sides) {
  const int m = static_cast<int>(amp_vv.size());
  std::vector<std::vector<SurfaceMap::Tap>> taps;
  for (Side s : sides) {
    std::vector<SurfaceMap::Tap> row(static_cast<std::size_t>(2 * m));
    if (s == Side::reflect)
      for (int i = 0; i < m; ++i) {
        row[static_cast<std::size_t>(i)] = {i, amp_vv[static_cast<std::size_t>(i)]};
        row[static_cast<std::size_t>(m + i)] = {m + i, amp_hh[static_cast<std::size_t>(i)]};
      }
    taps.push_back(std::move(row));
  }
  return SurfaceMap(2 * m, std::move(taps));
}

SurfaceMap empty_map(int m_elems, int users) {
  return SurfaceMap(0, std::vector<std::vector<SurfaceMap::Tap>>(
                           static_cast<std::size_t>(users),
                           std::vector<SurfaceMap::Tap>(static_cast<std::size_t>(2 * m_elems))));
}

}  // namespace iosim
