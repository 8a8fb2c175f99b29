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

#include "iosim/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace iosim {

Beamformer Beamformer::from_stacked(const CMat& w, int k_r) {
  return {w.leftCols(k_r), w.rightCols(w.cols() - k_r)};
}

CMat Beamformer::stacked() const {
  const Eigen::Index rows = std::max(w_r.rows(), w_t.rows());
  CMat out(rows, w_r.cols() + w_t.cols());
  if (w_r.cols() > 0) out.leftCols(w_r.cols()) = w_r;
  if (w_t.cols() > 0) out.rightCols(w_t.cols()) = w_t;
  return out;
}

CRow effective_channel(const ChannelSet& channels, const CVec& g, int k) {
  const auto ku = static_cast<std::size_t>(k);
  if (k < 0 || ku >= channels.h_iu.size()) throw std::out_of_range("effective_channel: user index");
  if (g.size() != channels.h_bi.rows()) throw std::invalid_argument("effective_channel: G must be 2M x 2M");
  return channels.h_bu[ku] + channels.h_iu[ku].cwiseProduct(g.transpose()) * channels.h_bi;
}

CMat effective_channels(const ChannelSet& channels, const SurfaceMap& map, const RVec& phases) {
  const int k_total = channels.users();
  if (map.users() != k_total) throw std::invalid_argument("effective_channels: map/user mismatch");
  CMat h(k_total, channels.h_bi.cols());
  for (int k = 0; k < k_total; ++k) h.row(k) = effective_channel(channels, map.diagonal(k, phases), k);
  return h;
}

CMat effective_channels(const ChannelSet& channels, const CVec& g) {
  CMat h(channels.users(), channels.h_bi.cols());
  for (int k = 0; k < channels.users(); ++k) h.row(k) = effective_channel(channels, g, k);
  return h;
}

double sinr(const CMat& h, const CMat& w, double sigma2, int k) {
  const CRow hw = h.row(k) * w;
  double interference = 0.0;
  for (Eigen::Index j = 0; j < hw.size(); ++j)
    if (j != k) interference += std::norm(hw(j));
  return std::norm(hw(k)) / (interference + sigma2);
}

double sum_rate(const CMat& h, const CMat& w, double sigma2) {
  double rate = 0.0;
  for (Eigen::Index k = 0; k < h.rows(); ++k) rate += std::log2(1.0 + sinr(h, w, sigma2, static_cast<int>(k)));
  return rate;
}

double mse(const CMat& h, const CMat& w, const AuxWeights& aux, double sigma2, int k) {
  const CRow hw = h.row(k) * w;
  const cd u = aux.u(k);
  return std::norm(u) * hw.squaredNorm() - 2.0 * std::real(std::conj(u) * hw(k)) + std::norm(u) * sigma2 + 1.0;
}

RVec mses(const CMat& h, const CMat& w, const AuxWeights& aux, double sigma2) {
  RVec e(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) e(k) = mse(h, w, aux, sigma2, static_cast<int>(k));
  return e;
}

double sinr(const ChannelSet& channels, const CVec& g, const Beamformer& w, double sigma2, int k) {
  return sinr(effective_channels(channels, g), w.stacked(), sigma2, k);
}

double sum_rate(const ChannelSet& channels, const CVec& g, const Beamformer& w, double sigma2) {
  return sum_rate(effective_channels(channels, g), w.stacked(), sigma2);
}

double mse(const ChannelSet& channels, const CVec& g, const Beamformer& w, const AuxWeights& aux,
           double sigma2, int k) {
  return mse(effective_channels(channels, g), w.stacked(), aux, sigma2, k);
}

double surrogate(const AuxWeights& aux, const RVec& mse_values) {
  if (aux.f.size() != mse_values.size()) throw std::invalid_argument("surrogate: size mismatch");
  double s = 0.0;
  for (Eigen::Index k = 0; k < aux.f.size(); ++k) {
    if (!(aux.f(k) > 0.0)) throw std::domain_error("surrogate: weights must be positive");
    s += std::log2(aux.f(k)) - aux.f(k) * mse_values(k);
  }
  return s;
}

std::pair<double, double> polarization_power(const Beamformer& w, int n_t) {
  const CMat s = w.stacked();
  return {s.topRows(n_t).squaredNorm(), s.bottomRows(s.rows() - n_t).squaredNorm()};
}

}  // namespace iosim
