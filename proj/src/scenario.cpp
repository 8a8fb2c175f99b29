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

#include "iosim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace iosim {

double ElementGainModel::intensity(double cos_theta) const {
  if (pattern_exponent == 0.0) return 1.0;
  if (cos_theta <= 0.0) return 0.0;
  return std::pow(std::min(cos_theta, 1.0), pattern_exponent);
}

double PathLossModel::gain(double distance_m, double alpha) const {
  if (!(distance_m > 0.0)) throw std::invalid_argument("path loss: distance must be positive");
  return std::pow(10.0, c0_db / 10.0) * std::pow(distance_m, -alpha);
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("scenario config: " + what); };
  if (n_t < 1) fail("n_t must be >= 1");
  if (m_elems < 1) fail("m_elems must be >= 1");
  if (k_r < 0 || k_t < 0) fail("user counts must be non-negative");
  if (users() < 2 || users() % 2 != 0) fail("k_r + k_t must be even and >= 2");
  for (double b : {beta_bi, beta_iu, beta_bu})
    if (!(b >= 0.0 && b <= 1.0)) fail("XPD factors must lie in [0, 1]");
  if (!(p_bs > 0.0)) fail("p_bs must be positive");
  if (!(sigma2 > 0.0)) fail("sigma2 must be positive");
  if (n_bits < 1 || n_bits > 16) fail("n_bits must be in [1, 16]");
  if (gain_model.pattern_exponent < 0.0) fail("pattern_exponent must be >= 0");
  if (!(gain_model.power_gain > 0.0) || !(gain_model.area > 0.0)) fail("gain model must be positive");
  if (layout.ios_normal.norm() == 0.0) fail("ios_normal must be non-zero");
  if (!(layout.user_radius >= 0.0)) fail("user_radius must be >= 0");
}

void Geometry::validate() const {
  if (user_positions.size() != side_label.size())
    throw std::logic_error("geometry: user position/label count mismatch");
  for (std::size_t k = 0; k < user_positions.size(); ++k) {
    const double off = plane_offset(user_positions[k]);
    const bool ok = side_label[k] == Side::reflect ? off > 0.0 : off < 0.0;
    if (!ok) throw std::logic_error("geometry: user " + std::to_string(k) + " is in the wrong half-space");
  }
  for (const auto& e : element_positions)
    if (std::abs(plane_offset(e)) > 1e-9) throw std::logic_error("geometry: element off the surface plane");
  if (!(plane_offset(bs_position) > 0.0))
    throw std::logic_error("geometry: base station must be in the reflection half-space");
}

namespace {

Vec3 mirror(const Geometry& g, const Vec3& p) { return p - 2.0 * g.plane_offset(p) * g.ios_normal; }

}  // namespace

Geometry build_geometry(const ScenarioConfig& config) {
  config.validate();
  const auto& L = config.layout;

  Geometry g;
  g.bs_position = L.bs_position;
  g.ios_center = L.ios_center;
  g.ios_normal = L.ios_normal.normalized();
  g.reflect_anchor = L.reflect_anchor;
  if (!(g.plane_offset(g.reflect_anchor) > L.user_radius))
    throw std::invalid_argument("layout: user circle must lie strictly inside the reflection half-space");
  g.refract_anchor = mirror(g, g.reflect_anchor);

  // In-plane basis: prefer a horizontal first axis.
  Vec3 a = g.ios_normal.cross(Vec3::UnitZ());
  if (a.norm() < 1e-9) a = g.ios_normal.cross(Vec3::UnitX());
  a.normalize();
  const Vec3 b = g.ios_normal.cross(a).normalized();
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(config.m_elems))));
  const int rows = (config.m_elems + cols - 1) / cols;
  for (int m = 0; m < config.m_elems; ++m) {
    const double c = (m % cols) - 0.5 * (cols - 1);
    const double r = (m / cols) - 0.5 * (rows - 1);
    g.element_positions.push_back(g.ios_center + L.element_spacing * (c * a + r * b));
  }

  // Slot i and slot i + K share a reflect-frame position, so an even split
  // gives exact mirror pairs and any relabeling keeps the same point set.
  const int total = config.users();
  const int half = total / 2;
  for (int i = 0; i < total; ++i) {
    const double ang = kTwoPi * static_cast<double>(i % half) / static_cast<double>(half) + 0.25 * kPi;
    const Vec3 p = g.reflect_anchor + L.user_radius * Vec3(std::cos(ang), std::sin(ang), 0.0);
    const Side side = i < config.k_r ? Side::reflect : Side::refract;
    // Project the circle offset so the user never crosses the plane.
    Vec3 q = p;
    if (g.plane_offset(q) <= 0.0) q = g.reflect_anchor;
    g.user_positions.push_back(side == Side::reflect ? q : mirror(g, q));
    g.side_label.push_back(side);
  }
  g.validate();
  return g;
}

double element_amplitude(const Geometry& geometry, const ElementGainModel& gain, int m,
                         const Vec3& tx_point, const Vec3& rx_point, SurfaceMode mode) {
  if (m < 0 || m >= static_cast<int>(geometry.element_positions.size()))
    throw std::out_of_range("element_amplitude: element index");
  const Vec3& e = geometry.element_positions[static_cast<std::size_t>(m)];
  const Vec3& n = geometry.ios_normal;
  const Vec3 to_tx = tx_point - e;
  const Vec3 to_rx = rx_point - e;
  if (to_tx.norm() == 0.0 || to_rx.norm() == 0.0)
    throw std::invalid_argument("element_amplitude: point coincides with element");

  const double tx_dot = n.dot(to_tx);
  const double tx_side = tx_dot >= 0.0 ? 1.0 : -1.0;
  const double cos_i = std::abs(tx_dot) / to_tx.norm();
  const double face = mode == SurfaceMode::reflect ? tx_side : -tx_side;
  const double cos_r = face * n.dot(to_rx) / to_rx.norm();

  const double p = gain.power_gain * gain.area * gain.intensity(cos_i) * gain.intensity(cos_r);
  return std::min(1.0, std::sqrt(std::max(p, 0.0)));
}

int ChannelSet::reflect_users() const {
  return static_cast<int>(std::count(side_label.begin(), side_label.end(), Side::reflect));
}

void ChannelSet::validate() const {
  const int k = users();
  if (h_bi.rows() < 2 || h_bi.cols() < 2 || h_bi.rows() % 2 || h_bi.cols() % 2)
    throw std::invalid_argument("channels: h_bi must be 2M x 2N_t");
  if (static_cast<int>(h_iu.size()) != k || static_cast<int>(h_bu.size()) != k)
    throw std::invalid_argument("channels: per-user channel count mismatch");
  for (int i = 0; i < k; ++i) {
    if (h_iu[i].size() != h_bi.rows()) throw std::invalid_argument("channels: h_iu length must be 2M");
    if (h_bu[i].size() != h_bi.cols()) throw std::invalid_argument("channels: h_bu length must be 2N_t");
    if (!h_iu[i].allFinite() || !h_bu[i].allFinite()) throw std::invalid_argument("channels: non-finite entry");
    if (i > 0 && side_label[i - 1] == Side::refract && side_label[i] == Side::reflect)
      throw std::invalid_argument("channels: reflect-side users must precede refract-side users");
  }
  if (!h_bi.allFinite()) throw std::invalid_argument("channels: non-finite entry in h_bi");
}

std::uint64_t ChannelSet::checksum() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const cd* data, Eigen::Index n) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n) * sizeof(cd); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  const CMat bi = h_bi;  // column-major contiguous copy
  mix(bi.data(), bi.size());
  for (const auto& r : h_iu) mix(r.data(), r.size());
  for (const auto& r : h_bu) mix(r.data(), r.size());
  for (Side s : side_label) {
    h ^= static_cast<std::uint64_t>(s == Side::reflect ? 1 : 2);
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

struct PolarizationWeights {
  cd vv, vh, hv, hh;
};

class ComplexGaussian {
 public:
  explicit ComplexGaussian(std::mt19937_64& rng) : rng_(rng), normal_(0.0, std::sqrt(0.5)) {}
  cd operator()() {
    const double re = normal_(rng_);
    const double im = normal_(rng_);
    return {re, im};
  }

 private:
  std::mt19937_64& rng_;
  std::normal_distribution<double> normal_;
};

PolarizationWeights draw_polarization(double beta, PolarizationModel model, std::mt19937_64& rng) {
  const double co = std::sqrt(1.0 - beta);
  const double cross = std::sqrt(beta);
  if (model == PolarizationModel::independent) return {co, cross, cross, co};
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double a = phase(rng), b = phase(rng), c = phase(rng), d = phase(rng);
  return {std::polar(co, a), std::polar(cross, b), std::polar(cross, c), std::polar(co, d)};
}

// Fills the four blocks of a (2R x 2C) dual-polarized matrix.
CMat draw_dual_matrix(int rows, int cols, double path_gain, double beta, PolarizationModel model,
                      std::mt19937_64& rng) {
  ComplexGaussian cn(rng);
  const double scale = std::sqrt(path_gain);
  CMat out(2 * rows, 2 * cols);
  if (model == PolarizationModel::shared_spatial) {
    CMat spatial(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) spatial(i, j) = cn();
    const auto w = draw_polarization(beta, model, rng);
    out.topLeftCorner(rows, cols) = scale * w.vv * spatial;
    out.topRightCorner(rows, cols) = scale * w.vh * spatial;
    out.bottomLeftCorner(rows, cols) = scale * w.hv * spatial;
    out.bottomRightCorner(rows, cols) = scale * w.hh * spatial;
    return out;
  }
  const double co = scale * std::sqrt(1.0 - beta);
  const double cross = scale * std::sqrt(beta);
  for (int j = 0; j < 2 * cols; ++j)
    for (int i = 0; i < 2 * rows; ++i) {
      const bool same = (i < rows) == (j < cols);
      out(i, j) = (same ? co : cross) * cn();
    }
  return out;
}

// One receive antenna with a given polarization: returns [v-half, h-half].
CRow draw_dual_row(int len, double path_gain, double beta, Side side, PolarizationModel model,
                   std::mt19937_64& rng) {
  ComplexGaussian cn(rng);
  const double scale = std::sqrt(path_gain);
  CRow out(2 * len);
  if (model == PolarizationModel::shared_spatial) {
    CRow spatial(len);
    for (int i = 0; i < len; ++i) spatial(i) = cn();
    const auto w = draw_polarization(beta, model, rng);
    // Reflect users are v-polarized: [vv, vh]; refract users h: [hv, hh].
    const cd first = side == Side::reflect ? w.vv : w.hv;
    const cd second = side == Side::reflect ? w.vh : w.hh;
    out.head(len) = scale * first * spatial;
    out.tail(len) = scale * second * spatial;
    return out;
  }
  const double co = scale * std::sqrt(1.0 - beta);
  const double cross = scale * std::sqrt(beta);
  for (int i = 0; i < 2 * len; ++i) {
    const bool v_half = i < len;
    const bool is_co = (side == Side::reflect) == v_half;
    out(i) = (is_co ? co : cross) * cn();
  }
  return out;
}

}  // namespace

ChannelSet synthesize_channels(const ScenarioConfig& config, const Geometry& geometry,
                               std::mt19937_64& rng) {
  config.validate();
  const auto& pl = config.path_loss;
  ChannelSet ch;
  ch.side_label = geometry.side_label;

  const double d_bi = (geometry.bs_position - geometry.ios_center).norm();
  ch.h_bi = draw_dual_matrix(config.m_elems, config.n_t, pl.gain(d_bi, pl.alpha_bi), config.beta_bi,
                             config.polarization, rng);

  const double direct_extra = std::pow(10.0, -pl.direct_extra_db / 10.0);
  for (std::size_t k = 0; k < geometry.user_positions.size(); ++k) {
    const Vec3& p = geometry.user_positions[k];
    const Side side = geometry.side_label[k];
    const double d_iu = (p - geometry.ios_center).norm();
    const double d_bu = (p - geometry.bs_position).norm();
    ch.h_iu.push_back(draw_dual_row(config.m_elems, pl.gain(d_iu, pl.alpha_iu), config.beta_iu, side,
                                    config.polarization, rng));
    ch.h_bu.push_back(draw_dual_row(config.n_t, direct_extra * pl.gain(d_bu, pl.alpha_bu),
                                    config.beta_bu, side, config.polarization, rng));
  }
  ch.validate();
  return ch;
}

double empirical_xpd(std::span<const ChannelSet> samples, LinkClass link,
                     std::optional<double> expected_beta) {
  if (samples.empty()) throw std::invalid_argument("empirical_xpd: need at least one sample");
  double co = 0.0, cross = 0.0;
  for (const auto& ch : samples) {
    if (link == LinkClass::bs_ios) {
      const int m = ch.m_elems(), n = ch.n_t();
      co += ch.h_bi.topLeftCorner(m, n).squaredNorm() + ch.h_bi.bottomRightCorner(m, n).squaredNorm();
      cross += ch.h_bi.topRightCorner(m, n).squaredNorm() + ch.h_bi.bottomLeftCorner(m, n).squaredNorm();
      continue;
    }
    const auto& rows = link == LinkClass::ios_user ? ch.h_iu : ch.h_bu;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Eigen::Index half = rows[k].size() / 2;
      const double v = rows[k].head(half).squaredNorm();
      const double h = rows[k].tail(half).squaredNorm();
      const bool reflect = ch.side_label[k] == Side::reflect;
      co += reflect ? v : h;
      cross += reflect ? h : v;
    }
  }
  if (co == 0.0 && cross == 0.0) throw std::domain_error("empirical_xpd: samples carry no energy");
  if (cross == 0.0) {
    if (expected_beta && *expected_beta > 0.0)
      throw std::domain_error("empirical_xpd: zero cross-polar energy with positive XPD factor");
    return std::numeric_limits<double>::infinity();
  }
  return co / cross;
}

}  // namespace iosim
