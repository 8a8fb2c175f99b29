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

#include "iosim/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iosim {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::dualpol_ios: return "dualpol_ios";
    case Scheme::power_domain_ios: return "power_domain_ios";
    case Scheme::dualpol_ris: return "dualpol_ris";
    case Scheme::cellular: return "cellular";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& id) {
  for (Scheme s : all_schemes())
    if (to_string(s) == id) return s;
  throw std::invalid_argument("unknown scheme '" + id + "'");
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> kAll{Scheme::dualpol_ios, Scheme::power_domain_ios, Scheme::dualpol_ris,
                                        Scheme::cellular};
  return kAll;
}

namespace {

SchemeResult finish(const OptimizeResult& res, const ChannelSet& channels) {
  SchemeResult out;
  out.w = Beamformer::from_stacked(res.w, channels.reflect_users());
  out.phases = res.phases;
  out.trace = res.trace;
  out.sum_rate = res.sum_rate;
  return out;
}

}  // namespace

PowerDomainResult optimize_power_domain(const ScenarioConfig& config, const ChannelSet& channels, double epsilon,
                                        bool coupled_phases, const RunOptions& options) {
  const Geometry geometry = build_geometry(config);
  const ElementAmplitudes amps = element_amplitudes(geometry, config.gain_model);
  const SurfaceMap map = power_domain_map(amps.reflect, epsilon, coupled_phases, channels.side_label);
  const auto res = optimize(channels, map, RVec::Zero(map.num_vars()), config.p_bs, config.sigma2, config.n_bits,
                            options);
  PowerDomainResult out;
  static_cast<SchemeResult&>(out) = finish(res, channels);
  out.epsilon = epsilon;
  const int m = channels.m_elems();
  out.state.epsilon = epsilon;
  out.state.coupled_phases = coupled_phases;
  out.state.n_bits = config.n_bits;
  out.state.amp = amps.reflect;
  for (int i = 0; i < m; ++i) {
    out.state.psi_r.push_back(res.phases(i));
    out.state.psi_t.push_back(coupled_phases ? res.phases(i) : res.phases(m + i));
  }
  return out;
}

SchemeResult optimize_dualpol_ris(const ScenarioConfig& config, const ChannelSet& channels,
                                  const RunOptions& options) {
  const Geometry geometry = build_geometry(config);
  const ElementAmplitudes amps = element_amplitudes(geometry, config.gain_model);
  const SurfaceMap map = reflect_only_map(amps.reflect, amps.reflect, channels.side_label);
  const auto res = optimize(channels, map, RVec::Zero(map.num_vars()), config.p_bs, config.sigma2, config.n_bits,
                            options);
  return finish(res, channels);
}

SchemeResult optimize_cellular(const ScenarioConfig& config, const ChannelSet& channels,
                               const RunOptions& options) {
  const SurfaceMap map = empty_map(channels.m_elems(), channels.users());
  const auto res = optimize(channels, map, RVec(0), config.p_bs, config.sigma2, config.n_bits, options);
  return finish(res, channels);
}

SchemeResult run_scheme(Scheme scheme, const ScenarioConfig& config, const ChannelSet& channels,
                        const SchemeOptions& options) {
  switch (scheme) {
    case Scheme::dualpol_ios: {
      const auto r = run(config, channels, options.run);
      SchemeResult out;
      out.w = r.w;
      out.trace = r.trace;
      out.sum_rate = r.sum_rate;
      out.phases = RVec(2 * r.state.m_elems());
      for (int i = 0; i < r.state.m_elems(); ++i) {
        out.phases(i) = r.state.psi_vv[static_cast<std::size_t>(i)];
        out.phases(r.state.m_elems() + i) = r.state.psi_hh[static_cast<std::size_t>(i)];
      }
      return out;
    }
    case Scheme::power_domain_ios:
      return optimize_power_domain(config, channels, options.epsilon, options.coupled_phases, options.run);
    case Scheme::dualpol_ris:
      return optimize_dualpol_ris(config, channels, options.run);
    case Scheme::cellular:
      return optimize_cellular(config, channels, options.run);
  }
  throw std::logic_error("unreachable scheme");
}

void PowerSplitModel::validate() const {
  if (tau.size() != chi.size() || tau.size() != sides.size())
    throw std::invalid_argument("power split model: inconsistent user counts");
  if (!(epsilon > 0.0)) throw std::invalid_argument("power split model: epsilon must be positive");
  for (std::size_t k = 0; k < tau.size(); ++k)
    if (!(tau[k] >= 0.0) || !(chi[k] >= 0.0))
      throw std::invalid_argument("power split model: tau and chi must be non-negative");
}

double power_domain_rate(const PowerSplitModel& model) {
  model.validate();
  const double eps = model.epsilon;
  double rate = 0.0;
  for (std::size_t k = 0; k < model.tau.size(); ++k) {
    const double share = model.sides[k] == Side::reflect ? eps / (1.0 + eps) : 1.0 / (1.0 + eps);
    rate += std::log2(1.0 + model.tau[k] + share * model.chi[k]);
  }
  return rate;
}

double power_split_derivative(const PowerSplitModel& model) {
  model.validate();
  const double eps = model.epsilon;
  const double dshare = 1.0 / ((1.0 + eps) * (1.0 + eps));
  double total = 0.0;
  for (std::size_t k = 0; k < model.tau.size(); ++k) {
    const bool reflect = model.sides[k] == Side::reflect;
    const double share = reflect ? eps / (1.0 + eps) : 1.0 / (1.0 + eps);
    const double term = model.chi[k] * dshare / (1.0 + model.tau[k] + share * model.chi[k]);
    total += reflect ? term : -term;
  }
  return total / std::log(2.0);
}

double optimal_epsilon(const PowerSplitModel& model, double tolerance) {
  model.validate();
  PowerSplitModel m = model;
  auto rate_at = [&m](double log_eps) {
    m.epsilon = std::exp(log_eps);
    return power_domain_rate(m);
  };

  const double lo = std::log(1e-3), hi = std::log(1e3);
  constexpr int kGrid = 121;
  std::vector<double> xs(kGrid), ys(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (kGrid - 1);
    ys[static_cast<std::size_t>(i)] = rate_at(xs[static_cast<std::size_t>(i)]);
  }
  const auto [mn, mx] = std::minmax_element(ys.begin(), ys.end());
  if (*mx - *mn <= 1e-14 * (1.0 + std::abs(*mx))) return 1.0;

  const auto best = static_cast<int>(std::max_element(ys.begin(), ys.end()) - ys.begin());
  double a = xs[static_cast<std::size_t>(std::max(best - 1, 0))];
  double b = xs[static_cast<std::size_t>(std::min(best + 1, kGrid - 1))];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = rate_at(c), fd = rate_at(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = rate_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = rate_at(d);
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace iosim
