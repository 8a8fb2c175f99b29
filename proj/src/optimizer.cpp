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

#include "iosim/optimizer.hpp"

#include "json.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace iosim {

CVec update_receivers(const CMat& h, const CMat& w, double sigma2) {
  CVec u(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const CRow hw = h.row(k) * w;
    u(k) = hw(k) / (hw.squaredNorm() + sigma2);
  }
  return u;
}

CVec update_receivers(const ChannelSet& channels, const CVec& g, const Beamformer& w, double sigma2) {
  return update_receivers(effective_channels(channels, g), w.stacked(), sigma2);
}

RVec update_weights(const CMat& h, const CMat& w, const CVec& u) {
  RVec f(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const cd hwk = h.row(k) * w.col(k);
    const double denom = 1.0 - std::real(u(k) * std::conj(hwk));
    if (!(denom > 0.0)) throw std::domain_error("update_weights: non-positive denominator, u is inconsistent");
    f(k) = 1.0 / denom;
  }
  return f;
}

RVec update_weights(const ChannelSet& channels, const CVec& g, const Beamformer& w, const CVec& u) {
  return update_weights(effective_channels(channels, g), w.stacked(), u);
}

std::string to_json_lines(const IterTrace& trace) {
  std::ostringstream os;
  for (const auto& r : trace.records) {
    nlohmann::ordered_json j;
    j["iteration"] = r.iteration;
    j["surrogate"] = r.surrogate;
    j["surrogate_analog"] = r.surrogate_analog;
    j["surrogate_digital"] = r.surrogate_digital;
    j["sum_rate"] = r.sum_rate;
    j["transmit_power"] = r.transmit_power;
    j["lambda"] = r.lambda;
    j["analog_objective"] = r.analog_objective;
    j["converged"] = trace.converged && &r == &trace.records.back();
    os << j.dump() << '\n';
  }
  return os.str();
}

CMat mrt_init(const CMat& h, double p_bs) {
  CMat w = h.adjoint();
  int active = 0;
  for (Eigen::Index k = 0; k < w.cols(); ++k) {
    const double n = w.col(k).norm();
    if (n > 0.0) {
      w.col(k) /= n;
      ++active;
    }
  }
  if (active > 0) w *= std::sqrt(p_bs / active);
  return w;
}

namespace {

double weighted_surrogate(const CMat& h, const CMat& w, const AuxWeights& aux, double sigma2) {
  return surrogate(aux, mses(h, w, aux, sigma2));
}

}  // namespace

OptimizeResult optimize(const ChannelSet& channels, const SurfaceMap& map, const RVec& init_phases, double p_bs,
                        double sigma2, int n_bits, const RunOptions& options) {
  channels.validate();
  if (init_phases.size() != map.num_vars()) throw std::invalid_argument("optimize: init phase count");
  if (!(p_bs > 0.0) || !(sigma2 > 0.0)) throw std::invalid_argument("optimize: p_bs and sigma2 must be positive");
  const PhaseCodebook book(n_bits);
  const bool analog = options.optimize_analog && map.num_vars() > 0;

  RVec phases = init_phases;
  CMat h = effective_channels(channels, map, phases);
  CMat w = mrt_init(h, p_bs);

  OptimizeResult out;
  out.w = w;
  out.phases = phases;
  out.sum_rate = sum_rate(h, w, sigma2);

  double previous = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    AuxWeights aux;
    aux.u = update_receivers(h, w, sigma2);
    aux.f = update_weights(h, w, aux.u);
    const double s0 = weighted_surrogate(h, w, aux, sigma2);
    if (it > 1 && std::abs(s0 - previous) <= options.tolerance * std::max(1.0, std::abs(previous))) {
      out.trace.converged = true;
      break;
    }
    previous = s0;

    IterRecord rec;
    rec.iteration = it;
    rec.surrogate = s0;

    if (analog) {
      const PhaseQuadratic quad = build_phase_quadratic(channels, map, w, aux, sigma2);
      const DiscreteResult disc = solve_analog_discrete(quad, book, phases, options.discrete, options.execution);
      phases = disc.phases;
      rec.analog_objective = disc.objective;
      h = effective_channels(channels, map, phases);
    }
    rec.surrogate_analog = weighted_surrogate(h, w, aux, sigma2);

    const DigitalSolution sol = solve_digital(h, aux, p_bs);
    // The subproblem is convex, so the solver only loses to the incumbent by
    // bisection round-off; keep the incumbent in that case.
    if (digital_objective(h, sol.w, aux) <= digital_objective(h, w, aux)) {
      w = sol.w;
      rec.lambda = sol.lambda;
    }
    rec.surrogate_digital = weighted_surrogate(h, w, aux, sigma2);
    rec.sum_rate = sum_rate(h, w, sigma2);
    rec.transmit_power = w.squaredNorm();
    out.trace.records.push_back(rec);
    out.trace.iterations = it;

    if (rec.sum_rate > out.sum_rate || it == 1) {
      out.sum_rate = rec.sum_rate;
      out.w = w;
      out.phases = phases;
    }
  }
  return out;
}

RunResult run(const ScenarioConfig& config, const ChannelSet& channels, const RunOptions& options) {
  const Geometry geometry = build_geometry(config);
  const ElementAmplitudes amps = element_amplitudes(geometry, config.gain_model);
  const SurfaceMap map = dual_pol_map(amps.reflect, amps.refract, channels.users());
  const auto res = optimize(channels, map, RVec::Zero(map.num_vars()), config.p_bs, config.sigma2, config.n_bits,
                            options);
  RunResult out;
  out.w = Beamformer::from_stacked(res.w, channels.reflect_users());
  out.trace = res.trace;
  out.sum_rate = res.sum_rate;
  out.state.n_bits = config.n_bits;
  const int m = channels.m_elems();
  for (int i = 0; i < m; ++i) {
    out.state.psi_vv.push_back(res.phases(i));
    out.state.psi_hh.push_back(res.phases(m + i));
    out.state.amp_vv.push_back(amps.reflect[static_cast<std::size_t>(i)]);
    out.state.amp_hh.push_back(amps.refract[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace iosim
