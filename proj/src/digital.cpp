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

#include "iosim/digital.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace iosim {

namespace {

// Per-user scale u_k f_k applied to h_k^H.
CVec user_scale(const AuxWeights& aux) { return aux.u.cwiseProduct(aux.f.cast<cd>()); }

}  // namespace

DigitalSolveWorkspace::DigitalSolveWorkspace(const CMat& h, const AuxWeights& aux) {
  if (aux.u.size() != h.rows() || aux.f.size() != h.rows())
    throw std::invalid_argument("digital solve: aux weights do not match user count");
  const RVec weight = aux.f.cwiseProduct(aux.u.cwiseAbs2());
  m_matrix = h.adjoint() * weight.cast<cd>().asDiagonal() * h;
  m_matrix = 0.5 * (m_matrix + m_matrix.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<CMat> eig(m_matrix);
  if (eig.info() != Eigen::Success) throw std::runtime_error("digital solve: eigendecomposition failed");
  q = eig.eigenvectors();
  eigenvalues = eig.eigenvalues().cwiseMax(0.0);
  truncation = 1e-12 * std::max(eigenvalues.maxCoeff(), 0.0);

  const CMat z = q.adjoint() * h.adjoint() * user_scale(aux).asDiagonal();
  projected = z.rowwise().squaredNorm();
}

double DigitalSolveWorkspace::power(double lam) const {
  double total = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double d = eigenvalues(i) + lam;
    if (lam == 0.0 && eigenvalues(i) <= truncation) continue;
    total += projected(i) / (d * d);
  }
  return total;
}

double DigitalSolveWorkspace::lambda_upper_bound(double p_bs) const { return std::sqrt(projected.sum() / p_bs); }

CMat DigitalSolveWorkspace::precoder(const CMat& h, const AuxWeights& aux, double lam) const {
  RVec inv(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const bool dropped = lam == 0.0 && eigenvalues(i) <= truncation;
    inv(i) = dropped ? 0.0 : 1.0 / (eigenvalues(i) + lam);
  }
  return q * inv.cast<cd>().asDiagonal() * (q.adjoint() * h.adjoint() * user_scale(aux).asDiagonal());
}

DigitalSolution solve_digital(const CMat& h, const AuxWeights& aux, double p_bs, const DigitalOptions& options) {
  if (!(p_bs > 0.0)) throw std::invalid_argument("digital solve: power budget must be positive");
  if (!h.allFinite() || !aux.u.allFinite() || !aux.f.allFinite())
    throw std::domain_error("digital solve: non-finite channel or auxiliary weights");
  for (Eigen::Index k = 0; k < aux.f.size(); ++k)
    if (!(aux.f(k) > 0.0)) throw std::domain_error("digital solve: weights must be positive");

  AuxWeights active = aux;
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    if (h.row(k).squaredNorm() == 0.0) active.u(k) = 0.0;

  DigitalSolveWorkspace ws(h, active);
  DigitalSolution out;
  if (ws.power(0.0) <= p_bs) {
    out.w = ws.precoder(h, active, 0.0);
    return out;
  }

  double lo = 0.0;
  double hi = ws.lambda_upper_bound(p_bs);
  while (ws.power(hi) > p_bs) hi *= 2.0;  // guards round-off at the analytic bound
  double f_hi = ws.power(hi);
  int steps = 0;
  while (std::abs(f_hi - p_bs) > options.power_tolerance * p_bs) {
    if (++steps > options.max_bisections)
      throw std::runtime_error("digital solve: bisection did not reach the power tolerance");
    const double mid = 0.5 * (lo + hi);
    const double f_mid = ws.power(mid);
    if (f_mid > p_bs) {
      lo = mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  out.lambda = hi;
  out.bisections = steps;
  out.w = ws.precoder(h, active, hi);
  // F(hi) <= P within tolerance; pin the power to the budget so the
  // slackness residual is at round-off level.
  const double actual = out.w.squaredNorm();
  if (actual > 0.0) out.w *= std::sqrt(p_bs / actual);
  return out;
}

std::pair<Beamformer, double> solve_digital(const ChannelSet& channels, const CVec& g, const AuxWeights& aux,
                                            double p_bs) {
  const CMat h = effective_channels(channels, g);
  const auto sol = solve_digital(h, aux, p_bs);
  return {Beamformer::from_stacked(sol.w, channels.reflect_users()), sol.lambda};
}

double digital_objective(const CMat& h, const CMat& w, const AuxWeights& aux) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const CRow hw = h.row(k) * w;
    total += aux.f(k) * (std::norm(aux.u(k)) * hw.squaredNorm() - 2.0 * std::real(std::conj(aux.u(k)) * hw(k)));
  }
  return total;
}

}  // namespace iosim
