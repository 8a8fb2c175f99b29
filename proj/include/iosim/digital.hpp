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

#include "iosim/metrics.hpp"
#include "iosim/types.hpp"

namespace iosim {

/// Weighted-MSE precoder subproblem for fixed receivers u and weights f:
///
///   min_W  sum_k f_k ( |u_k|^2 ||h_k W||^2 - 2 Re{ u_k^* h_k W^(k) } )
///   s.t.   ||W||_F^2 <= P
///
/// Stationarity gives W^(k)(lambda) = u_k f_k (M + lambda I)^+ h_k^H with
/// M = sum_k f_k |u_k|^2 h_k^H h_k. The workspace keeps the eigenpairs of M so
/// that the transmit power F(lambda) is a cheap diagonal sum.
struct DigitalSolveWorkspace {
  CMat m_matrix;
  CMat q;            // eigenvectors, M = Q diag(eigenvalues) Q^H
  RVec eigenvalues;  // ascending
  RVec projected;    // [sum_k |u_k f_k|^2 Q^H h_k^H h_k Q]_{ii}
  double truncation = 0.0;
  double lambda = 0.0;

  DigitalSolveWorkspace(const CMat& h, const AuxWeights& aux);

  /// F(lambda) = sum_i projected_i / (eigenvalue_i + lambda)^2. At lambda = 0
  /// eigenvalues below the truncation threshold are dropped (pseudo-inverse).
  double power(double lambda) const;
  /// sqrt(sum_i projected_i / P): F(lambda_ub) <= P.
  double lambda_upper_bound(double p_bs) const;
  /// Stacked precoder for a given multiplier.
  CMat precoder(const CMat& h, const AuxWeights& aux, double lambda) const;
};

struct DigitalOptions {
  double power_tolerance = 1e-6;  // relative |F(lambda) - P| / P
  int max_bisections = 200;
};

struct DigitalSolution {
  CMat w;  // stacked, one column per user
  double lambda = 0.0;
  int bisections = 0;
};

/// Users whose effective channel is identically zero get a zero column.
/// Throws std::domain_error on non-finite input and std::runtime_error if the
/// bisection cannot meet the tolerance within the iteration budget.
DigitalSolution solve_digital(const CMat& h, const AuxWeights& aux, double p_bs,
                              const DigitalOptions& options = {});

/// Convenience overload on raw channels and a common coefficient diagonal.
std::pair<Beamformer, double> solve_digital(const ChannelSet& channels, const CVec& g,
                                            const AuxWeights& aux, double p_bs);

/// Value of the weighted-MSE precoder objective above (constant terms
/// excluded).
double digital_objective(const CMat& h, const CMat& w, const AuxWeights& aux);

}  // namespace iosim
