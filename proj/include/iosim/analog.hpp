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

#include "iosim/ios_model.hpp"
#include "iosim/metrics.hpp"
#include "iosim/types.hpp"

#include <cstdint>
#include <vector>

namespace iosim {

/// Surface subproblem in matrix form:
///   min_G  Tr(G^H B G C) + 2 Re{ Tr(G V) }
/// with B from the weighted surface-user outer products, C = H_BI W W^H H_BI^H
/// and V collecting the cross terms with the direct link.
struct AnalogQuadratic {
  CMat b;
  CMat c;
  CMat v;
};

AnalogQuadratic build_analog_quadratic(const ChannelSet& channels, const CMat& w, const AuxWeights& aux);

double analog_objective(const AnalogQuadratic& quad, const CVec& g);

/// The same subproblem over unit-modulus phasors x_l = exp(j psi_l):
///   J(psi) = x^H A x + 2 Re{ c^T x } + constant
/// Amplitudes are folded into A and c.
struct PhaseQuadratic {
  CMat a;
  CVec c;
  double constant = 0.0;

  int size() const { return static_cast<int>(c.size()); }
  double objective(const RVec& phases) const;
};

/// A = diag(amp) (B o C^T) diag(amp), c = amp o diag(V), constant 0.
PhaseQuadratic to_phase_quadratic(const AnalogQuadratic& quad, const RVec& amplitudes);

/// General form for any surface map. The constant is chosen so that
/// objective() equals the weighted MSE sum  sum_k f_k e_k.
PhaseQuadratic build_phase_quadratic(const ChannelSet& channels, const SurfaceMap& map, const CMat& w,
                                     const AuxWeights& aux, double sigma2);

struct ContinuousOptions {
  double tolerance = 1e-8;  // stop when a sweep lowers J by less than this (relative to max(1,|J|))
  int max_sweeps = 200;
};

struct ContinuousResult {
  RVec phases;
  double objective = 0.0;
  int sweeps = 0;
};

/// Cyclic closed-form coordinate descent on the unit-modulus relaxation. Each
/// coordinate step is exact (J is affine in x_l with the others fixed), so J
/// never increases.
ContinuousResult solve_analog_continuous(const PhaseQuadratic& quad, const RVec& init_phases,
                                         const ContinuousOptions& options = {});
ContinuousResult solve_analog_continuous(const AnalogQuadratic& quad, const RVec& amplitudes,
                                         const RVec& init_phases, const ContinuousOptions& options = {});

enum class DiscreteMethod {
  automatic,         // exhaustive when size * bits <= 16, otherwise branch and bound
  exhaustive,
  branch_and_bound,
  naive_rounding,    // diagnostic: quantize the continuous solution only
};

enum class Execution { serial, parallel };

struct DiscreteResult {
  std::vector<int> indices;
  RVec phases;
  double objective = 0.0;
  std::uint64_t nodes = 0;
  DiscreteMethod method_used = DiscreteMethod::exhaustive;
};

/// Global minimizer of J over the codebook. The warm start is kept unless a
/// strictly better assignment exists.
DiscreteResult solve_analog_discrete(const PhaseQuadratic& quad, const PhaseCodebook& book,
                                     const RVec& warm_start, DiscreteMethod method = DiscreteMethod::automatic,
                                     Execution exec = Execution::serial);

/// Dual-polarized convenience form returning a surface state.
DualPolIosState solve_analog_discrete(const AnalogQuadratic& quad, const RVec& amplitudes,
                                      const PhaseCodebook& book, const RVec& warm_start,
                                      DiscreteMethod method = DiscreteMethod::automatic);

DiscreteResult exhaustive_minimum(const PhaseQuadratic& quad, const PhaseCodebook& book, const RVec& warm_start,
                                  Execution exec = Execution::serial);
DiscreteResult branch_and_bound_minimum(const PhaseQuadratic& quad, const PhaseCodebook& book,
                                        const RVec& warm_start);

}  // namespace iosim
