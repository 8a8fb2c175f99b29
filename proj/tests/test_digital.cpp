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
#include "iosim/optimizer.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace {

using namespace iosim;

struct Instance {
  CMat h;
  AuxWeights aux;
};

// u, f from the MMSE updates at a random beamformer, so the instance is one
// the optimizer would actually see.
Instance random_instance(std::mt19937_64& rng, int users, int ports, double sigma2) {
  Instance in;
  in.h = oracle::random_cmat(users, ports, rng);
  const CMat w = oracle::random_cmat(ports, users, rng, 0.5);
  in.aux.u = update_receivers(in.h, w, sigma2);
  in.aux.f = update_weights(in.h, w, in.aux.u);
  return in;
}

TEST(DigitalSolve, SingleUserIsMrtAtFullPower) {
  std::mt19937_64 rng(1);
  const CMat h = oracle::random_cmat(1, 4, rng);
  AuxWeights aux{CVec::Constant(1, cd(0.01, 0.02)), RVec::Constant(1, 3.0)};
  const auto sol = solve_digital(h, aux, 2.0);
  EXPECT_NEAR(sol.w.squaredNorm(), 2.0, 1e-9);
  const cd overlap = (sol.w.adjoint() * h.adjoint())(0, 0);
  EXPECT_NEAR(std::abs(overlap), sol.w.norm() * h.norm(), 1e-9 * h.norm());
}

TEST(DigitalSolve, PowerFunctionVanishesForLargeLambda) {
  std::mt19937_64 rng(2);
  const auto in = random_instance(rng, 3, 4, 0.1);
  DigitalSolveWorkspace ws(in.h, in.aux);
  const double ub = ws.lambda_upper_bound(1.0);
  EXPECT_LE(ws.power(ub), 1.0);
  EXPECT_LT(ws.power(1e6 * ub), 1e-6);
}

TEST(DigitalSolve, PowerFunctionStrictlyDecreasing) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto in = random_instance(rng, 3, 4, 0.1);
    DigitalSolveWorkspace ws(in.h, in.aux);
    double prev = ws.power(1e-3);
    for (int i = 1; i <= 10; ++i) {
      const double cur = ws.power(1e-3 * std::pow(3.0, i));
      EXPECT_LT(cur, prev);
      prev = cur;
    }
  }
}

TEST(DigitalSolve, WorkspaceInvariants) {
  std::mt19937_64 rng(4);
  const auto in = random_instance(rng, 4, 6, 0.05);
  DigitalSolveWorkspace ws(in.h, in.aux);
  EXPECT_LT((ws.m_matrix - ws.m_matrix.adjoint()).norm(), 1e-12);
  EXPECT_GE(ws.eigenvalues.minCoeff(), 0.0);
  const Eigen::Index n = ws.q.rows();
  EXPECT_LT((ws.q * ws.q.adjoint() - CMat::Identity(n, n)).norm(), 1e-10);
}

TEST(DigitalSolve, MatchesProjectedGradientOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto in = random_instance(rng, 2, 4, 0.2);
    const double p = 1.0;
    const auto sol = solve_digital(in.h, in.aux, p);
    const CMat ref = oracle::projected_gradient(in.h, in.aux.u, in.aux.f, p);
    const double ours = oracle::digital_objective(in.h, sol.w, in.aux.u, in.aux.f);
    const double theirs = oracle::digital_objective(in.h, ref, in.aux.u, in.aux.f);
    EXPECT_NEAR(ours, theirs, 1e-4 * std::abs(theirs));
    EXPECT_NEAR(digital_objective(in.h, sol.w, in.aux), ours, 1e-12 * std::abs(ours));
  }
}

TEST(DigitalSolve, SlacknessAndPowerBudget) {
  std::mt19937_64 rng(6);
  int binding = 0, slack = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = random_instance(rng, 3, 4, trial % 2 ? 0.01 : 10.0);
    const double p = trial % 3 ? 1.0 : 50.0;
    const auto sol = solve_digital(in.h, in.aux, p);
    const double power = sol.w.squaredNorm();
    EXPECT_LE(power, p + 1e-9);
    EXPECT_GE(sol.lambda, 0.0);
    EXPECT_LE(sol.lambda * std::abs(power - p), 1e-6 * p);
    (sol.lambda > 0.0 ? binding : slack)++;
  }
  EXPECT_GT(binding, 0);
  EXPECT_GT(slack, 0);
}

TEST(DigitalSolve, ZeroChannelUserGetsZeroColumn) {
  std::mt19937_64 rng(7);
  auto in = random_instance(rng, 3, 4, 0.1);
  in.h.row(1).setZero();
  in.aux.u(1) = 0.0;
  in.aux.f(1) = 1.0;
  const auto sol = solve_digital(in.h, in.aux, 1.0);
  EXPECT_EQ(sol.w.col(1).norm(), 0.0);
}

TEST(DigitalSolve, RejectsNonFinite) {
  std::mt19937_64 rng(8);
  auto in = random_instance(rng, 2, 4, 0.1);
  in.h(0, 0) = cd(std::numeric_limits<double>::quiet_NaN(), 0.0);
  EXPECT_THROW(solve_digital(in.h, in.aux, 1.0), std::domain_error);
}

TEST(DigitalSolve, BisectionBudgetExhaustion) {
  std::mt19937_64 rng(9);
  const auto in = random_instance(rng, 3, 4, 0.01);
  DigitalOptions opts;
  opts.power_tolerance = 1e-300;
  opts.max_bisections = 5;
  EXPECT_THROW(solve_digital(in.h, in.aux, 1e-3, opts), std::runtime_error);
}

}  // namespace
