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

// Pins the oracles themselves to hand-derived and frozen values, so a broken
// oracle cannot silently agree with a broken implementation.

#include "oracles.hpp"

#include <gtest/gtest.h>

namespace {

using namespace oracle;

TEST(Oracle, ScalarChainEffectiveChannel) {
  CRow h_bu = CRow::Zero(1), h_iu(1);
  h_iu << cd(2.0, 0.0);
  CVec g(1);
  g << cd(0.0, 1.0);
  CMat h_bi(1, 1);
  h_bi << cd(3.0, 0.0);
  EXPECT_NEAR(std::abs(effective_channel(h_bu, h_iu, g, h_bi)(0) - cd(0.0, 6.0)), 0.0, 1e-15);
}

TEST(Oracle, MseAtMmseReceiver) {
  // One user, h = 1, W = 1, sigma2 = 1: gamma = 1, u = 1/2, mse = 1/2.
  CMat h(1, 1), w(1, 1);
  h << 1.0;
  w << 1.0;
  EXPECT_NEAR(mse(h, w, 0.5, 1.0, 0), 0.5, 1e-15);
  EXPECT_NEAR(sum_rate(h, w, 1.0), 1.0, 1e-15);
}

TEST(Oracle, GridReceiverFindsKnownMinimum) {
  CMat h(1, 1), w(1, 1);
  h << 1.0;
  w << 1.0;
  const cd u = grid_receiver(h, w, 1.0, 0, 0.0, 1.0, 201);
  EXPECT_NEAR(u.real(), 0.5, 1e-12);
  EXPECT_NEAR(u.imag(), 0.0, 1e-12);
}

TEST(Oracle, ProjectedGradientSingleUserIsMrt) {
  // Small receiver gain makes the unconstrained optimum exceed the budget, so
  // the constraint binds and the optimum is sqrt(P) h^H / ||h||.
  std::mt19937_64 rng(3);
  const CMat h = random_cmat(1, 4, rng);
  CVec u(1);
  u << cd(0.01, 0.0);
  Eigen::VectorXd f(1);
  f << 2.0;
  const CMat w = projected_gradient(h, u, f, 1.0);
  const CMat mrt = h.adjoint() / h.norm();
  EXPECT_NEAR((w - mrt).norm(), 0.0, 1e-8);
}

TEST(Oracle, BruteForceFrozenValue) {
  // A = I (2x2), c = (1, 1): minimum over {0, pi} per entry is x = (-1, -1),
  // J = 2 + 2(-1 - 1) = -2.
  const CMat a = CMat::Identity(2, 2);
  CVec c(2);
  c << 1.0, 1.0;
  EXPECT_NEAR(brute_force_minimum(a, c, 0.0, 1), -2.0, 1e-15);
  EXPECT_NEAR(grid_minimum_2d(a, c, 1e-2), -2.0, 1e-3);
}

TEST(Oracle, CentralDifferenceOfSquare) {
  EXPECT_NEAR(central_difference([](double x) { return x * x; }, 3.0, 1e-4), 6.0, 1e-9);
}

TEST(Oracle, ReferenceWmmseSingleUserReachesMrtRate) {
  std::mt19937_64 rng(5);
  const CMat h = random_cmat(1, 4, rng);
  const CMat w = reference_wmmse(h, 2.0, 0.1, 200, 1e-12);
  EXPECT_NEAR(sum_rate(h, w, 0.1), std::log2(1.0 + 2.0 * h.squaredNorm() / 0.1), 1e-9);
}

}  // namespace
