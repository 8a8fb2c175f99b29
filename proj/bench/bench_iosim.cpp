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

// Serial reference vs OpenMP kernels.

#include "iosim/analog.hpp"
#include "iosim/experiments.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace iosim;

PhaseQuadratic random_quadratic(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CMat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = cd(g(rng), g(rng));
  PhaseQuadratic q;
  q.a = r * r.adjoint();
  q.c = CVec(n);
  for (int i = 0; i < n; ++i) q.c(i) = cd(g(rng), g(rng));
  return q;
}

void exhaustive(benchmark::State& state, Execution exec) {
  const int n = static_cast<int>(state.range(0));
  const auto q = random_quadratic(n, 7);
  const PhaseCodebook book(2);
  const RVec warm = RVec::Zero(n);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_minimum(q, book, warm, exec).objective);
}

void BM_ExhaustiveSerial(benchmark::State& s) { exhaustive(s, Execution::serial); }
void BM_ExhaustiveParallel(benchmark::State& s) { exhaustive(s, Execution::parallel); }
BENCHMARK(BM_ExhaustiveSerial)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveParallel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void sweep(benchmark::State& state, Execution exec) {
  SweepSpec spec;
  spec.parameter = SweepParam::xpd_bi;
  spec.values = {0.1, 0.5};
  spec.trials = 4;
  spec.base.n_t = 2;
  spec.base.m_elems = 2;
  spec.execution = exec;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec).size());
}

void BM_SweepSerial(benchmark::State& s) { sweep(s, Execution::serial); }
void BM_SweepParallel(benchmark::State& s) { sweep(s, Execution::parallel); }
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
