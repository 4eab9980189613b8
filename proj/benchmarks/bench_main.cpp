// Copyright 2026 The bdre Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "bdre/exact.hpp"
#include "bdre/rng.hpp"
#include "bdre/simulate.hpp"

namespace {

void BM_DensityPoint(benchmark::State& state) {
  const double beta = static_cast<double>(state.range(0)) / 4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdre::density_inv_two_A(1.0, beta, 0.7));
  }
}
BENCHMARK(BM_DensityPoint)->Arg(0)->Arg(2)->Arg(6);

void BM_PhiloxNormals(benchmark::State& state) {
  bdre::RandomStream rng(bdre::StreamId{1, 0, bdre::StreamTag::kAuxiliary, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.normal());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxNormals);

void BM_EulerPaths(benchmark::State& state) {
  const bdre::ModelParams params{-0.5, 1.0, 1.0, 0.0};
  bdre::SimulationConfig config;
  config.horizon = 1.0;
  config.dt = 1e-3;
  config.n = static_cast<std::size_t>(state.range(0));
  config.seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdre::simulate_bdre(params, 1.0, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_EulerPaths)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
