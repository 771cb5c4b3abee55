/*
 Copyright 2026 The risklq Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include <benchmark/benchmark.h>

#include "risklq/fixtures.hpp"
#include "risklq/riccati.hpp"
#include "risklq/simulate.hpp"

namespace {

using namespace risklq;

void BM_Trajectory(benchmark::State& state) {
  const ValidatedModel m = validate(fixtures::example1());
  const ClosedLoop loop(m, PolicySchedule::from_solution(solve_finite(m, 10.0, 50)),
                        model_noise(m));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(loop.simulate(seed++));
}
BENCHMARK(BM_Trajectory);

void BM_Ensemble(benchmark::State& state) {
  const ValidatedModel m = validate(fixtures::example2());
  const ClosedLoop loop(m, PolicySchedule::from_solution(solve_finite(m, 6.25, 5)),
                        model_noise(m));
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ensemble(loop, EnsembleOptions{samples, 1, 0}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ensemble)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
