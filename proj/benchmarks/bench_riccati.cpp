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

#include "risklq/estimation.hpp"
#include "risklq/evaluation.hpp"
#include "risklq/fixtures.hpp"
#include "risklq/riccati.hpp"

namespace {

using namespace risklq;

void BM_SolveFinite(benchmark::State& state) {
  const ValidatedModel m = validate(fixtures::example1());
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_finite(m, 10.0, N));
  state.SetComplexityN(N);
}
BENCHMARK(BM_SolveFinite)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_SolveStationary(benchmark::State& state) {
  const ValidatedModel m = validate(fixtures::example1());
  for (auto _ : state) benchmark::DoNotOptimize(solve_stationary(m, 10.0));
}
BENCHMARK(BM_SolveStationary);

void BM_RiskValue(benchmark::State& state) {
  const ValidatedModel m = validate(fixtures::example1());
  const RiccatiSolution sol = solve_finite(m, 10.0, 50);
  const CovarianceSchedule cs = covariance_schedule(m, 50);
  for (auto _ : state) benchmark::DoNotOptimize(risk_value(m, sol, cs));
}
BENCHMARK(BM_RiskValue);

}  // namespace
