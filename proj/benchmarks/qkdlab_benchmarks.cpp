// Copyright 2026 The qkdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qkdlab/attack.hpp"
#include "qkdlab/bounds.hpp"
#include "qkdlab/keyrate.hpp"
#include "qkdlab/linalg.hpp"
#include "qkdlab/protocol.hpp"
#include "qkdlab/source.hpp"

namespace {

using namespace qkdlab;

void BM_ComputeDelta(benchmark::State& state) {
  const SourceSpec src = build_qubit_source({0.2, 0.1, std::numbers::pi / 3});
  for (auto _ : state) benchmark::DoNotOptimize(compute_delta(src));
}
BENCHMARK(BM_ComputeDelta)->Unit(benchmark::kMillisecond);

void BM_Keyrate(benchmark::State& state) {
  const auto theta = characterization_from_delta(0.95);
  const ObservedStats stats(0.03, 0.04);
  for (auto _ : state) benchmark::DoNotOptimize(keyrate_arbitrary(theta, stats).rate);
}
BENCHMARK(BM_Keyrate);

void BM_TraceNorm(benchmark::State& state) {
  const auto n = static_cast<Index>(state.range(0));
  const ComplexMatrix m = ComplexMatrix::Random(n, n);
  const ComplexMatrix h = m + m.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(h));
}
BENCHMARK(BM_TraceNorm)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_Diagnostics(benchmark::State& state) {
  const SourceSpec src = ideal_bb84_source();
  const auto d = static_cast<Index>(state.range(0));
  const AttackIsometry attack = AttackIsometry::random(2, BipartiteLabel(d, d), 11);
  for (auto _ : state) benchmark::DoNotOptimize(diagnostics(src, attack).fE);
}
BENCHMARK(BM_Diagnostics)->Arg(2)->Arg(3)->Arg(4);

void BM_Simulate(benchmark::State& state) {
  const TightnessCase t = build_tightness_attack(std::numbers::pi / 3, std::numbers::pi / 6);
  const DetectorSpec det = matched_detector(t.source, t.attack);
  RunConfig cfg;
  cfg.rounds = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(t.source, t.attack, det, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
