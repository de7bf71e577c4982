// Copyright 2026 The paracz Authors
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

#include <cmath>
#include <random>

#include "paracz/benchmarking.hpp"
#include "paracz/gates.hpp"

using namespace paracz;

namespace {

Device bench_device(int levels) {
  Device d;
  d.circuit = CircuitParams::fitted_device();
  d.bias = cancellation_flux(d.circuit);
  d.hilbert = HilbertConfig{levels, Frame::kLab};
  return d;
}

void BM_PumpedPropagation(benchmark::State& state) {
  const Device d = bench_device(static_cast<int>(state.range(0)));
  PumpTone tone;
  tone.omega_p = MHz(780);
  tone.amplitude = 0.01;
  tone.envelope = Envelope::rectangular(10e-9);
  Propagator prop(lab_frame_system(d.circuit, d.schedule({tone}), d.hilbert, d.sim), d.sim.step);
  for (auto _ : state) benchmark::DoNotOptimize(prop.unitary(0.0, 10e-9));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(10e-9 / d.sim.step));
}
BENCHMARK(BM_PumpedPropagation)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CliffordSampleCompose(benchmark::State& state) {
  const CliffordGroup& g = CliffordGroup::instance();
  std::mt19937_64 rng(1);
  int total = 0;
  for (auto _ : state) {
    total = g.compose(total, sample_clifford(rng).index);
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_CliffordSampleCompose);

void BM_CliffordLookup(benchmark::State& state) {
  const CliffordGroup& g = CliffordGroup::instance();
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.find(g.unitary(i)));
    i = (i + 7919) % g.size();
  }
}
BENCHMARK(BM_CliffordLookup);

void BM_RBSequence(benchmark::State& state) {
  const Device d = bench_device(3);
  RBConfig cfg;
  cfg.decoherence = DecoherenceParams::uniform(16.3e-6, 22.7e-6);
  const RBChannels ch = build_rb_channels(d, cfg);
  auto rng = split_rng(1, 0, 0);
  std::vector<int> seq(static_cast<std::size_t>(state.range(0)));
  for (int& c : seq) c = sample_clifford(rng).index;
  for (auto _ : state) benchmark::DoNotOptimize(run_sequence(ch, seq));
}
BENCHMARK(BM_RBSequence)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FitDecay(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<DecayPoint> data;
  for (int n : {1, 3, 6, 10, 15, 20, 30, 45, 60, 80, 100})
    data.push_back({n, 0.7 * std::pow(0.97, n) + 0.25 + noise(rng), 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(fit_decay(data));
}
BENCHMARK(BM_FitDecay)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
