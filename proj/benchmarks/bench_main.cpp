// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The isacee Authors.
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

#include <benchmark/benchmark.h>

#include "isacee/metrics.hpp"
#include "isacee/scenario.hpp"
#include "isacee/solvers.hpp"

using namespace isacee;

namespace {

SystemConfig desk(int M, int K) {
  return make_config(merge(preset("desk"), {{"M", std::to_string(M)}, {"K", std::to_string(K)}}));
}

void BM_CrbPoint(benchmark::State& state) {
  const SystemConfig cfg = desk(static_cast<int>(state.range(0)), 1);
  const ChannelSet ch = draw_channels(cfg);
  const CMat Rx = CMat::Identity(cfg.M, cfg.M);
  for (auto _ : state) benchmark::DoNotOptimize(crb_point_cov(Rx, ch.theta, ch.alpha, cfg));
}
BENCHMARK(BM_CrbPoint)->Arg(4)->Arg(8)->Arg(16);

void BM_PowerMinSdr(benchmark::State& state) {
  const SystemConfig cfg = desk(static_cast<int>(state.range(0)), 2);
  const ChannelSet ch = draw_channels(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(baseline_power_min(cfg, ch));
}
BENCHMARK(BM_PowerMinSdr)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_EecPoint(benchmark::State& state) {
  const SystemConfig cfg = desk(8, 2);
  const ChannelSet ch = draw_channels(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(solve_eec_point(cfg, ch));
}
BENCHMARK(BM_EecPoint)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
