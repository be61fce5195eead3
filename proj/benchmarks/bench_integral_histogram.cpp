// Copyright 2026 The tissuelens Authors. All Rights Reserved.
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

#include <random>

#include "tissuelens/integral_histogram.hpp"

namespace {

tissuelens::QuantizedPlane random_plane(int size, int bins) {
  std::mt19937 rng(1);
  tissuelens::QuantizedPlane q;
  q.bins = tissuelens::Plane<std::uint8_t>(size, size);
  q.bin_count = bins;
  for (auto& v : q.bins.data) v = static_cast<std::uint8_t>(rng() % static_cast<unsigned>(bins));
  return q;
}

void BM_BuildIntegral(benchmark::State& state) {
  const auto q = random_plane(static_cast<int>(state.range(0)), 32);
  for (auto _ : state) benchmark::DoNotOptimize(tissuelens::build_integral(q));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_BuildIntegral)->Arg(256)->Arg(512)->Arg(1024);

void BM_WindowCounts(benchmark::State& state) {
  const auto q = random_plane(512, 32);
  const auto ih = tissuelens::build_integral(q);
  std::vector<std::uint32_t> out(32);
  int x = 0;
  for (auto _ : state) {
    ih.window_counts(x, 100, x + 129, 229, out.data());
    benchmark::DoNotOptimize(out.data());
    x = (x + 1) % 300;
  }
}
BENCHMARK(BM_WindowCounts);

}  // namespace
