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

#include "tissuelens/similarity.hpp"

namespace {

void BM_SimilarityMap(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  std::mt19937 rng(2);
  std::vector<tissuelens::QuantizedPlane> planes(static_cast<std::size_t>(state.range(1)));
  for (auto& q : planes) {
    q.bins = tissuelens::Plane<std::uint8_t>(size, size);
    q.bin_count = 32;
    for (auto& v : q.bins.data) v = static_cast<std::uint8_t>(rng() % 32);
  }
  const auto lens = tissuelens::LensGeometry::circle(size / 2.0, size / 2.0, 32);
  for (auto _ : state) benchmark::DoNotOptimize(tissuelens::similarity_map(planes, lens));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_SimilarityMap)->Args({512, 1})->Args({512, 2})->Args({1024, 1})->Unit(benchmark::kMillisecond);

void BM_ChiSquare(benchmark::State& state) {
  std::mt19937 rng(3);
  std::vector<double> a(32), b(32);
  for (auto& v : a) v = rng() % 100 / 100.0;
  for (auto& v : b) v = rng() % 100 / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(tissuelens::chi_square(a, b));
}
BENCHMARK(BM_ChiSquare);

}  // namespace
