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

#include "tissuelens/ball_tree.hpp"

namespace {

std::vector<tissuelens::Point> random_points(std::size_t n) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0, 20000);
  std::vector<tissuelens::Point> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

void BM_BuildTree(benchmark::State& state) {
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tissuelens::BallTree(pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildTree)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_QueryCircle(benchmark::State& state) {
  const auto pts = random_points(1000000);
  const tissuelens::BallTree tree(pts);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0, 20000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tree.query(tissuelens::LensGeometry::circle(u(rng), u(rng), static_cast<double>(state.range(0)))));
  }
}
BENCHMARK(BM_QueryCircle)->Arg(100)->Arg(500)->Arg(2000);

}  // namespace
