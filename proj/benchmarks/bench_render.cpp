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

#include <filesystem>
#include <random>

#include "tissuelens/render.hpp"
#include "tissuelens/synthetic.hpp"

namespace {

namespace fs = std::filesystem;

struct Data {
  fs::path dir;
  std::shared_ptr<const tissuelens::Dataset> ds;
  Data() {
    dir = fs::temp_directory_path() / ("tissuelens-bench-" + std::to_string(std::random_device{}()));
    tissuelens::SyntheticParams p;
    p.width = 2048;
    p.height = 2048;
    p.n_cells = 2000;
    p.tile_size = 512;
    tissuelens::generate_synthetic(dir, p);
    ds = tissuelens::Dataset::open(dir);
  }
  ~Data() { fs::remove_all(dir); }
};

Data& data() {
  static Data d;
  return d;
}

tissuelens::ChannelSet context_set() {
  tissuelens::ChannelSet set;
  set.settings = {{"ch0", {255, 0, 0}, 0, 4000}, {"ch1", {0, 255, 0}, 0, 4000}, {"ch2", {0, 0, 255}, 0, 4000}};
  return set;
}

void BM_RenderContext(benchmark::State& state) {
  const tissuelens::RegionRect vp{0, 0, 0, 1920, 1080};
  const auto set = context_set();
  for (auto _ : state) benchmark::DoNotOptimize(tissuelens::render_context(*data().ds, vp, set));
}
BENCHMARK(BM_RenderContext)->Unit(benchmark::kMillisecond);

void BM_RenderLens(benchmark::State& state) {
  const tissuelens::RegionRect vp{1, 0, 0, 1024, 1024};
  tissuelens::LensState lens;
  lens.geometry = tissuelens::LensGeometry::circle(1024, 1024, 200);
  lens.magnifier = static_cast<tissuelens::Magnifier>(state.range(0));
  lens.mag_factor = 2.0;
  lens.lens_channel_set.settings = {{"ch1", {255, 255, 255}, 0, 4000}};
  const auto set = context_set();
  for (auto _ : state) benchmark::DoNotOptimize(tissuelens::render_lens(*data().ds, vp, set, lens));
}
BENCHMARK(BM_RenderLens)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace
