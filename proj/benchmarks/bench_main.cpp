// Copyright 2026 The Authors.
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
#include <numbers>
#include <random>

#include "blsub/entropy.hpp"
#include "blsub/family.hpp"
#include "blsub/gaussopt.hpp"
#include "blsub/spectral.hpp"

namespace {

using namespace blsub;

Mat mercedes() {
  Mat u(2, 3);
  for (int j = 0; j < 3; ++j) {
    const double th = std::numbers::pi / 2 + 2.0 * std::numbers::pi * j / 3.0;
    u(0, j) = std::cos(th);
    u(1, j) = std::sin(th);
  }
  return u;
}

Mat random_columns(int n, int m, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat cols(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) cols(i, j) = g(rng);
  }
  return cols;
}

void BM_ConstantTightFrame(benchmark::State& state) {
  const family::SpanningFamily fam(mercedes());
  const family::WeightVector w(Vec::Constant(3, 2.0 / 3.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussopt::constant(fam, w).D);
  }
}
BENCHMARK(BM_ConstantTightFrame);

void BM_ConstantInterior(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const family::SpanningFamily fam(random_columns(3, m, 7));
  const auto w = gaussopt::minimizing_c(fam);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussopt::constant(fam, w).D);
  }
}
BENCHMARK(BM_ConstantInterior)->Arg(4)->Arg(8)->Arg(16);

void BM_FeasibilitySweep(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const family::SpanningFamily fam(random_columns(3, m, 11));
  const family::WeightVector w(Vec::Constant(m, 3.0 / m));
  for (auto _ : state) {
    benchmark::DoNotOptimize(family::feasibility(fam, w).in_KA);
  }
}
BENCHMARK(BM_FeasibilitySweep)->Arg(8)->Arg(12)->Arg(16);

void BM_Entropy2d(benchmark::State& state) {
  const std::array<grid::Axis, 3> axes{grid::Axis{-12, 12, 256}, grid::Axis{-12, 12, 256},
                                       grid::Axis{}};
  const auto f = entropy::gaussian_density(Mat::Identity(2, 2), Vec::Zero(2), axes, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy::entropy(f));
  }
}
BENCHMARK(BM_Entropy2d);

void BM_Marginal2d(benchmark::State& state) {
  const std::array<grid::Axis, 3> axes{grid::Axis{-12, 12, 256}, grid::Axis{-12, 12, 256},
                                       grid::Axis{}};
  const auto f = entropy::gaussian_density(Mat::Identity(2, 2), Vec::Zero(2), axes, 2);
  const Vec a = (Vec(2) << 0.8, 0.6).finished();
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy::marginal(f, a).density.g().mass());
  }
}
BENCHMARK(BM_Marginal2d);

void BM_HeatStep2d(benchmark::State& state) {
  const std::array<grid::Axis, 3> axes{grid::Axis{-12, 12, 256}, grid::Axis{-12, 12, 256},
                                       grid::Axis{}};
  const auto f = entropy::gaussian_density(Mat::Identity(2, 2), Vec::Zero(2), axes, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy::heat_step(f, 0.1).g().mass());
  }
}
BENCHMARK(BM_HeatStep2d);

void BM_Lambda1d(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  grid::Grid g = grid::make_grid(1, {grid::Axis{-10, 10, count}, grid::Axis{}, grid::Axis{}});
  for (int i = 0; i < count; ++i) {
    const double x = g.axes[0].center(i);
    g.values[static_cast<std::size_t>(i)] = -x * x;
  }
  const spectral::Potential v{std::move(g)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral::lambda_1d(v).lambda);
  }
}
BENCHMARK(BM_Lambda1d)->Arg(1000)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
