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

// Regenerates the bundled corpus data files (densities, factors, potentials).
// Everything is closed-form sampled, so the output is bit-stable.

#include <filesystem>
#include <iostream>

#include "blsub/entropy.hpp"
#include "blsub/grid.hpp"

namespace {

using blsub::Mat;
using blsub::Vec;
using blsub::grid::Axis;

void write_density_2d(const std::string& path, const Mat& cov) {
  const std::array<Axis, 3> axes{Axis{-10, 10, 192}, Axis{-10, 10, 192}, Axis{}};
  const auto f = blsub::entropy::gaussian_density(cov, Vec::Zero(2), axes, 2);
  blsub::grid::write_grid_file(path, f.g());
  std::cout << "wrote " << path << "\n";
}

void write_density_1d(const std::string& path, double variance) {
  const std::array<Axis, 3> axes{Axis{-12, 12, 2048}, Axis{}, Axis{}};
  Mat cov(1, 1);
  cov << variance;
  const auto f = blsub::entropy::gaussian_density(cov, Vec::Zero(1), axes, 1);
  blsub::grid::write_grid_file(path, f.g());
  std::cout << "wrote " << path << "\n";
}

void write_potential(const std::string& path, double quad, double lin) {
  blsub::grid::Grid g = blsub::grid::make_grid(1, {Axis{-12, 12, 2048}, Axis{}, Axis{}});
  for (int i = 0; i < g.axes[0].count; ++i) {
    const double t = g.axes[0].center(i);
    g.values[static_cast<std::size_t>(i)] = quad * t * t + lin * t;
  }
  blsub::grid::write_grid_file(path, g);
  std::cout << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "corpus/data";
  std::filesystem::create_directories(dir);

  write_density_2d(dir + "/iso2d.grid", Mat::Identity(2, 2));
  {
    Mat corr(2, 2);
    corr << 1.0, 0.5, 0.5, 1.0;
    write_density_2d(dir + "/corr2d.grid", corr);
  }
  {
    Mat prod(2, 2);
    prod << 1.0, 0.0, 0.0, 1.69;
    write_density_2d(dir + "/prod2d.grid", prod);
  }
  write_density_1d(dir + "/gauss1d_var1.grid", 1.0);
  write_density_1d(dir + "/gauss1d_var169.grid", 1.69);
  write_potential(dir + "/negsq.grid", -1.0, 0.0);
  write_potential(dir + "/wellA.grid", -0.8, 0.0);
  return 0;
}
