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

#ifndef BLSUB_GRID_HPP_
#define BLSUB_GRID_HPP_

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "blsub/errors.hpp"

namespace blsub::grid {

// One uniform cell-centered axis: cells i = 0..count-1 centered at
// lo + (i + 1/2) * spacing.
struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  double spacing() const { return (hi - lo) / count; }
  double center(int i) const { return lo + (i + 0.5) * spacing(); }
};

// A scalar function sampled at cell centers of a box in R^d, d <= 3,
// row-major (last axis fastest).
struct Grid {
  int dim = 0;
  std::array<Axis, 3> axes{};
  std::vector<double> values;

  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(axes[d].count);
    return s;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= axes[d].spacing();
    return v;
  }
  std::size_t index(int i, int j = 0, int k = 0) const {
    std::size_t idx = static_cast<std::size_t>(i);
    if (dim > 1) idx = idx * axes[1].count + j;
    if (dim > 2) idx = idx * axes[2].count + k;
    return idx;
  }
  double& at(int i, int j = 0, int k = 0) { return values[index(i, j, k)]; }
  double at(int i, int j = 0, int k = 0) const { return values[index(i, j, k)]; }

  // Riemann-sum integral of the sampled values.
  double mass() const;
  // Total mass carried by cells touching the box boundary.
  double boundary_mass() const;

  // Structural validity: dim in 1..3, positive counts, lo < hi, finite values
  // of the right cardinality. Throws InputError otherwise.
  void check_structure(const char* op) const;
};

Grid make_grid(int dim, const std::array<Axis, 3>& axes);

bool same_geometry(const Grid& a, const Grid& b, double tol = 1e-12);

// Textual format: header "grid dim=<d> axes=<lo:hi:count,...>" followed by
// whitespace-separated values in row-major order. Lines starting with '#'
// are comments.
Grid read_grid(std::istream& in);
Grid read_grid_file(const std::string& path);
void write_grid(std::ostream& out, const Grid& g);
void write_grid_file(const std::string& path, const Grid& g);

// Linear interpolation of a 1-dim grid between cell centers; zero outside
// the sampled range.
double interp1(const Grid& g, double x);

// As interp1, but refuses out-of-range points (for potentials, where "decays
// to zero" is the wrong extension).
double interp1_strict(const Grid& g, double x, const char* op);

}  // namespace blsub::grid

#endif  // BLSUB_GRID_HPP_
