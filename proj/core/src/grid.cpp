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

#include "blsub/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace blsub::grid {

double Grid::mass() const {
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc * cell_volume();
}

double Grid::boundary_mass() const {
  double acc = 0.0;
  const int n0 = axes[0].count;
  const int n1 = dim > 1 ? axes[1].count : 1;
  const int n2 = dim > 2 ? axes[2].count : 1;
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      for (int k = 0; k < n2; ++k) {
        const bool edge = i == 0 || i == n0 - 1 ||
                          (dim > 1 && (j == 0 || j == n1 - 1)) ||
                          (dim > 2 && (k == 0 || k == n2 - 1));
        if (edge) acc += values[index(i, j, k)];
      }
    }
  }
  return acc * cell_volume();
}

void Grid::check_structure(const char* op) const {
  if (dim < 1 || dim > 3) {
    throw InputError(std::string(op) + ": grid dimension must be 1, 2 or 3");
  }
  for (int d = 0; d < dim; ++d) {
    if (axes[d].count < 2) {
      throw InputError(std::string(op) + ": axis " + std::to_string(d + 1) +
                       " needs at least 2 cells");
    }
    if (!(axes[d].lo < axes[d].hi) || !std::isfinite(axes[d].lo) ||
        !std::isfinite(axes[d].hi)) {
      throw InputError(std::string(op) + ": axis " + std::to_string(d + 1) +
                       " has an invalid range");
    }
  }
  if (values.size() != size()) {
    throw InputError(std::string(op) + ": value count " + std::to_string(values.size()) +
                     " does not match the grid size " + std::to_string(size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InputError(std::string(op) + ": non-finite grid value");
    }
  }
}

Grid make_grid(int dim, const std::array<Axis, 3>& axes) {
  Grid g;
  g.dim = dim;
  g.axes = axes;
  g.values.assign(g.size(), 0.0);
  g.check_structure("make_grid");
  return g;
}

bool same_geometry(const Grid& a, const Grid& b, double tol) {
  if (a.dim != b.dim) return false;
  for (int d = 0; d < a.dim; ++d) {
    if (a.axes[d].count != b.axes[d].count) return false;
    if (std::abs(a.axes[d].lo - b.axes[d].lo) > tol) return false;
    if (std::abs(a.axes[d].hi - b.axes[d].hi) > tol) return false;
  }
  return true;
}

namespace {

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    std::size_t p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos) continue;
    if (line[p] == '#') continue;
    return line.substr(p);
  }
  throw InputError("read_grid: unexpected end of input before the header");
}

}  // namespace

Grid read_grid(std::istream& in) {
  const std::string header = next_content_line(in);
  int dim = 0;
  char axes_buf[256];
  if (std::sscanf(header.c_str(), "grid dim=%d axes=%255s", &dim, axes_buf) != 2) {
    throw InputError("read_grid: malformed header '" + header + "'");
  }
  Grid g;
  g.dim = dim;
  if (dim < 1 || dim > 3) {
    throw InputError("read_grid: dim must be 1, 2 or 3");
  }
  std::stringstream axes_ss(axes_buf);
  std::string tok;
  int d = 0;
  while (std::getline(axes_ss, tok, ',')) {
    if (d >= dim) {
      throw InputError("read_grid: more axes than dim in header");
    }
    Axis ax;
    if (std::sscanf(tok.c_str(), "%lf:%lf:%d", &ax.lo, &ax.hi, &ax.count) != 3) {
      throw InputError("read_grid: malformed axis spec '" + tok + "'");
    }
    g.axes[d++] = ax;
  }
  if (d != dim) {
    throw InputError("read_grid: axis count does not match dim");
  }

  g.values.reserve(g.size());
  std::string line;
  while (std::getline(in, line)) {
    std::size_t p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    std::stringstream ls(line);
    double v;
    while (ls >> v) g.values.push_back(v);
  }
  g.check_structure("read_grid");
  return g;
}

Grid read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("read_grid: cannot open '" + path + "'");
  }
  return read_grid(in);
}

void write_grid(std::ostream& out, const Grid& g) {
  g.check_structure("write_grid");
  char buf[128];
  out << "grid dim=" << g.dim << " axes=";
  for (int d = 0; d < g.dim; ++d) {
    std::snprintf(buf, sizeof(buf), "%.17g:%.17g:%d", g.axes[d].lo, g.axes[d].hi,
                  g.axes[d].count);
    out << (d ? "," : "") << buf;
  }
  out << "\n";
  // 8 values per line keeps the files diff-able.
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", g.values[i]);
    out << buf << (((i + 1) % 8 == 0 || i + 1 == g.values.size()) ? "\n" : " ");
  }
}

void write_grid_file(const std::string& path, const Grid& g) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("write_grid: cannot open '" + path + "' for writing");
  }
  write_grid(out, g);
}

double interp1(const Grid& g, double x) {
  const Axis& ax = g.axes[0];
  const double h = ax.spacing();
  const double u = (x - ax.center(0)) / h;
  if (u <= -1.0 || u >= ax.count) return 0.0;
  if (u < 0.0) return g.values[0] * (1.0 + u);  // taper to zero half a cell out
  const int i = static_cast<int>(u);
  if (i >= ax.count - 1) {
    const double frac = u - (ax.count - 1);
    return g.values[ax.count - 1] * (1.0 - frac);
  }
  const double frac = u - i;
  return g.values[i] * (1.0 - frac) + g.values[i + 1] * frac;
}

double interp1_strict(const Grid& g, double x, const char* op) {
  const Axis& ax = g.axes[0];
  if (x < ax.center(0) - 1e-12 || x > ax.center(ax.count - 1) + 1e-12) {
    throw InputError(std::string(op) + ": point " + std::to_string(x) +
                     " projects outside the sampled range [" +
                     std::to_string(ax.center(0)) + ", " +
                     std::to_string(ax.center(ax.count - 1)) + "]");
  }
  const double h = ax.spacing();
  const double u = std::clamp((x - ax.center(0)) / h, 0.0, ax.count - 1.0);
  const int i = std::min(static_cast<int>(u), ax.count - 2);
  const double frac = u - i;
  return g.values[i] * (1.0 - frac) + g.values[i + 1] * frac;
}

}  // namespace blsub::grid
