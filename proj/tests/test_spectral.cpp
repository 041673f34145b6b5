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

#include <doctest.h>

#include <cmath>
#include <random>

#include "blsub/spectral.hpp"
#include "helpers.hpp"

using namespace blsub;
using spectral::Potential;
using spectral::SpectralOptions;
using blsub::testing::mercedes_columns;

namespace {

Potential sample_potential_1d(double half, int count, double (*fn)(double)) {
  grid::Grid g = grid::make_grid(1, {grid::Axis{-half, half, count}, grid::Axis{}, grid::Axis{}});
  for (int i = 0; i < count; ++i) {
    g.values[static_cast<std::size_t>(i)] = fn(g.axes[0].center(i));
  }
  return Potential{std::move(g)};
}

Potential zero_potential_1d(double half, int count) {
  return Potential{grid::make_grid(1, {grid::Axis{-half, half, count}, grid::Axis{}, grid::Axis{}})};
}

double neg_sq(double t) { return -t * t; }

// Discrete quadratic form matching the Dirichlet operator: sum V psi^2 h -
// 4 h sum ((psi_{i+1}-psi_i)/h)^2 with zero ghosts.
double discrete_rayleigh_1d(const Potential& v, const std::vector<double>& psi) {
  const int n = v.g.axes[0].count;
  const double h = v.g.axes[0].spacing();
  double pot = 0.0, kin = 0.0;
  for (int i = 0; i < n; ++i) pot += v.g.values[static_cast<std::size_t>(i)] * psi[i] * psi[i];
  for (int i = 0; i <= n; ++i) {
    const double lo = i > 0 ? psi[i - 1] : 0.0;
    const double hi = i < n ? psi[i] : 0.0;
    const double d = (hi - lo) / h;
    kin += d * d;
  }
  return pot * h - 4.0 * kin * h;
}

}  // namespace

TEST_CASE("lambda_1d on the harmonic well") {
  const auto v = sample_potential_1d(10, 4000, neg_sq);
  const auto gs = spectral::lambda_1d(v);
  CHECK(std::abs(gs.lambda + 2.0) < 1e-3);
  CHECK(gs.confined);

  // L2 normalization and the discrete Rayleigh identity.
  double mass = 0.0;
  for (double x : gs.eigenfunction.values) mass += x * x;
  mass *= gs.eigenfunction.axes[0].spacing();
  CHECK(std::abs(mass - 1.0) < 1e-8);
  std::vector<double> psi(gs.eigenfunction.values.begin(), gs.eigenfunction.values.end());
  CHECK(std::abs(discrete_rayleigh_1d(v, psi) - gs.lambda) < 1e-6);

  // Nonnegative ground state.
  double min_v = 0.0;
  for (double x : gs.eigenfunction.values) min_v = std::min(min_v, x);
  CHECK(min_v > -1e-8);
}

TEST_CASE("lambda_1d free Laplacian carries the Dirichlet caveat") {
  SpectralOptions opts;
  opts.strict_boundary = false;
  const double half = 6.0;
  const auto gs = spectral::lambda_1d(zero_potential_1d(half, 1200), opts);
  // Ground energy of -4 d^2/dx^2 with walls at +-L: 4 (pi / (2L))^2.
  const double expect = -4.0 * std::pow(M_PI / (2.0 * half), 2);
  CHECK(std::abs(gs.lambda - expect) < 1e-3);
  CHECK_FALSE(gs.confined);  // the sine mode fills the box

  // Strict mode refuses the same instance.
  CHECK_THROWS_AS(spectral::lambda_1d(zero_potential_1d(half, 1200)), AccuracyError);
}

TEST_CASE("lambda_1d shift covariance is exact") {
  const auto v = sample_potential_1d(10, 2000, neg_sq);
  Potential shifted = v;
  for (double& x : shifted.g.values) x += 2.75;
  const double l0 = spectral::lambda_1d(v).lambda;
  const double l1 = spectral::lambda_1d(shifted).lambda;
  CHECK(std::abs(l1 - (l0 + 2.75)) < 1e-12 * std::max(1.0, std::abs(l0)));
}

TEST_CASE("lambda_1d boundary failure advises a larger box") {
  const auto v = sample_potential_1d(2, 400, neg_sq);
  CHECK_THROWS_WITH_AS(spectral::lambda_1d(v), doctest::Contains("box"), AccuracyError);
}

TEST_CASE("lambda_1d monotone in the potential") {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> unif(0.0, 0.5);
  for (int rep = 0; rep < 5; ++rep) {
    auto v = sample_potential_1d(10, 1500, neg_sq);
    auto w = v;
    for (double& x : w.g.values) x += unif(rng);
    CHECK(spectral::lambda_1d(v).lambda <= spectral::lambda_1d(w).lambda + 1e-10);
  }
}

TEST_CASE("lambda_1d dominates every discrete trial function") {
  const auto v = sample_potential_1d(10, 1500, neg_sq);
  const double lam = spectral::lambda_1d(v).lambda;
  std::mt19937_64 rng(89);
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = v.g.axes[0].count;
  const double h = v.g.axes[0].spacing();
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> psi(n);
    // Smooth random bump: random center/width Gaussian plus noise envelope.
    const double c0 = g(rng), s0 = 1.0 + std::abs(g(rng));
    for (int i = 0; i < n; ++i) {
      const double x = v.g.axes[0].center(i);
      psi[i] = std::exp(-0.5 * std::pow((x - c0) / s0, 2)) * (1.0 + 0.1 * g(rng));
    }
    double norm = 0.0;
    for (double x : psi) norm += x * x;
    norm = std::sqrt(norm * h);
    for (double& x : psi) x /= norm;
    CHECK(discrete_rayleigh_1d(v, psi) <= lam + 1e-6);
  }
}

TEST_CASE("lambda_2d separable potentials add exactly on matched grids") {
  const int count = 128;
  const double half = 8.0;
  const auto v1 = sample_potential_1d(half, count, neg_sq);
  Potential v2 = v1;
  for (double& x : v2.g.values) x *= 0.8;

  grid::Grid g2 = grid::make_grid(
      2, {grid::Axis{-half, half, count}, grid::Axis{-half, half, count}, grid::Axis{}});
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      g2.at(i, j) = v1.g.values[static_cast<std::size_t>(i)] + v2.g.values[static_cast<std::size_t>(j)];
    }
  }
  const auto gs = spectral::lambda_2d(Potential{std::move(g2)});
  const double expect = spectral::lambda_1d(v1).lambda + spectral::lambda_1d(v2).lambda;
  CHECK(std::abs(gs.lambda - expect) < 1e-5);
  CHECK(gs.residual <= 1e-6);
}

TEST_CASE("lambda_2d isotropic harmonic well") {
  const int count = 256;
  const double half = 8.0;
  grid::Grid g2 = grid::make_grid(
      2, {grid::Axis{-half, half, count}, grid::Axis{-half, half, count}, grid::Axis{}});
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      const double x = g2.axes[0].center(i), y = g2.axes[1].center(j);
      g2.at(i, j) = -(x * x + y * y);
    }
  }
  const auto gs = spectral::lambda_2d(Potential{std::move(g2)});
  CHECK(std::abs(gs.lambda + 4.0) < 2e-3);
}

TEST_CASE("lambda_2d free Laplacian matches the 1-dim Dirichlet sum") {
  SpectralOptions opts;
  opts.strict_boundary = false;
  const double half = 5.0;
  const int count = 64;
  grid::Grid g2 = grid::make_grid(
      2, {grid::Axis{-half, half, count}, grid::Axis{-half, half, count}, grid::Axis{}});
  const double l2 = spectral::lambda_2d(Potential{std::move(g2)}, opts).lambda;
  const double l1 = spectral::lambda_1d(zero_potential_1d(half, count), opts).lambda;
  CHECK(std::abs(l2 - 2.0 * l1) < 1e-6);
  CHECK(l2 < 0.0);
}

TEST_CASE("lambda_2d refuses grids beyond the envelope") {
  grid::Grid g = grid::make_grid(
      2, {grid::Axis{-8, 8, 300}, grid::Axis{-8, 8, 300}, grid::Axis{}});
  CHECK_THROWS_AS(spectral::lambda_2d(Potential{std::move(g)}), CapacityError);
}

TEST_CASE("combine_potential interpolates ridge sums") {
  const Mat u = mercedes_columns();
  std::vector<Potential> parts;
  for (int j = 0; j < 3; ++j) parts.push_back(sample_potential_1d(12, 2048, neg_sq));
  const std::array<grid::Axis, 2> axes{grid::Axis{-6, 6, 64}, grid::Axis{-6, 6, 64}};
  const auto v = spectral::combine_potential(u, parts, axes);
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const double x = v.g.axes[0].center(i), y = v.g.axes[1].center(j);
      worst = std::max(worst, std::abs(v.g.at(i, j) + 1.5 * (x * x + y * y)));
    }
  }
  CHECK(worst < 2e-4);  // linear interpolation of a quadratic: 3 h^2/4

  SUBCASE("projections outside the sampled range are an input error") {
    const std::array<grid::Axis, 2> big{grid::Axis{-20, 20, 32}, grid::Axis{-20, 20, 32}};
    CHECK_THROWS_AS(spectral::combine_potential(u, parts, big), InputError);
  }
  SUBCASE("a single ridge is constant along its orthogonal direction") {
    Mat one(2, 1);
    one << 1, 0;
    std::vector<Potential> single{sample_potential_1d(12, 2048, neg_sq)};
    const auto ridge = spectral::combine_potential(one, single, axes);
    CHECK(std::abs(ridge.g.at(10, 5) - ridge.g.at(10, 50)) < 1e-12);
  }
}

TEST_CASE("eigenvalue subadditivity") {
  SUBCASE("orthonormal directions on matched grids: equality") {
    Mat u = Mat::Identity(2, 2);
    const int count = 128;
    const double half = 8.0;
    std::vector<Potential> parts;
    parts.push_back(sample_potential_1d(half, count, neg_sq));
    parts.push_back(sample_potential_1d(half, count, neg_sq));
    for (double& x : parts[1].g.values) x *= 0.8;
    const std::array<grid::Axis, 2> axes{grid::Axis{-half, half, count},
                                         grid::Axis{-half, half, count}};
    const auto chk =
        spectral::eigen_subadditivity_check(u, Vec::Constant(2, 1.0), parts, axes);
    CHECK(chk.holds);
    CHECK(std::abs(chk.lhs - chk.rhs) < 1e-5);
  }
  SUBCASE("equiangular harmonic instance against the closed form") {
    const Mat u = mercedes_columns();
    std::vector<Potential> parts;
    for (int j = 0; j < 3; ++j) parts.push_back(sample_potential_1d(12, 2048, neg_sq));
    const std::array<grid::Axis, 2> axes{grid::Axis{-8, 8, 256}, grid::Axis{-8, 8, 256}};
    const auto chk =
        spectral::eigen_subadditivity_check(u, Vec::Constant(3, 2.0 / 3.0), parts, axes);
    const double closed = -2.0 * std::sqrt(6.0);
    CHECK(chk.holds);
    CHECK(std::abs(chk.lhs - closed) < 2e-3);
    CHECK(std::abs(chk.rhs - closed) < 2e-3);
  }
  SUBCASE("asymmetric wells leave a strict margin") {
    const Mat u = mercedes_columns();
    std::vector<Potential> parts;
    parts.push_back(sample_potential_1d(12, 2048, neg_sq));
    auto shallow = sample_potential_1d(12, 2048, neg_sq);
    for (double& x : shallow.g.values) x *= 0.7;
    parts.push_back(shallow);
    auto shallower = sample_potential_1d(12, 2048, neg_sq);
    for (double& x : shallower.g.values) x *= 0.5;
    parts.push_back(shallower);
    const std::array<grid::Axis, 2> axes{grid::Axis{-8, 8, 192}, grid::Axis{-8, 8, 192}};
    const auto chk =
        spectral::eigen_subadditivity_check(u, Vec::Constant(3, 2.0 / 3.0), parts, axes);
    CHECK(chk.holds);
    CHECK(chk.margin > 1e-3);
  }
  SUBCASE("the frame condition is a precondition") {
    Mat u = Mat::Identity(2, 2);
    std::vector<Potential> parts;
    parts.push_back(sample_potential_1d(8, 128, neg_sq));
    parts.push_back(sample_potential_1d(8, 128, neg_sq));
    const std::array<grid::Axis, 2> axes{grid::Axis{-8, 8, 128}, grid::Axis{-8, 8, 128}};
    CHECK_THROWS_AS(
        spectral::eigen_subadditivity_check(u, Vec::Constant(2, 0.7), parts, axes),
        PreconditionError);
  }
}

TEST_CASE("legendre pairing bound for Fisher information") {
  SUBCASE("ground-state density achieves equality") {
    const auto v = sample_potential_1d(10, 4000, neg_sq);
    const auto gs = spectral::lambda_1d(v);
    grid::Grid fg = gs.eigenfunction;
    for (double& x : fg.values) x = x * x;
    const auto f = entropy::DensityGrid::validated(std::move(fg));
    const auto chk = spectral::legendre_fisher_check(v, f);
    CHECK(chk.holds);
    CHECK(std::abs(chk.pairing - chk.bound) < 2e-3);
  }
  SUBCASE("zero potential is dominated by the information") {
    SpectralOptions opts;
    opts.strict_boundary = false;
    const auto v = zero_potential_1d(12, 2048);
    Mat cov(1, 1);
    cov << 1.0;
    const auto f = entropy::gaussian_density(
        cov, Vec::Zero(1), {grid::Axis{-12, 12, 2048}, grid::Axis{}, grid::Axis{}}, 1);
    const auto chk = spectral::legendre_fisher_check(v, f, opts);
    CHECK(chk.holds);
    CHECK(chk.pairing == 0.0);
    CHECK(chk.bound > 0.5);  // lambda(0) is a small negative number, I(f) is 1
  }
  SUBCASE("an off-center density is strictly below the bound") {
    const auto v = sample_potential_1d(10, 2000, neg_sq);
    Mat cov(1, 1);
    cov << 1.0;
    Vec mean(1);
    mean << 1.5;
    const auto f = entropy::gaussian_density(
        cov, mean, {grid::Axis{-10, 10, 2000}, grid::Axis{}, grid::Axis{}}, 1);
    const auto chk = spectral::legendre_fisher_check(v, f);
    CHECK(chk.holds);
    CHECK(chk.bound - chk.pairing > 0.1);
  }
}
