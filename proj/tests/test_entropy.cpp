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

#include "blsub/entropy.hpp"
#include "helpers.hpp"

using namespace blsub;
using entropy::DensityGrid;
using blsub::testing::kTwoPiE;
using blsub::testing::mercedes_columns;
using blsub::testing::mercedes_family;
using blsub::testing::mercedes_weights;
using blsub::testing::random_spd;

namespace {

std::array<grid::Axis, 3> axes1d(double half = 12.0, int count = 2048) {
  return {grid::Axis{-half, half, count}, grid::Axis{}, grid::Axis{}};
}

std::array<grid::Axis, 3> axes2d(double half = 12.0, int count = 256) {
  return {grid::Axis{-half, half, count}, grid::Axis{-half, half, count}, grid::Axis{}};
}

DensityGrid gauss1(double variance, double half = 12.0, int count = 2048) {
  Mat cov(1, 1);
  cov << variance;
  return entropy::gaussian_density(cov, Vec::Zero(1), axes1d(half, count), 1);
}

DensityGrid gauss2(const Mat& cov) {
  return entropy::gaussian_density(cov, Vec::Zero(2), axes2d(), 2);
}

}  // namespace

TEST_CASE("density validation rejects bad grids") {
  grid::Grid g = grid::make_grid(1, axes1d());
  CHECK_THROWS_AS(DensityGrid::validated(g), InputError);  // zero mass

  g.values.assign(g.values.size(), 1.0 / 24.0);  // unit mass but fat boundary
  CHECK_THROWS_AS(DensityGrid::validated(g), InputError);
}

TEST_CASE("entropy of closed-form densities") {
  const auto std1 = gauss1(1.0, 10.0, 2000);  // h = 1/100
  CHECK(std::abs(entropy::entropy(std1) + 0.5 * std::log(kTwoPiE)) < 1e-3);

  const auto wide = gauss1(4.0);
  CHECK(std::abs(entropy::entropy(wide) + 0.5 * std::log(kTwoPiE * 4.0)) < 1e-3);

  // Uniform density on [0,1] embedded in [-2,3]: entropy 0 up to edge effects.
  grid::Grid g = grid::make_grid(1, {grid::Axis{-2, 3, 500}, grid::Axis{}, grid::Axis{}});
  int inside = 0;
  for (int i = 0; i < 500; ++i) {
    const double x = g.axes[0].center(i);
    if (x > 0.0 && x < 1.0) {
      g.values[static_cast<std::size_t>(i)] = 1.0;
      ++inside;
    }
  }
  for (double& v : g.values) v *= 100.0 / inside;  // exact unit mass
  const auto uni = DensityGrid::validated(g);
  CHECK(std::abs(entropy::entropy(uni)) < 2e-2);
}

TEST_CASE("marginals push mass forward exactly and match Gaussian closed forms") {
  Mat cov(2, 2);
  cov << 1.0, 0.0, 0.0, 2.25;
  const auto f = gauss2(cov);

  SUBCASE("coordinate marginal is the first factor") {
    const auto m = entropy::marginal(f, (Vec(2) << 1, 0).finished());
    CHECK(std::abs(entropy::entropy(m.density) + 0.5 * std::log(kTwoPiE)) < 5e-3);
    CHECK(std::abs(m.density.g().mass() - 1.0) < 1e-9);
  }
  SUBCASE("diagonal direction picks up the quadratic form") {
    const auto m = entropy::marginal(f, (Vec(2) << 1, 1).finished());
    CHECK(std::abs(entropy::entropy(m.density) + 0.5 * std::log(kTwoPiE * 3.25)) < 5e-3);
  }
  SUBCASE("scaling a direction rescales the marginal density") {
    const Vec a = (Vec(2) << 0.8, 0.6).finished();
    const auto m1 = entropy::marginal(f, a);
    const auto m2 = entropy::marginal(f, 2.0 * a);
    // f_{(2a)}(t) = f_{(a)}(t/2) / 2, compared through interpolation.
    double worst = 0.0;
    const auto& g2 = m2.density.g();
    for (int i = 0; i < g2.axes[0].count; ++i) {
      const double t = g2.axes[0].center(i);
      const double expected = 0.5 * grid::interp1(m1.density.g(), 0.5 * t);
      worst = std::max(worst, std::abs(g2.values[static_cast<std::size_t>(i)] - expected));
    }
    CHECK(worst < 5e-3);
  }
  SUBCASE("sign symmetry") {
    const Vec a = (Vec(2) << 0.3, -1.1).finished();
    const double s1 = entropy::entropy(entropy::marginal(f, a).density);
    const double s2 = entropy::entropy(entropy::marginal(f, -a).density);
    CHECK(std::abs(s1 - s2) < 1e-9);
  }
  SUBCASE("zero direction is rejected") {
    CHECK_THROWS_AS(entropy::marginal(f, Vec::Zero(2)), InputError);
  }
}

TEST_CASE("fisher information of Gaussians matches trace of the inverse covariance") {
  CHECK(std::abs(entropy::fisher(gauss1(1.0)) - 1.0) < 0.01);
  CHECK(std::abs(entropy::fisher(gauss1(4.0)) - 0.25) < 0.0025);

  const auto f2 = gauss2(Mat::Identity(2, 2));
  CHECK(std::abs(entropy::fisher(f2) - 2.0) < 0.02);

  std::mt19937_64 rng(71);
  const Mat sigma = random_spd(2, rng, 0.7, 2.0);
  const auto fr = gauss2(sigma);
  const double expect = sigma.inverse().trace();
  CHECK(std::abs(entropy::fisher(fr) - expect) < 0.01 * expect);
}

TEST_CASE("heat_step composes like the heat kernel") {
  const auto f = gauss1(1.0);
  SUBCASE("variance accumulates") {
    const auto g = entropy::heat_step(f, 0.5);
    const auto expect = gauss1(2.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.g().values.size(); ++i) {
      worst = std::max(worst, std::abs(g.g().values[i] - expect.g().values[i]));
    }
    CHECK(worst < 2e-4);
    CHECK(std::abs(g.g().mass() - 1.0) < 1e-9);
  }
  SUBCASE("tiny times are the identity") {
    const auto g = entropy::heat_step(f, 1e-12);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.g().values.size(); ++i) {
      worst = std::max(worst, std::abs(g.g().values[i] - f.g().values[i]));
    }
    CHECK(worst <= 1e-10);
  }
  SUBCASE("two half steps equal one full step") {
    const auto two = entropy::heat_step(entropy::heat_step(f, 0.1), 0.1);
    const auto one = entropy::heat_step(f, 0.2);
    double worst = 0.0;
    for (std::size_t i = 0; i < one.g().values.size(); ++i) {
      worst = std::max(worst, std::abs(two.g().values[i] - one.g().values[i]));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("entropy decreases along the flow") {
    CHECK(entropy::entropy(entropy::heat_step(f, 0.3)) <= entropy::entropy(f));
  }
  SUBCASE("a kernel wider than the box is rejected") {
    grid::Grid tiny = grid::make_grid(1, {grid::Axis{-3, 3, 32}, grid::Axis{}, grid::Axis{}});
    for (int i = 12; i < 20; ++i) tiny.values[static_cast<std::size_t>(i)] = 1.0;
    const double mass = tiny.mass();
    for (double& v : tiny.values) v /= mass;
    const auto d = DensityGrid::validated(tiny);
    CHECK_THROWS_AS(entropy::heat_step(d, 50.0), InputError);
  }
}

TEST_CASE("subadditivity gap on closed-form instances") {
  SUBCASE("isotropic Gaussian under the tight frame: equality") {
    const auto f = gauss2(Mat::Identity(2, 2));
    const double gap = entropy::subadditivity_gap(f, mercedes_family(), mercedes_weights());
    CHECK(std::abs(gap) < 5e-3);
  }
  SUBCASE("independent product under the orthonormal basis: equality") {
    Mat cov(2, 2);
    cov << 1.0, 0.0, 0.0, 1.69;
    const auto f = gauss2(cov);
    const family::SpanningFamily id2{Mat::Identity(2, 2)};
    const double gap =
        entropy::subadditivity_gap(f, id2, family::WeightVector(Vec::Constant(2, 1.0)));
    CHECK(std::abs(gap) < 5e-3);
  }
  SUBCASE("correlation produces the closed-form negative gap") {
    Mat cov(2, 2);
    cov << 1.0, 0.5, 0.5, 1.0;
    const auto f = gauss2(cov);
    const family::SpanningFamily id2{Mat::Identity(2, 2)};
    const double gap =
        entropy::subadditivity_gap(f, id2, family::WeightVector(Vec::Constant(2, 1.0)));
    const double expect = 0.5 * std::log(cov.determinant());  // marginal variances are 1
    CHECK(std::abs(gap - expect) < 5e-3);
    CHECK(gap < 0.0);
  }
}

TEST_CASE("fisher superadditivity, closed-form path") {
  const Mat u = mercedes_columns();
  const Vec c = Vec::Constant(3, 2.0 / 3.0);
  SUBCASE("identity covariance: equality") {
    const auto chk = entropy::fisher_superadditivity_check(Mat::Identity(2, 2), u, c);
    CHECK(chk.holds);
    CHECK(std::abs(chk.lhs - chk.rhs) < 1e-12);
    CHECK(chk.rhs == doctest::Approx(2.0));
  }
  SUBCASE("product case saturates for the orthonormal basis") {
    Mat sigma = Mat::Zero(2, 2);
    sigma(0, 0) = 2.0;
    sigma(1, 1) = 0.5;
    const auto chk = entropy::fisher_superadditivity_check(sigma, Mat::Identity(2, 2),
                                                           Vec::Constant(2, 1.0));
    CHECK(chk.lhs == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(chk.rhs == doctest::Approx(2.5).epsilon(1e-12));
  }
  SUBCASE("random covariances obey the inequality with slack off the identity ray") {
    std::mt19937_64 rng(73);
    for (int rep = 0; rep < 100; ++rep) {
      const Mat sigma = random_spd(2, rng, 0.4, 3.0);
      const auto chk = entropy::fisher_superadditivity_check(sigma, u, c);
      CHECK(chk.holds);
      const Mat dev = sigma / sigma.trace() - Mat::Identity(2, 2) / 2.0;
      if (dev.cwiseAbs().maxCoeff() > 0.05) {
        CHECK(chk.rhs - chk.lhs > 1e-4);
      }
    }
  }
  SUBCASE("frame precondition is checked") {
    CHECK_THROWS_AS(
        entropy::fisher_superadditivity_check(Mat::Identity(2, 2), u, Vec::Constant(3, 0.5)),
        PreconditionError);
  }
}

TEST_CASE("fisher superadditivity, grid path") {
  Mat cov(2, 2);
  cov << 1.0, 0.5, 0.5, 1.0;
  const auto f = gauss2(cov);
  const auto chk =
      entropy::fisher_superadditivity_check(f, mercedes_columns(), Vec::Constant(3, 2.0 / 3.0));
  CHECK(chk.holds);
  CHECK(chk.lhs < chk.rhs);
}

TEST_CASE("heat monotonicity scan") {
  const Mat u = mercedes_columns();
  const Vec c = Vec::Constant(3, 2.0 / 3.0);
  const std::vector<double> times{0.0, 0.05, 0.1, 0.2, 0.4, 0.8};

  SUBCASE("isotropic Gaussian: the information gap vanishes") {
    const auto scan = entropy::heat_monotonicity_scan(gauss2(Mat::Identity(2, 2)), u, c, times);
    for (const auto& pt : scan) {
      CHECK(std::abs(pt.info_gap) < 1e-2);
    }
  }
  SUBCASE("correlated Gaussian: positive and decreasing, integral matches the entropy gap") {
    Mat cov(2, 2);
    cov << 1.0, 0.5, 0.5, 1.0;
    const auto f = gauss2(cov);
    const auto scan = entropy::heat_monotonicity_scan(f, u, c, times);
    for (std::size_t i = 0; i < scan.size(); ++i) {
      CHECK(scan[i].info_gap > -1e-2);
      if (i) CHECK(scan[i].info_gap < scan[i - 1].info_gap + 1e-3);
    }
    // Closed-form flow of the covariance: Sigma + 2t Id.
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Mat st = cov + 2.0 * times[i] * Mat::Identity(2, 2);
      double expect = st.inverse().trace();
      for (int j = 0; j < 3; ++j) {
        expect -= c(j) / u.col(j).dot(st * u.col(j));
      }
      CHECK(std::abs(scan[i].info_gap - expect) < 1e-2);
    }
    // Trapezoid integral against the directly computed entropy-gap change.
    double integral = 0.0;
    for (std::size_t i = 1; i < scan.size(); ++i) {
      integral += 0.5 * (scan[i].info_gap + scan[i - 1].info_gap) * (times[i] - times[i - 1]);
    }
    const family::SpanningFamily fam(u);
    const family::WeightVector w(c);
    const auto flowed = entropy::heat_step(f, times.back());
    const double gap_diff =
        entropy::subadditivity_gap(flowed, fam, w) - entropy::subadditivity_gap(f, fam, w);
    CHECK(std::abs(integral - gap_diff) < 5e-2);
  }
}

TEST_CASE("three-dimensional grids: calibration and the tetrahedral frame") {
  const std::array<grid::Axis, 3> axes{grid::Axis{-10, 10, 96}, grid::Axis{-10, 10, 96},
                                       grid::Axis{-10, 10, 96}};
  const auto f = entropy::gaussian_density(Mat::Identity(3, 3), Vec::Zero(3), axes, 3);

  CHECK(std::abs(entropy::entropy(f) + 1.5 * std::log(kTwoPiE)) < 5e-3);
  CHECK(std::abs(entropy::fisher(f) - 3.0) < 0.03);

  const Vec a = (Vec(3) << 1, 1, 1).finished();
  const auto m = entropy::marginal(f, a);
  CHECK(std::abs(entropy::entropy(m.density) + 0.5 * std::log(kTwoPiE * 3.0)) < 5e-3);

  const family::SpanningFamily tetra(blsub::testing::tetra_columns());
  const family::WeightVector w(Vec::Constant(4, 0.75));
  CHECK(std::abs(entropy::subadditivity_gap(f, tetra, w)) < 5e-3);

  const auto flowed = entropy::heat_step(f, 0.25);
  CHECK(std::abs(flowed.g().mass() - 1.0) < 1e-9);
  CHECK(entropy::entropy(flowed) <= entropy::entropy(f));
}

TEST_CASE("fisher flags interior zero regions and computes on the positive part") {
  grid::Grid g = grid::make_grid(1, {grid::Axis{-12, 12, 2048}, grid::Axis{}, grid::Axis{}});
  // Two bumps separated by a dead zone.
  for (int i = 0; i < 2048; ++i) {
    const double x = g.axes[0].center(i);
    if (std::abs(x) > 1.0) {
      g.values[static_cast<std::size_t>(i)] =
          std::exp(-0.5 * std::pow(std::abs(x) - 3.0, 2));
    }
  }
  const double mass = g.mass();
  for (double& v : g.values) v /= mass;
  const auto f = DensityGrid::validated(std::move(g));
  entropy::FisherDiagnostics diag;
  const double val = entropy::fisher(f, &diag);
  CHECK(std::isfinite(val));
  CHECK(val > 0.0);
  CHECK(diag.interior_zero_region);
  CHECK(diag.floored_cells > 0);
}

TEST_CASE("entropy drops by n ln(lambda) under dilation of the grid") {
  const auto f = gauss2(Mat::Identity(2, 2));
  const double lambda = 1.7;
  grid::Grid g = f.g();
  for (int d = 0; d < 2; ++d) {
    g.axes[d].lo *= lambda;
    g.axes[d].hi *= lambda;
  }
  for (double& v : g.values) v /= lambda * lambda;
  const auto scaled = DensityGrid::validated(g);
  CHECK(std::abs(entropy::entropy(scaled) - (entropy::entropy(f) - 2.0 * std::log(lambda))) <
        5e-3);
}
