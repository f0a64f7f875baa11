// Copyright 2026 The bcauction Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "bcauction/distributions.h"
#include "bcauction/errors.h"
#include "doctest.h"
#include "oracles.h"

using namespace bcauction;

namespace {
const ValueDistribution kUnit = ValueDistribution::Uniform(0.0, 1.0);
}

TEST_CASE("conditional mean of uniform slices") {
  CHECK(conditional_mean(kUnit, 0.2, 0.6) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(conditional_mean(kUnit, 0.0, 2.0 / 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // Clipped to the support.
  CHECK(conditional_mean(kUnit, 0.5, 3.0) == doctest::Approx(0.75));
}

TEST_CASE("conditional mean of the triangular table") {
  const auto tri = oracle::triangular();
  CHECK(std::abs(conditional_mean(tri, 0.0, 1.0) - 2.0 / 3.0) < 1e-6);
  for (double a : {0.0, 0.1, 0.3}) {
    for (double b : {0.5, 0.8, 1.0}) {
      CHECK(std::abs(conditional_mean(tri, a, b) - oracle::triangular_mean(a, b)) < 1e-6);
    }
  }
}

TEST_CASE("conditional mean errors") {
  CHECK_THROWS_AS(conditional_mean(kUnit, 0.5, 0.5), ArgumentError);
  CHECK_THROWS_AS(conditional_mean(kUnit, 0.7, 0.2), ArgumentError);
  CHECK_THROWS_AS(conditional_mean(kUnit, 2.0, 3.0), DegenerateInterval);
}

TEST_CASE("quantiles") {
  CHECK(quantile(kUnit, 1.0 / 3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(quantile(ValueDistribution::Uniform(2.0, 4.0), 0.5) == doctest::Approx(3.0));
  CHECK(std::abs(quantile(oracle::triangular(), 0.25) - 0.5) < 1e-9);
  CHECK_THROWS_AS(quantile(kUnit, 1.5), ArgumentError);
}

TEST_CASE("quantile inverts the cdf") {
  const auto tri = oracle::triangular();
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double q = u(eng);
    CHECK(tri.cdf(tri.quantile(q)) == doctest::Approx(q).epsilon(1e-12));
    CHECK(kUnit.cdf(kUnit.quantile(q)) == doctest::Approx(q).epsilon(1e-15));
  }
}

TEST_CASE("mass and moments agree with quadrature") {
  const auto tri = oracle::triangular();
  for (double a : {0.0, 0.25, 0.6}) {
    for (double b : {0.61, 0.9, 1.0}) {
      CHECK(tri.mass(a, b) == doctest::Approx(tri.cdf(b) - tri.cdf(a)).epsilon(1e-14));
      CHECK(std::abs(tri.partial_moment(a, b) - oracle::moment(tri, a, b)) < 1e-10);
    }
  }
}

TEST_CASE("virtual values") {
  const VirtualTransform u(kUnit);
  CHECK(u.regular());
  CHECK(virtual_value(u, 0.75) == doctest::Approx(0.5));
  CHECK(virtual_value(u, 1.0) == doctest::Approx(1.0));
  CHECK(inverse_virtual(u, 0.0) == doctest::Approx(0.5));
  CHECK(inverse_virtual(u, 1.0) == doctest::Approx(1.0));
  CHECK(inverse_virtual(u, 0.25) == doctest::Approx(0.625));
  CHECK_THROWS_AS(inverse_virtual(u, 1.5), RangeError);

  const VirtualTransform t(oracle::triangular());
  CHECK(t.regular());
  // v - (1 - v^2) / (2 v) at 1/2, up to the table's grid spacing.
  CHECK(std::abs(t.value(0.5) - (-0.25)) < 2e-3);
  // Against a numerically differentiated cdf.
  const auto tri = oracle::triangular();
  for (double v : {0.2, 0.45, 0.7, 0.93}) {
    const double h = 1e-6;
    const double f = (tri.cdf(v + h) - tri.cdf(v - h)) / (2 * h);
    CHECK(std::abs(t.value(v) - (v - (1 - tri.cdf(v)) / f)) < 1e-5);
  }
}

TEST_CASE("virtual inverse round trip on a table") {
  const VirtualTransform t(oracle::triangular());
  for (double v = 0.05; v < 1.0; v += 0.0731) {
    CHECK(t.inverse(t.value(v)) == doctest::Approx(v).epsilon(1e-12));
  }
  CHECK_THROWS_AS(t.inverse(t.range_hi() + 1.0), RangeError);
  CHECK(t.inverse_clamped(t.range_hi() + 1.0) == doctest::Approx(1.0));
}

TEST_CASE("virtual partial moment matches the integral") {
  const auto tri = oracle::triangular();
  const VirtualTransform t(tri);
  for (double a : {0.1, 0.4}) {
    for (double b : {0.5, 1.0}) {
      // Integral of (v f - (1 - F)).
      const double direct = oracle::moment(tri, a, b) -
          oracle::simpson([&](double v) { return 1 - tri.cdf(v); }, a, b, 8192);
      CHECK(std::abs(t.partial_moment(a, b) - direct) < 1e-6);
    }
  }
}

TEST_CASE("irregular law is detected") {
  // Density 1.9 on [0, 0.5) and 0.1 on [0.5, 1].
  const auto d = ValueDistribution::Tabulate(
      [](double v) { return v < 0.5 ? 1.9 * v : 0.95 + 0.1 * (v - 0.5); }, 0.0, 1.0);
  const VirtualTransform t(d);
  CHECK_FALSE(t.regular());
  CHECK_THROWS_AS(t.inverse(0.0), NotRegular);
}

TEST_CASE("virtual image of a uniform law") {
  const auto img = ValueDistribution::VirtualImage(ValueDistribution::Uniform(2.0, 4.0));
  CHECK(img.lo() == doctest::Approx(0.0));
  CHECK(img.hi() == doctest::Approx(4.0));
  const auto tri = oracle::triangular();
  const auto timg = ValueDistribution::VirtualImage(tri);
  const VirtualTransform t(tri);
  // P(virtual value <= c) = F(inverse(c)).
  for (double c : {-0.5, 0.0, 0.3, 0.8}) {
    CHECK(timg.cdf(c) == doctest::Approx(tri.cdf(t.inverse(c))).epsilon(1e-12));
  }
}

TEST_CASE("table parsing") {
  const std::string path = "test_table_tmp.csv";
  {
    std::ofstream f(path);
    f.precision(17);
    f << "v,F\n";
    for (int i = 0; i <= 1024; ++i) {
      const double v = i / 1024.0;
      f << v << "," << v * v << "\n";
    }
  }
  const auto d = ValueDistribution::Parse("table:" + path);
  CHECK(d.kind() == ValueDistribution::Kind::kTable);
  CHECK(d.same_law(oracle::triangular()));
  CHECK(ValueDistribution::Parse("uniform:2,4").hi() == doctest::Approx(4.0));
  CHECK_THROWS_AS(ValueDistribution::Parse("normal:0,1"), ArgumentError);
  {
    std::ofstream f(path);
    for (int i = 0; i <= 10; ++i) f << i / 10.0 << "," << i / 10.0 << "\n";
  }
  CHECK_THROWS(ValueDistribution::LoadTable(path));
  std::remove(path.c_str());
}

TEST_CASE("table constructor validation") {
  CHECK_THROWS_AS(ValueDistribution::Table({0.0, 1.0}, {0.0, 0.9}), ArgumentError);
  CHECK_THROWS_AS(ValueDistribution::Table({0.0, 0.0, 1.0}, {0.0, 0.5, 1.0}), ArgumentError);
  CHECK_THROWS_AS(ValueDistribution::Uniform(1.0, 1.0), ArgumentError);
}
