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

// Independent reference computations for tests. Nothing here calls the
// library's evaluation code; only distribution CDFs and mechanism tables.

#ifndef BCAUCTION_TESTS_ORACLES_H_
#define BCAUCTION_TESTS_ORACLES_H_

#include <cmath>
#include <functional>
#include <vector>

#include "bcauction/distributions.h"
#include "bcauction/mechanism.h"

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels = 4096) {
  if (!(b > a)) return 0.0;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Law with F(v) = v^2 on [0, 1], tabulated.
inline bcauction::ValueDistribution triangular() {
  return bcauction::ValueDistribution::Tabulate([](double v) { return v * v; }, 0.0, 1.0);
}

// E(v | a <= v <= b) for the density 2v.
inline double triangular_mean(double a, double b) {
  return 2.0 / 3.0 * (b * b * b - a * a * a) / (b * b - a * a);
}

// Integral of v dF over [a, b] by parts, with Simpson on F.
inline double moment(const bcauction::ValueDistribution& d, double a, double b) {
  a = std::max(a, d.lo());
  b = std::min(b, d.hi());
  if (!(b > a)) return 0.0;
  return b * d.cdf(b) - a * d.cdf(a) -
         simpson([&](double v) { return d.cdf(v); }, a, b);
}

struct Sums {
  double welfare = 0.0;
  double profit = 0.0;
};

// Enumerates bid profiles of a simultaneous mechanism.
inline Sums cell_sums(const bcauction::SimultaneousMechanism& m,
                      const bcauction::StrategyProfile& s,
                      const std::vector<bcauction::ValueDistribution>& dists, double v0) {
  Sums out;
  const auto n = static_cast<std::size_t>(m.n());
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const auto b = m.profile_of(idx);
    std::vector<double> mass(n), mom(n);
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = s[i][static_cast<std::size_t>(b[i])];
      const double hi = s[i][static_cast<std::size_t>(b[i]) + 1];
      mass[i] = dists[i].cdf(hi) - dists[i].cdf(lo);
      mom[i] = moment(dists[i], lo, hi);
      prob *= mass[i];
    }
    if (!(prob > 0.0)) continue;
    out.welfare += prob * m.weight(idx, 0) * v0;
    out.profit += prob * m.weight(idx, 0) * v0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = m.weight(idx, static_cast<int>(i) + 1);
      if (w <= 0.0) continue;
      out.welfare += w * prob / mass[i] * mom[i];
      out.profit += w * prob * m.payment(idx, static_cast<int>(i));
    }
  }
  return out;
}

// E[max(v0, v_1, ..., v_n)].
inline double expected_max(const std::vector<bcauction::ValueDistribution>& dists,
                           double v0) {
  double lo = dists[0].lo();
  double hi = dists[0].hi();
  for (const auto& d : dists) {
    lo = std::min(lo, d.lo());
    hi = std::max(hi, d.hi());
  }
  const double start = std::max(v0, lo);
  return start + simpson(
                     [&](double t) {
                       double p = 1.0;
                       for (const auto& d : dists) p *= d.cdf(t);
                       return 1.0 - p;
                     },
                     start, hi, 20000);
}

}  // namespace oracle

#endif  // BCAUCTION_TESTS_ORACLES_H_
