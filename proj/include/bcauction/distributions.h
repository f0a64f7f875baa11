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

// Bidder value laws and the per-law quantities the solvers consume.
//
// Two concrete kinds exist: a closed-form uniform law, and a table law given by
// a piecewise-linear CDF (so the density is piecewise constant and every
// integral is exact per segment). A third kind, the virtual image of a table
// law, describes the distribution of v - (1 - F(v)) / f(v) without
// re-tabulating it.

#ifndef BCAUCTION_DISTRIBUTIONS_H_
#define BCAUCTION_DISTRIBUTIONS_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace bcauction {

class VirtualTransform;

class ValueDistribution {
 public:
  enum class Kind { kUniform, kTable, kVirtual };

  static ValueDistribution Uniform(double lo, double hi);
  // `values` strictly increasing, `cdf` strictly increasing from 0 to 1.
  static ValueDistribution Table(std::vector<double> values,
                                 std::vector<double> cdf);
  // Samples `cdf` on an even grid of `points` nodes over [lo, hi].
  static ValueDistribution Tabulate(const std::function<double(double)>& cdf,
                                    double lo, double hi,
                                    std::size_t points = 1025);
  // CSV rows `v,F(v)` on an even grid with at least 1025 rows.
  static ValueDistribution LoadTable(const std::string& path);
  // `uniform:<a>,<b>` or `table:<path>`.
  static ValueDistribution Parse(const std::string& spec);
  // Law of the virtual valuation of `base`. Uniform(a, b) maps to the
  // uniform law on [2a - b, b]; table laws map to a kVirtual law.
  static ValueDistribution VirtualImage(const ValueDistribution& base);

  Kind kind() const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }

  // Both clamp outside the support (cdf is 0 below, 1 above; pdf is 0).
  double cdf(double v) const;
  double pdf(double v) const;

  // Probability of [a, b] and the first moment over [a, b], both restricted
  // to the support.
  double mass(double a, double b) const;
  double partial_moment(double a, double b) const;

  double quantile(double q) const;

  // Points where the density may jump, including both support ends.
  std::vector<double> breakpoints() const;

  bool same_law(const ValueDistribution& other) const;
  std::string describe() const;

 private:
  struct UniformLaw {};
  struct TableLaw {
    std::vector<double> values;
    std::vector<double> cdf;
    std::vector<double> slope;       // density on each segment
    std::vector<double> moment_cum;  // first moment up to each node
  };
  struct VirtualLaw {
    std::shared_ptr<const VirtualTransform> transform;
  };

  ValueDistribution(double lo, double hi,
                    std::variant<UniformLaw, std::shared_ptr<const TableLaw>,
                                 VirtualLaw>
                        law);

  std::size_t segment_of(double v) const;
  double table_moment_to(double v) const;

  double lo_;
  double hi_;
  std::variant<UniformLaw, std::shared_ptr<const TableLaw>, VirtualLaw> law_;
};

// E(v | a <= v <= b). Throws ArgumentError if a >= b and DegenerateInterval
// if the interval carries no probability.
double conditional_mean(const ValueDistribution& d, double a, double b);

// inf{v : F(v) >= q}.
double quantile(const ValueDistribution& d, double q);

// The virtual valuation v - (1 - F(v)) / f(v) of a uniform or table law.
// Regularity is certified once, at construction, on a 1001-point grid.
class VirtualTransform {
 public:
  explicit VirtualTransform(ValueDistribution source);

  const ValueDistribution& source() const { return source_; }
  bool regular() const { return regular_; }

  double value(double v) const;
  // Uniform laws invert in closed form. Table laws have slope 2 inside every
  // segment, so the inverse is exact per segment; a value inside a jump maps
  // to the node at the jump.
  double inverse(double c) const;
  // Like inverse(), but clamps c into the range instead of throwing.
  double inverse_clamped(double c) const;

  double range_lo() const { return range_lo_; }
  double range_hi() const { return range_hi_; }
  // Virtual values at both ends of every table segment.
  std::vector<double> breakpoints() const;

  // Integral of virtual_value(v) f(v) over [a, b] intersected with the support;
  // equals a (1 - F(a)) - b (1 - F(b)).
  double partial_moment(double a, double b) const;
  // E(virtual_value(v) | a <= v <= b).
  double conditional_mean(double a, double b) const;

  static constexpr std::size_t kRegularityGrid = 1001;
  static constexpr double kStrictness = 1e-12;

 private:
  ValueDistribution source_;
  bool regular_ = false;
  double range_lo_ = 0.0;
  double range_hi_ = 0.0;
  std::vector<double> nodes_;   // table nodes
  std::vector<double> seg_lo_;  // virtual value just right of node j
  std::vector<double> seg_hi_;  // virtual value just left of node j + 1
};

double virtual_value(const VirtualTransform& t, double v);
double inverse_virtual(const VirtualTransform& t, double c);

}  // namespace bcauction

#endif  // BCAUCTION_DISTRIBUTIONS_H_
