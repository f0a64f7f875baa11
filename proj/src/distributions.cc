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

#include "bcauction/distributions.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "bcauction/errors.h"

namespace bcauction {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string Num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

ValueDistribution::ValueDistribution(
    double lo, double hi,
    std::variant<UniformLaw, std::shared_ptr<const TableLaw>, VirtualLaw> law)
    : lo_(lo), hi_(hi), law_(std::move(law)) {}

ValueDistribution ValueDistribution::Uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("uniform law needs finite lo < hi, got [" + Num(lo) +
                        ", " + Num(hi) + "]");
  }
  return ValueDistribution(lo, hi, UniformLaw{});
}

ValueDistribution ValueDistribution::Table(std::vector<double> values,
                                           std::vector<double> cdf) {
  if (values.size() != cdf.size() || values.size() < 2) {
    throw ArgumentError("table law needs matching value/cdf columns of length >= 2");
  }
  if (cdf.front() != 0.0 || cdf.back() != 1.0) {
    throw ArgumentError("table cdf must start at 0 and end at 1");
  }
  auto law = std::make_shared<TableLaw>();
  const std::size_t n = values.size();
  law->slope.resize(n - 1);
  law->moment_cum.assign(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (!(values[j] < values[j + 1])) {
      throw ArgumentError("table values must be strictly increasing");
    }
    if (!(cdf[j] < cdf[j + 1])) {
      throw ArgumentError("table cdf must be strictly increasing (positive density)");
    }
    const double w = values[j + 1] - values[j];
    law->slope[j] = (cdf[j + 1] - cdf[j]) / w;
    law->moment_cum[j + 1] = law->moment_cum[j] + (cdf[j + 1] - cdf[j]) *
                                                      0.5 *
                                                      (values[j] + values[j + 1]);
  }
  const double lo = values.front();
  const double hi = values.back();
  law->values = std::move(values);
  law->cdf = std::move(cdf);
  return ValueDistribution(lo, hi, std::shared_ptr<const TableLaw>(law));
}

ValueDistribution ValueDistribution::Tabulate(
    const std::function<double(double)>& cdf, double lo, double hi,
    std::size_t points) {
  if (points < 2 || !(lo < hi)) {
    throw ArgumentError("tabulation needs lo < hi and at least two points");
  }
  std::vector<double> v(points), f(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(points - 1);
    f[i] = cdf(v[i]);
  }
  v.back() = hi;
  f.front() = 0.0;
  f.back() = 1.0;
  return Table(std::move(v), std::move(f));
}

ValueDistribution ValueDistribution::LoadTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open table file '" + path + "'");
  std::vector<double> v, f;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ArgumentError(path + ":" + std::to_string(lineno) +
                          ": expected 'v,F(v)'");
    }
    try {
      v.push_back(std::stod(line.substr(0, comma)));
      f.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      // Allow a single textual header row.
      if (v.empty() && lineno == 1) continue;
      throw ArgumentError(path + ":" + std::to_string(lineno) +
                          ": not a number");
    }
  }
  if (v.size() < 1025) {
    throw ArgumentError(path + ": table needs at least 1025 rows, got " +
                        std::to_string(v.size()));
  }
  const double h = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs((v[i] - v[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw ArgumentError(path + ": value grid must be evenly spaced");
    }
  }
  return Table(std::move(v), std::move(f));
}

ValueDistribution ValueDistribution::Parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ArgumentError("distribution spec '" + spec +
                        "' must be uniform:<a>,<b> or table:<path>");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "uniform") {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) {
      throw ArgumentError("uniform spec needs two bounds: '" + spec + "'");
    }
    double a = 0.0, b = 0.0;
    try {
      std::size_t used = 0;
      a = std::stod(rest.substr(0, comma), &used);
      const std::string tail = rest.substr(comma + 1);
      b = std::stod(tail, &used);
      if (used != tail.size()) throw std::invalid_argument(tail);
    } catch (const std::exception&) {
      throw ArgumentError("uniform spec has non-numeric bounds: '" + spec + "'");
    }
    return Uniform(a, b);
  }
  if (kind == "table") return LoadTable(rest);
  throw ArgumentError("unknown distribution kind '" + kind + "'");
}

ValueDistribution ValueDistribution::VirtualImage(const ValueDistribution& base) {
  if (base.kind() == Kind::kUniform) {
    return Uniform(2.0 * base.lo() - base.hi(), base.hi());
  }
  auto t = std::make_shared<const VirtualTransform>(base);
  if (!t->regular()) {
    throw NotRegular("virtual image requires a regular law: " + base.describe());
  }
  return ValueDistribution(t->range_lo(), t->range_hi(), VirtualLaw{t});
}

ValueDistribution::Kind ValueDistribution::kind() const {
  switch (law_.index()) {
    case 0:
      return Kind::kUniform;
    case 1:
      return Kind::kTable;
    default:
      return Kind::kVirtual;
  }
}

std::size_t ValueDistribution::segment_of(double v) const {
  const auto& t = *std::get<1>(law_);
  const auto it = std::upper_bound(t.values.begin(), t.values.end(), v);
  std::size_t j = static_cast<std::size_t>(it - t.values.begin());
  j = j == 0 ? 0 : j - 1;
  return std::min(j, t.slope.size() - 1);
}

double ValueDistribution::table_moment_to(double v) const {
  const auto& t = *std::get<1>(law_);
  const std::size_t j = segment_of(v);
  const double a = t.values[j];
  return t.moment_cum[j] + t.slope[j] * (v - a) * 0.5 * (v + a);
}

double ValueDistribution::cdf(double v) const {
  if (v <= lo_) return 0.0;
  if (v >= hi_) return 1.0;
  return std::visit(
      Overloaded{
          [&](const UniformLaw&) { return (v - lo_) / (hi_ - lo_); },
          [&](const std::shared_ptr<const TableLaw>& t) {
            const std::size_t j = segment_of(v);
            return t->cdf[j] + t->slope[j] * (v - t->values[j]);
          },
          [&](const VirtualLaw& w) {
            return w.transform->source().cdf(w.transform->inverse_clamped(v));
          }},
      law_);
}

double ValueDistribution::pdf(double v) const {
  if (v < lo_ || v > hi_) return 0.0;
  return std::visit(
      Overloaded{
          [&](const UniformLaw&) { return 1.0 / (hi_ - lo_); },
          [&](const std::shared_ptr<const TableLaw>& t) {
            return t->slope[segment_of(v)];
          },
          [&](const VirtualLaw& w) {
            // Piecewise-constant densities give a virtual valuation of slope 2
            // inside every segment; jumps between segments leave gaps of zero
            // density in the image.
            const double u = w.transform->inverse_clamped(v);
            if (std::abs(w.transform->value(u) - v) > 1e-9) return 0.0;
            return w.transform->source().pdf(u) / 2.0;
          }},
      law_);
}

double ValueDistribution::mass(double a, double b) const {
  if (b <= a) return 0.0;
  return cdf(b) - cdf(a);
}

double ValueDistribution::partial_moment(double a, double b) const {
  a = std::max(a, lo_);
  b = std::min(b, hi_);
  if (b <= a) return 0.0;
  return std::visit(
      Overloaded{
          [&](const UniformLaw&) {
            return (b - a) * 0.5 * (a + b) / (hi_ - lo_);
          },
          [&](const std::shared_ptr<const TableLaw>& t) {
            const std::size_t ja = segment_of(a);
            if (ja == segment_of(b)) {
              return t->slope[ja] * (b - a) * 0.5 * (a + b);
            }
            return table_moment_to(b) - table_moment_to(a);
          },
          [&](const VirtualLaw& w) {
            return w.transform->partial_moment(w.transform->inverse_clamped(a),
                                               w.transform->inverse_clamped(b));
          }},
      law_);
}

double ValueDistribution::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ArgumentError("quantile level must lie in [0, 1], got " + Num(q));
  }
  if (q == 0.0) return lo_;
  if (q == 1.0) return hi_;
  return std::visit(
      Overloaded{
          [&](const UniformLaw&) { return lo_ + q * (hi_ - lo_); },
          [&](const std::shared_ptr<const TableLaw>& t) {
            const auto it = std::lower_bound(t->cdf.begin(), t->cdf.end(), q);
            std::size_t j = static_cast<std::size_t>(it - t->cdf.begin());
            if (t->cdf[j] == q) return t->values[j];
            --j;
            return t->values[j] + (q - t->cdf[j]) / t->slope[j];
          },
          [&](const VirtualLaw& w) {
            return w.transform->value(w.transform->source().quantile(q));
          }},
      law_);
}

std::vector<double> ValueDistribution::breakpoints() const {
  return std::visit(
      Overloaded{
          [&](const UniformLaw&) { return std::vector<double>{lo_, hi_}; },
          [&](const std::shared_ptr<const TableLaw>& t) { return t->values; },
          [&](const VirtualLaw& w) { return w.transform->breakpoints(); }},
      law_);
}

bool ValueDistribution::same_law(const ValueDistribution& other) const {
  if (kind() != other.kind() || lo_ != other.lo_ || hi_ != other.hi_) {
    return false;
  }
  return std::visit(
      Overloaded{
          [&](const UniformLaw&) { return true; },
          [&](const std::shared_ptr<const TableLaw>& t) {
            const auto& u = std::get<1>(other.law_);
            return t == u || (t->values == u->values && t->cdf == u->cdf);
          },
          [&](const VirtualLaw& w) {
            const auto& u = std::get<2>(other.law_);
            return w.transform == u.transform ||
                   w.transform->source().same_law(u.transform->source());
          }},
      law_);
}

std::string ValueDistribution::describe() const {
  return std::visit(
      Overloaded{
          [&](const UniformLaw&) {
            return "uniform:" + Num(lo_) + "," + Num(hi_);
          },
          [&](const std::shared_ptr<const TableLaw>& t) {
            return "table[" + std::to_string(t->values.size()) + " nodes on " +
                   Num(lo_) + ".." + Num(hi_) + "]";
          },
          [&](const VirtualLaw& w) {
            return "virtual(" + w.transform->source().describe() + ")";
          }},
      law_);
}

double conditional_mean(const ValueDistribution& d, double a, double b) {
  if (!(a < b)) {
    throw ArgumentError("conditional mean needs lo < hi, got [" + Num(a) + ", " +
                        Num(b) + "]");
  }
  if (a < d.lo() || b > d.hi()) {
    // Clip to the support; the law has no mass outside it.
    a = std::max(a, d.lo());
    b = std::min(b, d.hi());
    if (!(a < b)) {
      throw DegenerateInterval("degenerate interval: no probability outside " +
                               d.describe());
    }
  }
  const double m = d.mass(a, b);
  if (!(m > 0.0)) {
    throw DegenerateInterval("degenerate interval [" + Num(a) + ", " + Num(b) +
                             "] under " + d.describe());
  }
  if (d.kind() == ValueDistribution::Kind::kUniform) return 0.5 * (a + b);
  const double mean = d.partial_moment(a, b) / m;
  return std::clamp(mean, a, b);
}

double quantile(const ValueDistribution& d, double q) { return d.quantile(q); }

VirtualTransform::VirtualTransform(ValueDistribution source)
    : source_(std::move(source)) {
  if (source_.kind() == ValueDistribution::Kind::kVirtual) {
    throw ArgumentError("virtual transform of a virtual law is not supported");
  }
  range_lo_ = value(source_.lo());
  range_hi_ = value(source_.hi());
  if (source_.kind() == ValueDistribution::Kind::kTable) {
    nodes_ = source_.breakpoints();
    for (std::size_t j = 0; j + 1 < nodes_.size(); ++j) {
      const double a = nodes_[j];
      const double lo_c = a - (1.0 - source_.cdf(a)) / source_.pdf(a);
      seg_lo_.push_back(lo_c);
      seg_hi_.push_back(lo_c + 2.0 * (nodes_[j + 1] - a));
    }
  }
  regular_ = true;
  const double lo = source_.lo();
  const double hi = source_.hi();
  double prev = range_lo_;
  for (std::size_t i = 1; i < kRegularityGrid; ++i) {
    const double v = i + 1 == kRegularityGrid
                         ? hi
                         : lo + (hi - lo) * static_cast<double>(i) /
                                    static_cast<double>(kRegularityGrid - 1);
    const double cur = value(v);
    if (!(cur - prev > kStrictness)) {
      regular_ = false;
      break;
    }
    prev = cur;
  }
  // The grid can step over a node where the transform jumps down.
  for (std::size_t j = 0; regular_ && j + 1 < seg_lo_.size(); ++j) {
    if (!(seg_lo_[j + 1] >= seg_hi_[j])) regular_ = false;
  }
}

double VirtualTransform::value(double v) const {
  if (v < source_.lo() || v > source_.hi()) {
    throw UnsupportedPoint("virtual valuation requested outside the support");
  }
  if (source_.kind() == ValueDistribution::Kind::kUniform) {
    return 2.0 * v - source_.hi();
  }
  const double f = source_.pdf(v);
  if (!(f > 0.0)) throw UnsupportedPoint("density vanishes; unsupported point");
  return v - (1.0 - source_.cdf(v)) / f;
}

double VirtualTransform::inverse(double c) const {
  if (!regular_) {
    throw NotRegular("inverse virtual valuation requires a regular law: " +
                     source_.describe());
  }
  if (c < range_lo_ || c > range_hi_) {
    throw RangeError("virtual value " + Num(c) + " outside [" + Num(range_lo_) +
                     ", " + Num(range_hi_) + "]");
  }
  return inverse_clamped(c);
}

double VirtualTransform::inverse_clamped(double c) const {
  if (!regular_) {
    throw NotRegular("inverse virtual valuation requires a regular law: " +
                     source_.describe());
  }
  if (c <= range_lo_) return source_.lo();
  if (c >= range_hi_) return source_.hi();
  if (source_.kind() == ValueDistribution::Kind::kUniform) {
    return std::clamp(0.5 * (c + source_.hi()), source_.lo(), source_.hi());
  }
  const auto it = std::upper_bound(seg_lo_.begin(), seg_lo_.end(), c);
  const std::size_t j =
      it == seg_lo_.begin() ? 0 : static_cast<std::size_t>(it - seg_lo_.begin()) - 1;
  if (c >= seg_hi_[j]) return nodes_[j + 1];  // inside a jump
  return std::clamp(nodes_[j] + 0.5 * (c - seg_lo_[j]), nodes_[j], nodes_[j + 1]);
}

std::vector<double> VirtualTransform::breakpoints() const {
  if (source_.kind() == ValueDistribution::Kind::kUniform) {
    return {range_lo_, range_hi_};
  }
  std::vector<double> out;
  out.reserve(2 * seg_lo_.size());
  for (std::size_t j = 0; j < seg_lo_.size(); ++j) {
    out.push_back(seg_lo_[j]);
    out.push_back(seg_hi_[j]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double VirtualTransform::partial_moment(double a, double b) const {
  a = std::max(a, source_.lo());
  b = std::min(b, source_.hi());
  if (b <= a) return 0.0;
  return a * (1.0 - source_.cdf(a)) - b * (1.0 - source_.cdf(b));
}

double VirtualTransform::conditional_mean(double a, double b) const {
  if (!(a < b)) throw ArgumentError("conditional mean needs lo < hi");
  const double m = source_.mass(a, b);
  if (!(m > 0.0)) throw DegenerateInterval("degenerate interval");
  if (source_.kind() == ValueDistribution::Kind::kUniform) {
    a = std::max(a, source_.lo());
    b = std::min(b, source_.hi());
    return a + b - source_.hi();
  }
  return partial_moment(a, b) / m;
}

double virtual_value(const VirtualTransform& t, double v) { return t.value(v); }

double inverse_virtual(const VirtualTransform& t, double c) {
  return t.inverse(c);
}

}  // namespace bcauction
