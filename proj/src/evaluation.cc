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

#include "bcauction/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bcauction/errors.h"

namespace bcauction {

namespace {

struct BidCell {
  double mass = 0.0;
  double moment = 0.0;   // integral of v f over the cell
  double vmoment = 0.0;  // integral of virtual value times f over the cell
};

std::vector<std::vector<BidCell>> bid_cells(
    const StrategyProfile& s, const std::vector<ValueDistribution>& dists,
    const std::vector<std::shared_ptr<const VirtualTransform>>* virt) {
  std::vector<std::vector<BidCell>> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& d = dists[i];
    for (int b = 0; b < s[i].bids(); ++b) {
      const double lo = s[i][static_cast<std::size_t>(b)];
      const double hi = s[i][static_cast<std::size_t>(b) + 1];
      BidCell c;
      c.mass = d.mass(lo, hi);
      c.moment = d.partial_moment(lo, hi);
      if (virt) c.vmoment = (*virt)[i]->partial_moment(lo, hi);
      out[i].push_back(c);
    }
  }
  return out;
}

std::vector<std::shared_ptr<const VirtualTransform>> transforms_if_regular(
    const std::vector<ValueDistribution>& dists) {
  std::vector<std::shared_ptr<const VirtualTransform>> out;
  for (const auto& d : dists) {
    auto t = std::make_shared<const VirtualTransform>(d);
    if (!t->regular()) return {};
    out.push_back(std::move(t));
  }
  return out;
}

void check_inputs(const SimultaneousMechanism& m, const StrategyProfile& s,
                  const std::vector<ValueDistribution>& dists) {
  check_strategies(m, s);
  if (static_cast<int>(dists.size()) != m.n()) {
    throw ArgumentError("need one distribution per bidder");
  }
}

std::string describe_profile(const StrategyProfile& s) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << "; ";
    os << "bidder " << i << " cuts";
    for (double c : s[i].cuts()) os << ' ' << c;
  }
  return os.str();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

nlohmann::json report_to_json(const EvaluationReport& r) {
  nlohmann::json j;
  j["welfare"] = r.expected_welfare;
  j["profit"] = r.expected_profit;
  j["virtual_surplus"] = r.expected_virtual_surplus
                             ? nlohmann::json(*r.expected_virtual_surplus)
                             : nlohmann::json(nullptr);
  j["benchmark_welfare"] = r.benchmark_welfare;
  j["benchmark_profit"] = r.benchmark_profit ? nlohmann::json(*r.benchmark_profit)
                                             : nlohmann::json(nullptr);
  j["welfare_loss"] = r.welfare_loss;
  j["profit_loss"] =
      r.profit_loss ? nlohmann::json(*r.profit_loss) : nlohmann::json(nullptr);
  j["method"] = r.method;
  j["samples"] = r.mc_samples;
  j["stderr"] = r.mc_stderr ? nlohmann::json(*r.mc_stderr) : nlohmann::json(nullptr);
  if (r.mc_profit_stderr) j["profit_stderr"] = *r.mc_profit_stderr;
  j["strategies"] = r.strategies;
  return j;
}

std::string report_to_csv(const EvaluationReport& r) {
  auto opt = [](const std::optional<double>& x) { return x ? fmt(*x) : ""; };
  std::string out =
      "welfare,profit,virtual_surplus,benchmark_welfare,benchmark_profit,"
      "welfare_loss,profit_loss,method,samples,stderr\n";
  out += fmt(r.expected_welfare) + "," + fmt(r.expected_profit) + "," +
         opt(r.expected_virtual_surplus) + "," + fmt(r.benchmark_welfare) + "," +
         opt(r.benchmark_profit) + "," + fmt(r.welfare_loss) + "," +
         opt(r.profit_loss) + "," + r.method + "," +
         std::to_string(r.mc_samples) + "," + opt(r.mc_stderr) + "\n";
  return out;
}

CellSums exact_cell_sums(const SimultaneousMechanism& m, const StrategyProfile& s,
                         const std::vector<ValueDistribution>& dists, double v0,
                         bool with_virtual) {
  check_inputs(m, s, dists);
  std::vector<std::shared_ptr<const VirtualTransform>> virt;
  if (with_virtual) {
    virt = transforms_if_regular(dists);
    if (virt.empty()) throw NotRegular("virtual surplus requires regular laws");
  }
  const auto cells = bid_cells(s, dists, with_virtual ? &virt : nullptr);
  const auto n = static_cast<std::size_t>(m.n());
  CellSums out;
  double vs = 0.0;
  std::vector<double> others(n);
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const auto b = m.profile_of(idx);
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) prob *= cells[i][static_cast<std::size_t>(b[i])].mass;
    if (!(prob > 0.0)) continue;
    const auto& w = m.weights(idx);
    out.welfare += prob * w[0] * v0;
    out.profit += prob * w[0] * v0;
    vs += prob * w[0] * v0;
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i + 1] <= 0.0) continue;
      const BidCell& c = cells[i][static_cast<std::size_t>(b[i])];
      const double rest = prob / c.mass;
      out.welfare += w[i + 1] * c.moment * rest;
      out.profit += w[i + 1] * prob * m.payment(idx, static_cast<int>(i));
      vs += w[i + 1] * c.vmoment * rest;
    }
  }
  if (with_virtual) out.virtual_surplus = vs;
  return out;
}

double expected_welfare_exact(const SimultaneousMechanism& m,
                              const StrategyProfile& s,
                              const std::vector<ValueDistribution>& dists,
                              double v0) {
  return exact_cell_sums(m, s, dists, v0, false).welfare;
}

double expected_profit_exact(const SimultaneousMechanism& m,
                             const StrategyProfile& s,
                             const std::vector<ValueDistribution>& dists,
                             double v0) {
  return exact_cell_sums(m, s, dists, v0, false).profit;
}

CellSums evaluate_priority(const PrioritySpec& spec,
                           const std::vector<ValueDistribution>& dists,
                           bool with_virtual) {
  const std::size_t n = spec.thresholds.size();
  if (dists.size() != n) throw ArgumentError("need one distribution per bidder");
  if (spec.priority_order.size() != n) {
    throw ArgumentError("priority order length differs from bidder count");
  }
  std::vector<std::shared_ptr<const VirtualTransform>> virt;
  if (with_virtual) {
    virt = transforms_if_regular(dists);
    if (virt.empty()) throw NotRegular("virtual surplus requires regular laws");
  }
  const auto cells =
      bid_cells(spec.thresholds, dists, with_virtual ? &virt : nullptr);
  const int k = spec.thresholds.front().bids();
  for (const auto& t : spec.thresholds) {
    if (t.bids() != k) throw ArgumentError("all threshold vectors need the same length");
  }
  std::vector<int> rank(n);
  for (std::size_t r = 0; r < n; ++r) {
    rank[static_cast<std::size_t>(spec.priority_order[r])] = static_cast<int>(r);
  }
  // cum[i][m + 1] = P(b_i <= m).
  std::vector<std::vector<double>> cum(n, std::vector<double>(static_cast<std::size_t>(k) + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (int b = 0; b < k; ++b) {
      cum[i][static_cast<std::size_t>(b) + 1] =
          cum[i][static_cast<std::size_t>(b)] + cells[i][static_cast<std::size_t>(b)].mass;
    }
  }
  auto C = [&](std::size_t i, int m) {
    if (m < 0) return 0.0;
    return cum[i][static_cast<std::size_t>(std::min(m, k - 1)) + 1];
  };
  const int lmin = spec.modified ? 1 : 0;
  CellSums out;
  double vs = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (int m = lmin; m < k; ++m) {
      const BidCell& c = cells[j][static_cast<std::size_t>(m)];
      if (!(c.mass > 0.0)) continue;
      auto G = [&](int L) {
        if (L < lmin) return 0.0;
        const int e = std::min(L, m);
        double p = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == j) continue;
          p *= rank[i] > rank[j] ? C(i, e - 1) : C(i, e);
        }
        return p;
      };
      const double win = G(m);
      out.welfare += c.moment * win;
      vs += c.vmoment * win;
      double pay = 0.0;
      double prev = 0.0;
      for (int L = lmin; L <= m; ++L) {
        const double g = G(L);
        pay += (g - prev) * spec.thresholds[j][static_cast<std::size_t>(L)];
        prev = g;
      }
      out.profit += c.mass * pay;
    }
  }
  if (spec.modified) {
    double keep = 1.0;
    for (std::size_t i = 0; i < n; ++i) keep *= C(i, 0);
    out.welfare += keep * spec.v0;
    out.profit += keep * spec.v0;
    vs += keep * spec.v0;
  }
  if (with_virtual) out.virtual_surplus = vs;
  return out;
}

double benchmark_unbounded(const std::vector<ValueDistribution>& dists,
                           double v0, Objective objective) {
  if (dists.empty()) throw ArgumentError("benchmark needs at least one bidder");
  std::vector<ValueDistribution> laws;
  for (const auto& d : dists) {
    if (objective == Objective::kProfit) {
      laws.push_back(ValueDistribution::VirtualImage(d));
    } else {
      laws.push_back(d);
    }
  }
  // Collapse identical laws into powers.
  std::vector<std::pair<ValueDistribution, int>> groups;
  for (const auto& g : laws) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& e) { return e.first.same_law(g); });
    if (it == groups.end()) {
      groups.emplace_back(g, 1);
    } else {
      ++it->second;
    }
  }
  double lo = laws[0].lo();
  double hi = laws[0].hi();
  std::vector<double> pts;
  for (const auto& [g, count] : groups) {
    lo = std::min(lo, g.lo());
    hi = std::max(hi, g.hi());
    const auto bp = g.breakpoints();
    pts.insert(pts.end(), bp.begin(), bp.end());
  }
  const double start = std::max(v0, lo);
  if (!(start < hi)) return v0;
  pts.push_back(start);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  auto tail = [&](double t) {
    double p = 1.0;
    for (const auto& [g, count] : groups) p *= std::pow(g.cdf(t), count);
    return 1.0 - p;
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = start;
  double prev = start;
  for (double p : pts) {
    if (p <= prev) continue;
    if (p > hi) break;
    total += gauss_kronrod<double, 31>::integrate(tail, prev, p, 8, 1e-14);
    prev = p;
  }
  return total;
}

double benchmark_unbounded(const ValueDistribution& d, int n, double v0,
                           Objective objective) {
  if (n < 1) throw ArgumentError("benchmark needs at least one bidder");
  return benchmark_unbounded(std::vector<ValueDistribution>(static_cast<std::size_t>(n), d),
                             v0, objective);
}

namespace {

void fill_benchmarks(EvaluationReport& r, const std::vector<ValueDistribution>& dists,
                     double v0, bool regular) {
  r.benchmark_welfare = benchmark_unbounded(dists, v0, Objective::kWelfare);
  r.welfare_loss = r.benchmark_welfare - r.expected_welfare;
  if (regular) {
    r.benchmark_profit = benchmark_unbounded(dists, v0, Objective::kProfit);
    r.profit_loss = *r.benchmark_profit - r.expected_profit;
  }
}

bool all_regular(const std::vector<ValueDistribution>& dists) {
  return !transforms_if_regular(dists).empty();
}

}  // namespace

EvaluationReport evaluate_exact(const SimultaneousMechanism& m,
                                const StrategyProfile& s,
                                const std::vector<ValueDistribution>& dists,
                                double v0) {
  const bool regular = all_regular(dists);
  const CellSums c = exact_cell_sums(m, s, dists, v0, regular);
  EvaluationReport r;
  r.expected_welfare = c.welfare;
  r.expected_profit = c.profit;
  r.expected_virtual_surplus = c.virtual_surplus;
  r.method = "exact";
  r.strategies = describe_profile(s);
  fill_benchmarks(r, dists, v0, regular);
  return r;
}

EvaluationReport evaluate_priority_report(
    const PrioritySpec& spec, const std::vector<ValueDistribution>& dists) {
  const bool regular = all_regular(dists);
  const CellSums c = evaluate_priority(spec, dists, regular);
  EvaluationReport r;
  r.expected_welfare = c.welfare;
  r.expected_profit = c.profit;
  r.expected_virtual_surplus = c.virtual_surplus;
  r.method = "exact";
  r.strategies = describe_profile(spec.thresholds);
  fill_benchmarks(r, dists, spec.v0, regular);
  return r;
}

IncentiveCheck verify_dominant_strategy(const SimultaneousMechanism& m,
                                        const StrategyProfile& s,
                                        const std::vector<ValueDistribution>& dists,
                                        int value_grid) {
  check_inputs(m, s, dists);
  if (value_grid < 2) throw ArgumentError("value grid needs at least two points");
  constexpr double kSlack = 1e-9;
  constexpr double kOffset = 1e-6;
  IncentiveCheck out;
  for (int i = 0; i < m.n(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const ThresholdVector& t = s[ui];
    std::vector<double> values;
    for (int g = 0; g < value_grid; ++g) {
      values.push_back(t.lo() + (t.hi() - t.lo()) * g / (value_grid - 1));
    }
    for (std::size_t c = 1; c + 1 < t.cuts().size(); ++c) {
      values.push_back(std::max(t.lo(), t[c] - kOffset));
      values.push_back(std::min(t.hi(), t[c] + kOffset));
    }
    const int k = m.bid_sizes()[ui];
    for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
      auto b = m.profile_of(idx);
      if (b[ui] != 0) continue;
      std::vector<double> win(static_cast<std::size_t>(k)), pay(static_cast<std::size_t>(k));
      for (int bid = 0; bid < k; ++bid) {
        b[ui] = bid;
        const std::size_t j = m.index_of(b);
        win[static_cast<std::size_t>(bid)] = m.weight(j, i + 1);
        pay[static_cast<std::size_t>(bid)] = m.payment(j, i);
      }
      b[ui] = 0;
      for (double v : values) {
        const int chosen = t.bid_of(v);
        auto u = [&](int bid) {
          const auto ub = static_cast<std::size_t>(bid);
          return win[ub] * (v - pay[ub]);
        };
        const double base = u(chosen);
        for (int bid = 0; bid < k; ++bid) {
          const double gain = u(bid) - base;
          if (gain > out.worst_violation) {
            out.worst_violation = gain;
            out.bidder = i;
            out.value = v;
            out.profile = b;
          }
        }
      }
    }
  }
  out.pass = out.worst_violation <= kSlack;
  return out;
}

IncentiveCheck verify_ex_post_ir(const SimultaneousMechanism& m,
                                 const StrategyProfile& s,
                                 const std::vector<ValueDistribution>& dists) {
  check_inputs(m, s, dists);
  constexpr double kSlack = 1e-12;
  IncentiveCheck out;
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const auto b = m.profile_of(idx);
    for (int i = 0; i < m.n(); ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double lo = s[ui][static_cast<std::size_t>(b[ui])];
      const double hi = s[ui][static_cast<std::size_t>(b[ui]) + 1];
      double excess = 0.0;
      if (m.weight(idx, i + 1) > 0.0) {
        // Empty cells never occur in play.
        if (hi > lo) excess = m.payment(idx, i) - lo;
      } else {
        excess = std::abs(m.payment(idx, i));
      }
      if (excess > out.worst_violation) {
        out.worst_violation = excess;
        out.bidder = i;
        out.value = lo;
        out.profile = b;
      }
    }
  }
  out.pass = out.worst_violation <= kSlack;
  return out;
}

BidLines bid_lines(const SimultaneousMechanism& m, const StrategyProfile& s,
                   const std::vector<ValueDistribution>& dists, int bidder,
                   ResponseObjective objective) {
  check_inputs(m, s, dists);
  if (bidder < 0 || bidder >= m.n()) throw ArgumentError("bidder index out of range");
  const bool virt = objective == ResponseObjective::kVirtualSurplus;
  std::vector<std::shared_ptr<const VirtualTransform>> tr;
  if (virt) {
    tr = transforms_if_regular(dists);
    if (tr.empty()) throw NotRegular("virtual surplus requires regular laws");
  }
  const auto cells = bid_cells(s, dists, virt ? &tr : nullptr);
  const auto ub = static_cast<std::size_t>(bidder);
  const int k = m.bid_sizes()[ub];
  BidLines lines;
  lines.h.assign(static_cast<std::size_t>(k), 0.0);
  lines.t.assign(static_cast<std::size_t>(k), 0.0);
  const double v0 = m.v0();
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const auto b = m.profile_of(idx);
    double prob = 1.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i != ub) prob *= cells[i][static_cast<std::size_t>(b[i])].mass;
    }
    if (!(prob > 0.0)) continue;
    const auto mb = static_cast<std::size_t>(b[ub]);
    const auto& w = m.weights(idx);
    lines.h[mb] += prob * w[ub + 1];
    if (objective == ResponseObjective::kUtility) {
      lines.t[mb] -= prob * w[ub + 1] * m.payment(idx, bidder);
      continue;
    }
    double rest = w[0] * v0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i == ub || w[i + 1] <= 0.0) continue;
      const BidCell& c = cells[i][static_cast<std::size_t>(b[i])];
      rest += w[i + 1] * (virt ? c.vmoment : c.moment) / c.mass;
    }
    lines.t[mb] += prob * rest;
  }
  return lines;
}

ThresholdVector envelope_thresholds(const BidLines& lines, double lo, double hi) {
  const std::size_t k = lines.h.size();
  if (k == 0 || lines.t.size() != k) throw ArgumentError("empty line set");
  if (!(lo < hi)) throw ArgumentError("envelope needs lo < hi");
  constexpr double kTie = 1e-14;
  bool identical = true;
  for (std::size_t m = 1; m < k; ++m) {
    if (std::abs(lines.h[m] - lines.h[0]) > kTie ||
        std::abs(lines.t[m] - lines.t[0]) > kTie) {
      identical = false;
    }
  }
  if (identical) return equally_spaced_thresholds(static_cast<int>(k), lo, hi);
  auto best_at = [&](double v) {
    std::size_t best = 0;
    double val = lines.h[0] * v + lines.t[0];
    for (std::size_t m = 1; m < k; ++m) {
      const double x = lines.h[m] * v + lines.t[m];
      if (x > val + kTie * (1.0 + std::abs(val))) {
        val = x;
        best = m;
      }
    }
    return best;
  };
  std::vector<double> pts{lo, hi};
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const double dh = lines.h[b] - lines.h[a];
      if (std::abs(dh) <= kTie) continue;
      const double v = (lines.t[a] - lines.t[b]) / dh;
      if (v > lo && v < hi) pts.push_back(v);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<double> cuts(k + 1, hi);
  cuts[0] = lo;
  std::size_t current = best_at(0.5 * (pts[0] + pts[1]));
  for (std::size_t m = 1; m <= current; ++m) cuts[m] = lo;
  for (std::size_t p = 1; p + 1 < pts.size(); ++p) {
    const std::size_t next = best_at(0.5 * (pts[p] + pts[p + 1]));
    if (next < current) {
      throw StructuralError("best bid decreases in the value; no threshold best response");
    }
    for (std::size_t m = current + 1; m <= next; ++m) cuts[m] = pts[p];
    current = next;
  }
  return ThresholdVector(cuts);
}

ThresholdVector best_response_thresholds(
    const SimultaneousMechanism& m, const StrategyProfile& s,
    const std::vector<ValueDistribution>& dists, int bidder,
    ResponseObjective objective) {
  const BidLines lines = bid_lines(m, s, dists, bidder, objective);
  const auto ub = static_cast<std::size_t>(bidder);
  const double lo = s[ub].lo();
  const double hi = s[ub].hi();
  if (objective != ResponseObjective::kVirtualSurplus) {
    return envelope_thresholds(lines, lo, hi);
  }
  const VirtualTransform t(dists[ub]);
  const double vlo = t.value(std::clamp(lo, dists[ub].lo(), dists[ub].hi()));
  const double vhi = t.value(std::clamp(hi, dists[ub].lo(), dists[ub].hi()));
  const ThresholdVector vc = envelope_thresholds(lines, vlo, vhi);
  std::vector<double> cuts;
  for (double c : vc.cuts()) cuts.push_back(t.inverse_clamped(c));
  cuts.front() = lo;
  cuts.back() = hi;
  for (std::size_t j = 1; j < cuts.size(); ++j) cuts[j] = std::max(cuts[j], cuts[j - 1]);
  return ThresholdVector(cuts);
}

}  // namespace bcauction
