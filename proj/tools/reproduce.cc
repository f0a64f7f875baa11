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

#include "reproduce.h"

#include <cmath>
#include <functional>
#include <map>

#include "bcauction/errors.h"
#include "bcauction/evaluation.h"
#include "bcauction/profit_reduction.h"
#include "bcauction/sequential.h"
#include "bcauction/threshold_solver.h"

namespace bcauction::tools {

bool ReproRow::ok() const {
  if (relation == "eq") return std::abs(computed - target) <= tolerance;
  if (relation == "lt") return computed < target;
  if (relation == "le") return computed <= target;
  if (relation == "gt") return computed > target;
  return true;
}

namespace {

using Rows = std::vector<ReproRow>;

// Published figures are rounded; their tolerance is half a unit in the last digit.
constexpr double kThreeDigits = 5e-4;

ValueDistribution unit() { return ValueDistribution::Uniform(0.0, 1.0); }

std::vector<ValueDistribution> units(int n) {
  return std::vector<ValueDistribution>(static_cast<std::size_t>(n), unit());
}

Rows example1(const ReproOptions&) {
  const WelfareSolution sol = solve_welfare_optimal(units(2), 2, 0.0);
  const double first_best = benchmark_unbounded(unit(), 2, 0.0, Objective::kWelfare);
  const auto& low = sol.spec.thresholds[static_cast<std::size_t>(sol.spec.priority_order[0])];
  const auto& high = sol.spec.thresholds[static_cast<std::size_t>(sol.spec.priority_order[1])];
  return {
      {"optimal 1-bit welfare (published 0.648)", sol.welfare, 0.648, kThreeDigits},
      {"optimal 1-bit welfare (35/54)", sol.welfare, 35.0 / 54.0, 1e-10},
      {"lower-priority cut (1/3)", low[1], 1.0 / 3.0, 1e-10},
      {"higher-priority cut (2/3)", high[1], 2.0 / 3.0, 1e-10},
      {"first-best welfare (published 0.667)", first_best, 0.667, kThreeDigits},
      {"welfare loss (1/54)", first_best - sol.welfare, 1.0 / 54.0, 1e-10},
      {"symmetric 1-bit welfare (published 0.625)",
       symmetric_optimal_1bit(Objective::kWelfare).value, 0.625, 1e-10},
  };
}

Rows centered_cuts(const ReproOptions& opt) {
  Rows rows;
  for (int k = 2; k <= opt.kmax; ++k) {
    const MutuallyCenteredPair p = solve_mutually_centered(unit(), unit(), k);
    const std::string pre = "k=" + std::to_string(k) + " ";
    for (int i = 1; i < k; ++i) {
      rows.push_back({pre + "x_" + std::to_string(i), p.x[static_cast<std::size_t>(i)],
                      (2.0 * i - 1) / (2.0 * k - 1), 1e-9});
    }
    for (int i = 1; i < k; ++i) {
      rows.push_back({pre + "y_" + std::to_string(i), p.y[static_cast<std::size_t>(i)],
                      2.0 * i / (2.0 * k - 1), 1e-9});
    }
  }
  return rows;
}

Rows profit_1bit(const ReproOptions&) {
  const auto dists = units(2);
  const ProfitSolution sol = solve_profit_optimal(dists, 2, 0.0);
  const CellSums c = evaluate_priority(sol.spec, dists, true);
  const double bench = benchmark_unbounded(dists, 0.0, Objective::kProfit);
  const auto& low = sol.spec.thresholds[static_cast<std::size_t>(sol.spec.priority_order[0])];
  const auto& high = sol.spec.thresholds[static_cast<std::size_t>(sol.spec.priority_order[1])];
  return {
      {"modified game (1 = yes)", sol.spec.modified ? 1.0 : 0.0, 1.0, 0.0},
      {"lower-priority cut (1/2)", low[1], 0.5, 1e-10},
      {"higher-priority cut (5/8)", high[1], 0.625, 1e-10},
      {"expected profit (published 0.39)", c.profit, 0.39, 5e-3},
      {"expected profit (25/64)", c.profit, 25.0 / 64.0, 1e-10},
      {"profit minus virtual surplus", c.profit - *c.virtual_surplus, 0.0, 1e-9},
      {"unbounded profit (5/12)", bench, 5.0 / 12.0, 1e-10},
      {"profit loss (5/192)", bench - c.profit, 5.0 / 192.0, 1e-10},
  };
}

Rows profit_n_bidders(const ReproOptions&) {
  const ProfitSolution sol = solve_profit_optimal(units(5), 2, 0.0);
  const double published[] = {0.5, 0.625, 0.695, 0.741, 0.775};
  Rows rows;
  double y = 0.5;
  for (std::size_t r = 0; r < 5; ++r) {
    const auto& t = sol.spec.thresholds[static_cast<std::size_t>(sol.spec.priority_order[r])];
    const std::string pre = "priority rank " + std::to_string(r + 1) + " cut";
    rows.push_back({pre + " (published)", t[1], published[r], kThreeDigits});
    rows.push_back({pre + " (recursion)", t[1], y, 1e-10});
    y = 0.5 + y * y / 2.0;
  }
  return rows;
}

Rows loss_vs_k(const ReproOptions& opt) {
  Rows rows;
  const double first_best = benchmark_unbounded(unit(), 2, 0.0, Objective::kWelfare);
  for (int k = 2; k <= opt.kmax; ++k) {
    const MutuallyCenteredPair p = closed_form_uniform_welfare_2bidder(k);
    const double w = evaluate_priority(two_bidder_spec(p.x, p.y, false, 0.0), units(2),
                                       false).welfare;
    rows.push_back({"k=" + std::to_string(k) + " priority game loss", first_best - w,
                    1.0 / (6.0 * (2.0 * k - 1) * (2.0 * k - 1)), 1e-10});
    const ThresholdVector t = equally_spaced_thresholds(k);
    const double ws = expected_welfare_exact(symmetric_tie_split_game(2, t, 0.0), {t, t},
                                             units(2), 0.0);
    rows.push_back({"k=" + std::to_string(k) + " symmetric loss", first_best - ws,
                    1.0 / (6.0 * k * k), 1e-10});
  }
  return rows;
}

Rows loss_vs_n(const ReproOptions& opt) {
  Rows rows;
  for (int n = 2; n <= opt.nmax; ++n) {
    const auto dists = units(n);
    const NBidderSolution pg = solve_n_bidder_pg(unit(), n);
    const double wb = benchmark_unbounded(unit(), n, 0.0, Objective::kWelfare);
    rows.push_back({"n=" + std::to_string(n) + " welfare loss", wb - pg.welfare, 9.0 / n,
                    0.0, "lt"});
    const ProfitSolution ps = solve_profit_optimal(dists, 2, 0.0);
    const double profit = evaluate_priority(ps.spec, dists, false).profit;
    const double pb = benchmark_unbounded(unit(), n, 0.0, Objective::kProfit);
    rows.push_back({"n=" + std::to_string(n) + " profit loss", pb - profit, 9.0 / n, 0.0,
                    "lt"});
  }
  return rows;
}

Rows symmetric_1bit(const ReproOptions&) {
  const SymmetricOneBit w = symmetric_optimal_1bit(Objective::kWelfare);
  const SymmetricOneBit p = symmetric_optimal_1bit(Objective::kProfit);
  const double x = p.cuts[0][1];
  return {
      {"welfare cut", w.cuts[0][1], 0.5, 1e-10},
      {"welfare (published 0.625)", w.value, 0.625, 1e-6},
      {"profit cut (1/sqrt 3)", x, 1.0 / std::sqrt(3.0), 1e-6},
      {"profit (published 0.3849)", p.value, 0.3849, 5e-5},
      {"profit (x - x^3)", p.value, x - x * x * x, 1e-6},
      {"welfare below 35/54", w.value, 35.0 / 54.0, 0.0, "lt"},
      {"profit below 25/64", p.value, 25.0 / 64.0, 0.0, "lt"},
  };
}

Rows sequential_example(const ReproOptions&) {
  const auto dists = units(2);
  const SequentialMechanismTree t = alice_bob_example_tree();
  const SequentialStrategy s = backward_induction_best_response(t, dists);
  const double w = sequential_cell_sums(t, s, dists, 0.0, false).welfare;
  const FlattenResult f = flatten_to_simultaneous(t, s, dists, 0.0);
  const double wf = expected_welfare_exact(f.mechanism, f.strategies, dists, 0.0);
  return {
      {"Alice cut", s.at("")[1], 0.5, 1e-12},
      {"Bob cut after 0", s.at("0")[1], 0.25, 1e-12},
      {"Bob cut after 1", s.at("1")[1], 0.75, 1e-12},
      {"sequential welfare (21/32)", w, 21.0 / 32.0, 1e-12},
      {"sequential welfare (published 0.653)", w, 0.653, 0.0, "info"},
      {"beats 2-bit simultaneous 35/54", w, 35.0 / 54.0, 0.0, "gt"},
      {"flattened welfare", wf, w, 1e-12},
      {"flattened bits vs n m - n (n - 3) / 2", static_cast<double>(f.total_bits),
       static_cast<double>(f.bit_bound), 0.0, "le"},
  };
}

const std::map<std::string, std::function<Rows(const ReproOptions&)>>& table() {
  static const std::map<std::string, std::function<Rows(const ReproOptions&)>> t{
      {"example1", example1},
      {"centered-cuts", centered_cuts},
      {"profit-1bit", profit_1bit},
      {"profit-n-bidders", profit_n_bidders},
      {"loss-vs-k", loss_vs_k},
      {"loss-vs-n", loss_vs_n},
      {"symmetric-1bit", symmetric_1bit},
      {"sequential", sequential_example},
  };
  return t;
}

}  // namespace

std::vector<std::string> reproduce_ids() {
  std::vector<std::string> out;
  for (const auto& [id, fn] : table()) out.push_back(id);
  return out;
}

std::vector<ReproRow> reproduce(const std::string& id, const ReproOptions& opt) {
  auto it = table().find(id);
  if (it == table().end()) {
    std::string list;
    for (const auto& name : reproduce_ids()) list += (list.empty() ? "" : ", ") + name;
    throw ArgumentError("unknown reproduction id '" + id + "'; available: " + list);
  }
  if (opt.kmax < 2 || opt.nmax < 2) throw ArgumentError("--kmax and --nmax must be >= 2");
  return it->second(opt);
}

}  // namespace bcauction::tools
