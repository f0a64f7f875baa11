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

// Expected welfare, profit and virtual surplus of mechanisms played with
// threshold strategies, the unbounded-communication benchmarks, and incentive
// checks.

#ifndef BCAUCTION_EVALUATION_H_
#define BCAUCTION_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcauction/distributions.h"
#include "bcauction/mechanism.h"
#include "bcauction/threshold_solver.h"
#include "json.hpp"

namespace bcauction {

struct EvaluationReport {
  double expected_welfare = 0.0;
  double expected_profit = 0.0;
  std::optional<double> expected_virtual_surplus;  // regular laws only
  double benchmark_welfare = 0.0;
  std::optional<double> benchmark_profit;
  double welfare_loss = 0.0;
  std::optional<double> profit_loss;
  std::string method = "exact";  // "exact" or "monte-carlo"
  std::uint64_t mc_samples = 0;
  std::optional<double> mc_stderr;         // of the welfare estimate
  std::optional<double> mc_profit_stderr;  // of the profit estimate
  std::string strategies;  // description of the profile evaluated
};

nlohmann::json report_to_json(const EvaluationReport& r);
// Header line plus one row.
std::string report_to_csv(const EvaluationReport& r);

struct CellSums {
  double welfare = 0.0;
  double profit = 0.0;
  std::optional<double> virtual_surplus;
};

// Sum over bid profiles of profile probability times the winner's
// conditional mean (welfare), payment (profit) and conditional virtual value.
// The seller contributes v0 to all three. Cells of zero probability are
// skipped.
CellSums exact_cell_sums(const SimultaneousMechanism& m, const StrategyProfile& s,
                         const std::vector<ValueDistribution>& dists, double v0,
                         bool with_virtual);

double expected_welfare_exact(const SimultaneousMechanism& m,
                              const StrategyProfile& s,
                              const std::vector<ValueDistribution>& dists,
                              double v0);
double expected_profit_exact(const SimultaneousMechanism& m,
                             const StrategyProfile& s,
                             const std::vector<ValueDistribution>& dists,
                             double v0);

// Closed-form sums for (modified) priority games played with their own cuts;
// cost is polynomial in n and k, so it covers n far beyond full enumeration.
CellSums evaluate_priority(const PrioritySpec& spec,
                           const std::vector<ValueDistribution>& dists,
                           bool with_virtual);

// E[max(v_1, ..., v_n, v0)] for welfare; the same over virtual values for
// profit. Throws NotRegular for profit with an irregular law.
double benchmark_unbounded(const std::vector<ValueDistribution>& dists,
                           double v0, Objective objective);
double benchmark_unbounded(const ValueDistribution& d, int n, double v0,
                           Objective objective);

EvaluationReport evaluate_exact(const SimultaneousMechanism& m,
                                const StrategyProfile& s,
                                const std::vector<ValueDistribution>& dists,
                                double v0);
EvaluationReport evaluate_priority_report(
    const PrioritySpec& spec, const std::vector<ValueDistribution>& dists);

struct MonteCarloConfig {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency; 1: serial
};

// Values are drawn by inverse CDF from per-chunk generators seeded by
// (seed, chunk index); chunk results merge in chunk order, so the thread
// count never changes the output.
EvaluationReport monte_carlo_evaluate(const SimultaneousMechanism& m,
                                      const StrategyProfile& s,
                                      const std::vector<ValueDistribution>& dists,
                                      double v0, const MonteCarloConfig& cfg);

struct IncentiveCheck {
  bool pass = true;
  double worst_violation = 0.0;
  int bidder = -1;
  double value = 0.0;
  std::vector<int> profile;
};

// For every bidder, every grid value (plus each cut +- 1e-6) and every pure
// opponent profile, the prescribed bid must be within 1e-9 of the best bid.
IncentiveCheck verify_dominant_strategy(const SimultaneousMechanism& m,
                                        const StrategyProfile& s,
                                        const std::vector<ValueDistribution>& dists,
                                        int value_grid = 200);

// Winners never pay more than the bottom of their bid cell; losers pay 0.
IncentiveCheck verify_ex_post_ir(const SimultaneousMechanism& m,
                                 const StrategyProfile& s,
                                 const std::vector<ValueDistribution>& dists);

enum class ResponseObjective { kWelfare, kUtility, kVirtualSurplus };

// Linear payoff h(m) v + t(m) of bidder `bidder` for each own bid m, given
// the opponents' strategies in `s` (the bidder's own entry is ignored).
struct BidLines {
  std::vector<double> h;
  std::vector<double> t;
};
BidLines bid_lines(const SimultaneousMechanism& m, const StrategyProfile& s,
                   const std::vector<ValueDistribution>& dists, int bidder,
                   ResponseObjective objective);

// Breakpoints of the upper envelope of the lines on [lo, hi]; ties go to the
// lower bid. Identical lines give equally spaced cuts. Throws StructuralError
// if the best bid is not nondecreasing in v.
ThresholdVector envelope_thresholds(const BidLines& lines, double lo, double hi);

ThresholdVector best_response_thresholds(
    const SimultaneousMechanism& m, const StrategyProfile& s,
    const std::vector<ValueDistribution>& dists, int bidder,
    ResponseObjective objective);

}  // namespace bcauction

#endif  // BCAUCTION_EVALUATION_H_
