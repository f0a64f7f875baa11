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

// Profit maximization by way of the welfare problem over virtual values:
// solve for welfare where every bidder's value is replaced by its virtual
// value, then map each cut c back to the inverse virtual value of c.

#ifndef BCAUCTION_PROFIT_REDUCTION_H_
#define BCAUCTION_PROFIT_REDUCTION_H_

#include <memory>
#include <vector>

#include "bcauction/distributions.h"
#include "bcauction/mechanism.h"
#include "bcauction/threshold_solver.h"

namespace bcauction {

struct VirtualModel {
  std::vector<std::shared_ptr<const VirtualTransform>> transforms;
  std::vector<ValueDistribution> virtual_dists;
  double alpha = 0.0;  // lowest virtual value over all bidders
  double beta = 0.0;   // highest virtual value over all bidders
  double virtual_v0 = 0.0;
};

// Throws NotRegular("reduction requires regularity") on an irregular law.
VirtualModel to_virtual_model(const std::vector<ValueDistribution>& dists,
                              double v0);

struct ProfitSolution {
  PrioritySpec spec;          // true-value cuts
  PrioritySpec virtual_spec;  // the welfare solution in virtual space
  double virtual_surplus = 0.0;
};

// Two bidders with any k, or any n with k = 2 (identical laws required for
// n >= 3). Other combinations throw CharacterizationOpen.
ProfitSolution solve_profit_optimal(const std::vector<ValueDistribution>& dists,
                                    int k, double v0,
                                    const SolverConfig& cfg = {});

struct WelfareSolution {
  PrioritySpec spec;
  double welfare = 0.0;
};

// Welfare counterpart of solve_profit_optimal: both priority orders and the
// modified game for two bidders, the two-bid ladder for identical laws.
// Throws CharacterizationOpen otherwise.
WelfareSolution solve_welfare_optimal(const std::vector<ValueDistribution>& dists,
                                      int k, double v0,
                                      const SolverConfig& cfg = {});

double expected_virtual_surplus(const SimultaneousMechanism& m,
                                const StrategyProfile& s,
                                const std::vector<ValueDistribution>& dists,
                                double v0);

}  // namespace bcauction

#endif  // BCAUCTION_PROFIT_REDUCTION_H_
