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

// Brute-force ground truth for two bidders: every monotone deterministic
// allocation table, each with globally optimized threshold strategies.
//
// A table is stored by its row prefixes: in row i (A bids i) A wins against
// B's bids 0..L_i - 1 and B wins the rest, with L nondecreasing.

#ifndef BCAUCTION_ORACLE_H_
#define BCAUCTION_ORACLE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "bcauction/distributions.h"
#include "bcauction/mechanism.h"
#include "bcauction/threshold_solver.h"
#include "json.hpp"

namespace bcauction {

struct AllocationTable {
  std::vector<int> prefix;  // L_i for each A bid
  bool seller_at_zero = false;
  bool diagonal_split = false;  // 1/2-1/2 on cells (i, i)
  SimultaneousMechanism mechanism;
  std::string describe() const;
};

struct MechanismFamily {
  int n = 2;
  std::vector<int> bid_sizes;
  std::vector<AllocationTable> enumeration;
};

inline constexpr int kOracleMaxBids = 4;

// Throws BudgetError when either bid count exceeds kOracleMaxBids.
MechanismFamily enumerate_monotone_2bidder(int k, bool allow_seller);
MechanismFamily enumerate_monotone_2bidder(int kA, int kB, bool allow_seller);

struct OptimizedCuts {
  StrategyProfile cuts;
  double value = 0.0;
};

// Welfare, or expected virtual surplus for profit, of a two-bidder table.
double oracle_objective(const SimultaneousMechanism& m, const StrategyProfile& s,
                        const std::vector<ValueDistribution>& dists, double v0,
                        Objective objective);

// Coordinate ascent of exact best responses from the equally spaced start
// and `restarts` random starts; returns the best end point.
OptimizedCuts optimize_thresholds(const SimultaneousMechanism& m,
                                  const std::vector<ValueDistribution>& dists,
                                  double v0, Objective objective,
                                  int restarts = 32, std::uint64_t seed = 1);

// Exhaustive grid over sorted cut vectors with `points` values per cut,
// followed by coordinate ascent from the best grid point when `polish`.
OptimizedCuts grid_search_thresholds(const SimultaneousMechanism& m,
                                     const std::vector<ValueDistribution>& dists,
                                     double v0, Objective objective, int points,
                                     bool polish);

struct CertificateEntry {
  int allocation_id = 0;
  std::string description;
  bool priority_game = false;
  StrategyProfile optimal_cuts;
  double optimal_value = 0.0;
};

struct Certificate {
  std::vector<CertificateEntry> entries;
  int argmax_id = -1;
  double best_value = 0.0;
  double solver_value = 0.0;
  StrategyProfile solver_cuts;
  double cut_error = 0.0;  // optimizer vs solver cuts of the winning game
  bool pass = false;
  std::string report;
};

// Optimizes every table of enumerate_monotone_2bidder(k, true) plus a
// diagonal-split variant of each, and checks that a (modified) priority game
// attains the maximum with the threshold solver's cuts and value.
Certificate certify_2bidder_optimality(int k,
                                       const std::vector<ValueDistribution>& dists,
                                       double v0, Objective objective,
                                       int restarts = 32);

nlohmann::json certificate_to_json(const Certificate& c);

// Which (modified) priority game a table is, if any: +1 when B has priority,
// -1 when A has priority, 0 otherwise.
int priority_game_orientation(const AllocationTable& t, int kB);

}  // namespace bcauction

#endif  // BCAUCTION_ORACLE_H_
