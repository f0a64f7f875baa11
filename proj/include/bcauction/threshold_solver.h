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

// Optimal threshold systems for priority games.
//
// Two-bidder solvers use A for bidder 0 and B for bidder 1, with B holding
// the higher priority; x are A's cuts and y are B's cuts.

#ifndef BCAUCTION_THRESHOLD_SOLVER_H_
#define BCAUCTION_THRESHOLD_SOLVER_H_

#include <optional>
#include <utility>
#include <vector>

#include "bcauction/distributions.h"
#include "bcauction/mechanism.h"

namespace bcauction {

struct SolverConfig {
  double abs_tol = 1e-12;
  int max_iter = 200;
  // Outer bracket for the bisection variable; defaults to the open support.
  std::optional<std::pair<double, double>> bracket;
};

struct MutuallyCenteredPair {
  ThresholdVector x;
  ThresholdVector y;
  double residual = 0.0;
  bool modified = false;
};

// E(v | a <= v <= b) restricted to the support of d; the midpoint of [a, b]
// when the restriction carries no mass.
double clipped_mean(const ValueDistribution& d, double a, double b);

// Largest violation of the centering equations. For modified pairs the first
// A cut is checked against v0 and the first B cut against the seller-adjusted
// mean.
double centering_residual(const ValueDistribution& dA,
                          const ValueDistribution& dB,
                          const MutuallyCenteredPair& p, double v0 = 0.0);

MutuallyCenteredPair solve_mutually_centered(const ValueDistribution& dA,
                                             const ValueDistribution& dB, int k,
                                             const SolverConfig& cfg = {});

// Thresholds for the modified game with the first A cut pinned to v0. When
// v0 does not exceed the lower support end the seller never keeps the item
// and the unmodified solution is returned.
MutuallyCenteredPair solve_mpg_thresholds(const ValueDistribution& dA,
                                          const ValueDistribution& dB, int k,
                                          double v0,
                                          const SolverConfig& cfg = {});

// Uniform bidders on [lo, hi]: x_i = (2i-1)/(2k-1), y_i = 2i/(2k-1).
MutuallyCenteredPair closed_form_uniform_welfare_2bidder(int k, double lo = 0.0,
                                                         double hi = 1.0);
// Uniform bidders on [0, 1] with v0 = 0; modified game.
MutuallyCenteredPair closed_form_uniform_profit_2bidder(int k);

struct NBidderSolution {
  std::vector<double> cuts;  // bidder i's single interior cut, priority 0 < 1 < ...
  bool modified = false;
  double welfare = 0.0;
  double residual = 0.0;
};

// i.i.d. bidders, two bids each. Unmodified game: cuts from the fixed point in
// the top cut. Modified game: y_1 = v0 and y_{m+1} = (1 - F(y_m)) E(v | v >=
// y_m) + F(y_m) y_m for m = 1..n-1.
NBidderSolution solve_n_bidder_pg(const ValueDistribution& d, int n,
                                  const SolverConfig& cfg = {});
NBidderSolution solve_n_bidder_mpg(const ValueDistribution& d, int n, double v0);
// Expected welfare of the two-bid priority game with these cuts.
double n_bidder_2bid_welfare(const ValueDistribution& d,
                             const std::vector<double>& cuts, bool modified,
                             double v0);
// The better of the two.
NBidderSolution solve_n_bidder_welfare_2bid(const ValueDistribution& d, int n,
                                            double v0,
                                            const SolverConfig& cfg = {});

// Symmetric two-bid game with uniform tie-splitting: the common cut x
// maximizing F(x)^n E(v | v <= x) + (1 - F(x)^n) E(v | v >= x).
double symmetric_threshold_n_2bid(const ValueDistribution& d, int n);
double symmetric_2bid_welfare(const ValueDistribution& d, int n, double x);

// Common-cut modified game built from equal-mass quantiles of each bidder.
// Requires k >= 2n.
PrioritySpec quantile_mechanism(const std::vector<ValueDistribution>& dists,
                                int k, double v0);

ThresholdVector equally_spaced_thresholds(int k, double lo = 0.0,
                                          double hi = 1.0);

enum class Objective { kWelfare, kProfit };

struct SymmetricOneBit {
  SimultaneousMechanism mechanism;
  StrategyProfile cuts;
  double value;
};

// Best symmetric 1-bit mechanisms for two uniform [0, 1] bidders.
SymmetricOneBit symmetric_optimal_1bit(Objective objective);

// Symmetric k-bid game with common cuts and uniform tie-splitting.
SimultaneousMechanism symmetric_tie_split_game(int n, const ThresholdVector& t,
                                               double v0);

}  // namespace bcauction

#endif  // BCAUCTION_THRESHOLD_SOLVER_H_
