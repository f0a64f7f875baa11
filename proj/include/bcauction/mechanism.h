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

// Simultaneous bounded-communication mechanisms and priority games.
//
// Winner index 0 is the seller; bidder i (0-based) is winner index i + 1.
// Bid profiles are indexed little-endian: bidder 0 varies fastest.

#ifndef BCAUCTION_MECHANISM_H_
#define BCAUCTION_MECHANISM_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcauction/distributions.h"

namespace bcauction {

// Nondecreasing cut points t_0 <= ... <= t_k; bid j covers [t_j, t_{j+1}).
class ThresholdVector {
 public:
  ThresholdVector() = default;
  explicit ThresholdVector(std::vector<double> cuts);

  int bids() const { return static_cast<int>(cuts_.size()) - 1; }
  double operator[](std::size_t j) const { return cuts_[j]; }
  const std::vector<double>& cuts() const { return cuts_; }
  double lo() const { return cuts_.front(); }
  double hi() const { return cuts_.back(); }

  // The top cut belongs to the last bid.
  int bid_of(double v) const;

  bool operator==(const ThresholdVector&) const = default;

 private:
  std::vector<double> cuts_;
};

int bid_of(const ThresholdVector& t, double v);

using StrategyProfile = std::vector<ThresholdVector>;

class SimultaneousMechanism {
 public:
  // Every profile starts with the seller keeping the item.
  SimultaneousMechanism(std::vector<int> bid_sizes, double v0);

  int n() const { return static_cast<int>(bid_sizes_.size()); }
  const std::vector<int>& bid_sizes() const { return bid_sizes_; }
  double v0() const { return v0_; }
  std::size_t profile_count() const { return profile_count_; }

  std::size_t index_of(const std::vector<int>& bids) const;
  std::vector<int> profile_of(std::size_t index) const;

  // Weights over winner indices 0..n.
  const std::vector<double>& weights(std::size_t index) const {
    return alloc_[index];
  }
  double weight(std::size_t index, int winner) const {
    return alloc_[index][static_cast<std::size_t>(winner)];
  }
  // Payment charged to bidder i when i wins at this profile.
  const std::vector<double>& payments(std::size_t index) const {
    return pay_[index];
  }
  double payment(std::size_t index, int bidder) const {
    return pay_[index][static_cast<std::size_t>(bidder)];
  }

  void set_weights(std::size_t index, std::vector<double> w);
  void set_winner(std::size_t index, int winner);
  void set_payments(std::size_t index, std::vector<double> p);
  void set_payment(std::size_t index, int bidder, double p);

  // Cuts the mechanism was generated from, when known.
  const std::optional<StrategyProfile>& cuts() const { return cuts_; }
  void set_cuts(StrategyProfile s) { cuts_ = std::move(s); }

  // Throws StructuralError on negative weights, sums away from 1, or
  // mismatched shapes.
  void validate() const;

  // Human-readable notes about payments the priority rule cannot justify.
  std::vector<std::string> payment_warnings() const;

 private:
  std::vector<int> bid_sizes_;
  double v0_;
  std::size_t profile_count_;
  std::vector<std::vector<double>> alloc_;
  std::vector<std::vector<double>> pay_;
  std::optional<StrategyProfile> cuts_;
};

struct PrioritySpec {
  std::vector<int> priority_order;  // last entry has the highest priority
  std::vector<ThresholdVector> thresholds;
  bool modified = false;
  double v0 = 0.0;
};

// Both throw ArgumentError on mismatched inputs or the wrong `modified` flag.
SimultaneousMechanism build_priority_game(const PrioritySpec& spec);
SimultaneousMechanism build_modified_priority_game(const PrioritySpec& spec);
// Dispatches on spec.modified.
SimultaneousMechanism build_game(const PrioritySpec& spec);

// Two bidders with B (index 1) above A (index 0).
PrioritySpec two_bidder_spec(const ThresholdVector& a, const ThresholdVector& b,
                             bool modified, double v0);

// Checks that a strategy profile fits the mechanism's bid sizes.
void check_strategies(const SimultaneousMechanism& m, const StrategyProfile& s);

bool is_monotone(const SimultaneousMechanism& m, double tol = 1e-12);
bool is_deterministic(const SimultaneousMechanism& m, double tol = 1e-12);

// Two bidders only: true if no two rows and no two columns of the winner
// table coincide.
bool rows_and_columns_distinct(const SimultaneousMechanism& m);

// Threshold payments. A deterministic winner pays the cut of the smallest own
// bid that still wins against b_{-j}; with randomized weights q_l the winner
// pays sum_l (q_l - q_{l-1}) t_l / q_{b_j}.
void assign_threshold_payments(SimultaneousMechanism& m,
                               const StrategyProfile& s);

// Reallocates each profile to the bidder with the largest conditional mean
// of the cell (the seller if v0 is larger), then reprices.
SimultaneousMechanism monotonize(const SimultaneousMechanism& m,
                                 const StrategyProfile& s,
                                 const std::vector<ValueDistribution>& dists);

}  // namespace bcauction

#endif  // BCAUCTION_MECHANISM_H_
