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

// Sequential mechanisms with bounded messages, as game trees.
//
// A history is written as the comma-separated list of messages sent so far;
// the root is the empty string.

#ifndef BCAUCTION_SEQUENTIAL_H_
#define BCAUCTION_SEQUENTIAL_H_

#include <map>
#include <string>
#include <vector>

#include "bcauction/distributions.h"
#include "bcauction/evaluation.h"
#include "bcauction/mechanism.h"
#include "json.hpp"

namespace bcauction {

struct SequentialNode {
  int bidder = -1;  // acting bidder; -1 for a leaf
  int bits = 0;     // message size; the node has 2^bits children
  std::vector<SequentialNode> children;

  int winner = 0;  // leaves: 0 is the seller, i + 1 is bidder i
  std::vector<double> payments;  // leaves: charged to bidder i if i wins

  bool is_leaf() const { return bidder < 0; }
};

struct SequentialMechanismTree {
  int n = 0;
  SequentialNode root;

  // Throws StructuralError on malformed nodes.
  void validate() const;
  // Largest number of bits sent along any play.
  int communication_requirement() const;
};

// Threshold cuts per history where some bidder acts.
using SequentialStrategy = std::map<std::string, ThresholdVector>;

std::string child_history(const std::string& history, int message);

nlohmann::json tree_to_json(const SequentialMechanismTree& t);
SequentialMechanismTree tree_from_json(const nlohmann::json& j);
nlohmann::json strategy_to_json(const SequentialStrategy& s);
SequentialStrategy strategy_from_json(const nlohmann::json& j);

// Exact sums over leaves. Each bidder's set of consistent values is an
// interval, so a leaf's probability is a product of interval masses.
// Histories of zero probability need no strategy.
CellSums sequential_cell_sums(const SequentialMechanismTree& t,
                              const SequentialStrategy& s,
                              const std::vector<ValueDistribution>& dists,
                              double v0, bool with_virtual);

EvaluationReport evaluate_sequential(const SequentialMechanismTree& t,
                                     const SequentialStrategy& s,
                                     const std::vector<ValueDistribution>& dists,
                                     double v0);

// Bayesian-Nash threshold profile by backward induction on utilities, sweeping
// deepest nodes first until no cut moves. Requires each bidder to act at most
// once along any play. Ties go to the lower message; indifferent bidders get
// equally spaced cuts.
SequentialStrategy backward_induction_best_response(
    const SequentialMechanismTree& t, const std::vector<ValueDistribution>& dists);

struct FlattenResult {
  SimultaneousMechanism mechanism{{1}, 0.0};
  StrategyProfile strategies;       // union of each bidder's cuts
  std::vector<int> message_counts;  // per bidder
  std::vector<int> bits;            // ceil(log2(count)) per bidder
  int total_bits = 0;
  int communication_requirement = 0;
  int bit_bound = 0;                // n m - n (n - 3) / 2
  std::vector<int> count_bounds;    // 2^(m - rank + 2), rank by last message
  bool within_bounds = true;
};

// Each bidder reports the cell of the union of her cuts; the outcome of a
// profile is read off by replaying the tree. Throws StructuralError if two
// points of one cell replay to different leaves. With `monotone` the result
// is reassigned to the bidder of highest conditional mean and repriced.
FlattenResult flatten_to_simultaneous(const SequentialMechanismTree& t,
                                      const SequentialStrategy& s,
                                      const std::vector<ValueDistribution>& dists,
                                      double v0, bool monotone = false);

// One-round tree: bidder 0 speaks first, then bidder 1, and so on; the cuts
// of every node are the bidder's simultaneous cuts. Needs deterministic
// allocations and power-of-two bid counts.
std::pair<SequentialMechanismTree, SequentialStrategy> tree_from_simultaneous(
    const SimultaneousMechanism& m, const StrategyProfile& s);

// Two bidders, one bit each: Alice first, then Bob knowing her bit. Bob
// wins on 1 and pays 1/4 or 3/4; otherwise Alice wins and pays 0 or
// `alice_payment`.
SequentialMechanismTree alice_bob_example_tree(double alice_payment = 1.0 / 3.0);

}  // namespace bcauction

#endif  // BCAUCTION_SEQUENTIAL_H_
