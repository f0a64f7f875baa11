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


#include <cmath>
#include <random>

#include "bcauction/errors.h"
#include "bcauction/evaluation.h"
#include "bcauction/sequential.h"
#include "doctest.h"
#include "oracles.h"

using namespace bcauction;

namespace {

const ValueDistribution kUnit = ValueDistribution::Uniform(0.0, 1.0);
const std::vector<ValueDistribution> kTwo{kUnit, kUnit};

ThresholdVector tv(std::vector<double> c) { return ThresholdVector(std::move(c)); }

SequentialStrategy example_play() {
  return {{"", tv({0, 0.5, 1})}, {"0", tv({0, 0.25, 1})}, {"1", tv({0, 0.75, 1})}};
}

SequentialNode leaf(int winner, std::vector<double> p) {
  SequentialNode l;
  l.winner = winner;
  l.payments = std::move(p);
  return l;
}

// Random tree of binary messages; bidders may speak repeatedly.
SequentialNode random_node(std::mt19937_64& eng, int n, int depth) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (depth == 0 || u(eng) < 0.2) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto& x : p) x = 0.5 * u(eng);
    return leaf(static_cast<int>(u(eng) * (n + 1)), p);
  }
  SequentialNode node;
  node.bidder = static_cast<int>(u(eng) * n);
  node.bits = u(eng) < 0.7 ? 1 : 2;
  for (int c = 0; c < (1 << node.bits); ++c) node.children.push_back(random_node(eng, n, depth - 1));
  return node;
}

void random_strategy(std::mt19937_64& eng, const SequentialNode& node, const std::string& h,
                     SequentialStrategy& s) {
  if (node.is_leaf()) return;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> c{0.0, 1.0};
  for (int j = 1; j < (1 << node.bits); ++j) c.push_back(u(eng));
  std::sort(c.begin(), c.end());
  s[h] = tv(c);
  for (std::size_t m = 0; m < node.children.size(); ++m) {
    random_strategy(eng, node.children[m], child_history(h, static_cast<int>(m)), s);
  }
}

}  // namespace

TEST_CASE("example tree under its equilibrium play") {
  const auto t = alice_bob_example_tree();
  t.validate();
  CHECK(t.communication_requirement() == 2);
  const auto r = evaluate_sequential(t, example_play(), kTwo, 0.0);
  const double want = 0.5 * (0.75 * 0.625 + 0.25 * 0.25) + 0.5 * (0.25 * 0.875 + 0.75 * 0.75);
  CHECK(want == doctest::Approx(21.0 / 32));
  CHECK(r.expected_welfare == doctest::Approx(21.0 / 32).epsilon(1e-14));
  CHECK(r.expected_welfare > 35.0 / 54);
  const double profit = 0.5 * 0.75 * 0.25 + 0.5 * (0.25 * 0.75 + 0.75 / 3);
  CHECK(r.expected_profit == doctest::Approx(profit).epsilon(1e-14));
}

TEST_CASE("backward induction on the example tree") {
  const auto s = backward_induction_best_response(alice_bob_example_tree(), kTwo);
  CHECK(s.at("")[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.at("0")[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.at("1")[1] == doctest::Approx(0.75).epsilon(1e-12));

  // Alice: v / 4 against 3 (v - 0.4) / 4.
  const auto p = backward_induction_best_response(alice_bob_example_tree(0.4), kTwo);
  CHECK(p.at("")[1] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("indifferent bidders get equally spaced cuts") {
  SequentialMechanismTree t;
  t.n = 2;
  t.root.bidder = 0;
  t.root.bits = 2;
  for (int c = 0; c < 4; ++c) t.root.children.push_back(leaf(2, {0.0, 0.0}));
  const auto s = backward_induction_best_response(t, kTwo);
  CHECK(s.at("") == equally_spaced_thresholds(4));
}

TEST_CASE("backward induction needs one move per bidder") {
  SequentialMechanismTree t;
  t.n = 1;
  t.root.bidder = 0;
  t.root.bits = 1;
  SequentialNode again;
  again.bidder = 0;
  again.bits = 1;
  again.children = {leaf(0, {0.0}), leaf(1, {0.2})};
  t.root.children = {leaf(0, {0.0}), again};
  CHECK_THROWS_AS(backward_induction_best_response(t, {kUnit}), ArgumentError);
}

TEST_CASE("degenerate tree") {
  SequentialMechanismTree t;
  t.n = 2;
  t.root.bidder = 0;
  t.root.bits = 2;
  for (int c = 0; c < 4; ++c) t.root.children.push_back(leaf(1, {0.0, 0.0}));
  const SequentialStrategy s{{"", equally_spaced_thresholds(4)}};
  CHECK(evaluate_sequential(t, s, kTwo, 0.0).expected_welfare == doctest::Approx(0.5));
  const auto f = flatten_to_simultaneous(t, s, kTwo, 0.0);
  CHECK(f.message_counts[1] == 1);
}

TEST_CASE("flattening the example tree") {
  const auto t = alice_bob_example_tree();
  const auto f = flatten_to_simultaneous(t, example_play(), kTwo, 0.0);
  CHECK(f.message_counts == std::vector<int>{2, 3});
  CHECK(f.strategies[0] == tv({0, 0.5, 1}));
  CHECK(f.strategies[1] == tv({0, 0.25, 0.75, 1}));
  CHECK(f.total_bits == 3);
  CHECK(f.bit_bound == 5);
  CHECK(f.within_bounds);
  CHECK(expected_welfare_exact(f.mechanism, f.strategies, kTwo, 0.0) ==
        doctest::Approx(21.0 / 32).epsilon(1e-14));
  CHECK(expected_welfare_exact(f.mechanism, f.strategies, kTwo, 0.0) ==
        doctest::Approx(oracle::cell_sums(f.mechanism, f.strategies, kTwo, 0.0).welfare));

  const auto mono = flatten_to_simultaneous(t, example_play(), kTwo, 0.0, true);
  CHECK(is_monotone(mono.mechanism));
}

TEST_CASE("property: flattening preserves welfare and profit") {
  std::mt19937_64 eng(41);
  const auto tri = oracle::triangular();
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    SequentialMechanismTree t;
    t.n = 2 + trial % 2;
    t.root = random_node(eng, t.n, 4);
    if (t.root.is_leaf()) continue;
    SequentialStrategy s;
    random_strategy(eng, t.root, "", s);
    std::vector<ValueDistribution> d;
    for (int i = 0; i < t.n; ++i) d.push_back(i % 2 ? tri : kUnit);
    const double v0 = 0.1;
    const auto tree = sequential_cell_sums(t, s, d, v0, false);
    const auto f = flatten_to_simultaneous(t, s, d, v0);
    const auto flat = exact_cell_sums(f.mechanism, f.strategies, d, v0, false);
    CHECK(std::abs(tree.welfare - flat.welfare) < 1e-12);
    CHECK(std::abs(tree.profit - flat.profit) < 1e-12);
    CHECK(f.within_bounds);
    for (std::size_t i = 0; i < f.message_counts.size(); ++i) {
      CHECK(f.message_counts[i] <= f.count_bounds[i]);
    }
    CHECK(f.total_bits <= f.bit_bound);
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("a one-round tree flattens back to its table") {
  const auto spec = two_bidder_spec(tv({0, 1.0 / 7, 3.0 / 7, 5.0 / 7, 1}),
                                    tv({0, 2.0 / 7, 4.0 / 7, 6.0 / 7, 1}), false, 0.0);
  const auto m = build_game(spec);
  const auto [t, s] = tree_from_simultaneous(m, spec.thresholds);
  CHECK(t.communication_requirement() == 4);
  const auto f = flatten_to_simultaneous(t, s, kTwo, 0.0);
  REQUIRE(f.mechanism.bid_sizes() == m.bid_sizes());
  CHECK(f.strategies == spec.thresholds);
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    CHECK(f.mechanism.weights(idx) == m.weights(idx));
    for (int i = 0; i < 2; ++i) {
      CHECK(f.mechanism.payment(idx, i) == doctest::Approx(m.payment(idx, i)));
    }
  }
  const auto coin = symmetric_optimal_1bit(Objective::kWelfare);
  CHECK_THROWS_AS(tree_from_simultaneous(coin.mechanism, coin.cuts), ArgumentError);
}

TEST_CASE("tree and strategy JSON") {
  const auto t = alice_bob_example_tree();
  const auto j = tree_to_json(t);
  CHECK(j.at("root").at("bidder") == 0);
  const auto back = tree_from_json(nlohmann::json::parse(j.dump()));
  CHECK(tree_to_json(back) == j);
  CHECK(tree_from_json(j.at("root")).communication_requirement() == 2);

  const auto sj = strategy_to_json(example_play());
  CHECK(strategy_from_json(nlohmann::json::parse(sj.dump())) == example_play());

  CHECK_THROWS_AS(tree_from_json(nlohmann::json::parse(R"({"bidder": 0, "bits": 1,
      "children": [{"winner": 1, "payments": [0, 0]}]})")),
                  StructuralError);
  CHECK_THROWS_AS(evaluate_sequential(t, {{"", tv({0, 0.5, 1})}}, kTwo, 0.0), ArgumentError);
}
