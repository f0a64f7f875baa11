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

#include "bcauction/sequential.h"

#include <algorithm>
#include <cmath>
#include <memory>

#include "bcauction/errors.h"

namespace bcauction {

namespace {

using Interval = std::pair<double, double>;

constexpr int kMaxBits = 16;

void validate_node(const SequentialNode& node, int n, const std::string& history) {
  if (node.is_leaf()) {
    if (node.winner < 0 || node.winner > n) {
      throw StructuralError("leaf '" + history + "' has winner out of range");
    }
    if (!node.payments.empty() && static_cast<int>(node.payments.size()) != n) {
      throw StructuralError("leaf '" + history + "' needs one payment per bidder");
    }
    for (double p : node.payments) {
      if (!std::isfinite(p)) throw StructuralError("leaf '" + history + "' has a bad payment");
    }
    return;
  }
  if (node.bidder >= n) throw StructuralError("node '" + history + "' names no bidder");
  if (node.bits < 1 || node.bits > kMaxBits) {
    throw StructuralError("node '" + history + "' must send 1 to 16 bits");
  }
  if (node.children.size() != (std::size_t{1} << node.bits)) {
    throw StructuralError("node '" + history + "' needs 2^bits children");
  }
  for (std::size_t c = 0; c < node.children.size(); ++c) {
    validate_node(node.children[c], n, child_history(history, static_cast<int>(c)));
  }
}

int depth_bits(const SequentialNode& node) {
  if (node.is_leaf()) return 0;
  int best = 0;
  for (const auto& c : node.children) best = std::max(best, depth_bits(c));
  return node.bits + best;
}

double leaf_payment(const SequentialNode& leaf, int bidder) {
  if (leaf.payments.empty()) return 0.0;
  return leaf.payments[static_cast<std::size_t>(bidder)];
}

const ThresholdVector& strategy_at(const SequentialStrategy& s, const std::string& h,
                                   const SequentialNode& node) {
  auto it = s.find(h);
  if (it == s.end()) throw ArgumentError("no strategy at history '" + h + "'");
  if (it->second.bids() != static_cast<int>(node.children.size())) {
    throw ArgumentError("strategy at history '" + h + "' has the wrong number of cuts");
  }
  return it->second;
}

void check_dists(const SequentialMechanismTree& t,
                 const std::vector<ValueDistribution>& dists) {
  t.validate();
  if (static_cast<int>(dists.size()) != t.n) {
    throw ArgumentError("need one distribution per bidder");
  }
}

std::vector<Interval> supports(const std::vector<ValueDistribution>& dists) {
  std::vector<Interval> out;
  for (const auto& d : dists) out.emplace_back(d.lo(), d.hi());
  return out;
}

// Calls visit(node, history, intervals, prob) on every node reached with
// positive probability.
template <typename Visit>
void walk(const SequentialNode& node, const std::string& history,
          std::vector<Interval>& iv, double prob, const SequentialStrategy& s,
          const std::vector<ValueDistribution>& dists, Visit&& visit) {
  if (!(prob > 0.0)) return;
  visit(node, history, iv, prob);
  if (node.is_leaf()) return;
  const auto i = static_cast<std::size_t>(node.bidder);
  const ThresholdVector& cuts = strategy_at(s, history, node);
  const Interval saved = iv[i];
  const double base = dists[i].mass(saved.first, saved.second);
  for (int c = 0; c < cuts.bids(); ++c) {
    const double lo = std::max(saved.first, cuts[static_cast<std::size_t>(c)]);
    const double hi = std::min(saved.second, cuts[static_cast<std::size_t>(c) + 1]);
    if (!(hi > lo)) continue;
    iv[i] = {lo, hi};
    walk(node.children[static_cast<std::size_t>(c)], child_history(history, c), iv,
         prob * dists[i].mass(lo, hi) / base, s, dists, visit);
  }
  iv[i] = saved;
}

std::vector<double> dedupe_cuts(std::vector<double> cuts, double lo, double hi) {
  for (double& c : cuts) c = std::clamp(c, lo, hi);
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out;
  for (double c : cuts) {
    if (out.empty() || c - out.back() > 1e-12) out.push_back(c);
  }
  if (out.size() < 2) out = {lo, hi};
  out.back() = hi;
  return out;
}

const SequentialNode& replay(const SequentialNode& root, const SequentialStrategy& s,
                             const std::vector<double>& v) {
  const SequentialNode* node = &root;
  std::string h;
  while (!node->is_leaf()) {
    auto it = s.find(h);
    if (it == s.end()) {
      throw StructuralError("replay reached history '" + h + "' without a strategy");
    }
    const int c = it->second.bid_of(v[static_cast<std::size_t>(node->bidder)]);
    node = &node->children[static_cast<std::size_t>(c)];
    h = child_history(h, c);
  }
  return *node;
}

// Largest count of bits sent before each bidder's last message, over plays.
void last_message_gamma(const SequentialNode& node, int sent, std::vector<int>& last_here,
                        std::vector<int>& best) {
  if (node.is_leaf()) {
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], last_here[i]);
    return;
  }
  const auto i = static_cast<std::size_t>(node.bidder);
  const int saved = last_here[i];
  last_here[i] = sent;
  for (const auto& c : node.children) last_message_gamma(c, sent + node.bits, last_here, best);
  last_here[i] = saved;
}

int ceil_log2(int count) {
  int bits = 0;
  while ((1 << bits) < count) ++bits;
  return bits;
}

SequentialNode leaf(int winner, std::vector<double> payments) {
  SequentialNode l;
  l.winner = winner;
  l.payments = std::move(payments);
  return l;
}

}  // namespace

std::string child_history(const std::string& history, int message) {
  return history.empty() ? std::to_string(message)
                         : history + "," + std::to_string(message);
}

void SequentialMechanismTree::validate() const {
  if (n < 1) throw StructuralError("a tree needs at least one bidder");
  validate_node(root, n, "");
}

int SequentialMechanismTree::communication_requirement() const {
  return depth_bits(root);
}

namespace {

nlohmann::json node_to_json(const SequentialNode& node) {
  if (node.is_leaf()) return {{"winner", node.winner}, {"payments", node.payments}};
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& c : node.children) kids.push_back(node_to_json(c));
  return {{"bidder", node.bidder}, {"bits", node.bits}, {"children", kids}};
}

SequentialNode node_from_json(const nlohmann::json& j, int& n) {
  SequentialNode node;
  if (j.contains("children")) {
    node.bidder = j.at("bidder").get<int>();
    node.bits = j.at("bits").get<int>();
    if (node.bidder < 0) throw StructuralError("bidder index must be nonnegative");
    n = std::max(n, node.bidder + 1);
    for (const auto& c : j.at("children")) node.children.push_back(node_from_json(c, n));
  } else {
    node.winner = j.at("winner").get<int>();
    if (j.contains("payments")) node.payments = j.at("payments").get<std::vector<double>>();
    n = std::max({n, node.winner, static_cast<int>(node.payments.size())});
  }
  return node;
}

}  // namespace

nlohmann::json tree_to_json(const SequentialMechanismTree& t) {
  return {{"n", t.n}, {"root", node_to_json(t.root)}};
}

SequentialMechanismTree tree_from_json(const nlohmann::json& j) {
  SequentialMechanismTree t;
  try {
    int n = 0;
    const bool wrapped = j.contains("root");
    t.root = node_from_json(wrapped ? j.at("root") : j, n);
    t.n = wrapped && j.contains("n") ? j.at("n").get<int>() : n;
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("bad tree JSON: ") + e.what());
  }
  t.validate();
  return t;
}

nlohmann::json strategy_to_json(const SequentialStrategy& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [h, t] : s) j[h] = t.cuts();
  return {{"strategies", j}};
}

SequentialStrategy strategy_from_json(const nlohmann::json& j) {
  SequentialStrategy s;
  try {
    const nlohmann::json& m = j.contains("strategies") ? j.at("strategies") : j;
    for (const auto& [h, cuts] : m.items()) {
      s.emplace(h, ThresholdVector(cuts.get<std::vector<double>>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("bad strategy JSON: ") + e.what());
  }
  return s;
}

CellSums sequential_cell_sums(const SequentialMechanismTree& t,
                              const SequentialStrategy& s,
                              const std::vector<ValueDistribution>& dists,
                              double v0, bool with_virtual) {
  check_dists(t, dists);
  std::vector<std::unique_ptr<VirtualTransform>> virt;
  if (with_virtual) {
    for (const auto& d : dists) {
      auto vt = std::make_unique<VirtualTransform>(d);
      if (!vt->regular()) throw NotRegular("virtual surplus requires regular laws");
      virt.push_back(std::move(vt));
    }
  }
  CellSums out;
  double vs = 0.0;
  auto iv = supports(dists);
  walk(t.root, "", iv, 1.0, s, dists,
       [&](const SequentialNode& node, const std::string&, const std::vector<Interval>& cur,
           double prob) {
         if (!node.is_leaf()) return;
         if (node.winner == 0) {
           out.welfare += prob * v0;
           out.profit += prob * v0;
           vs += prob * v0;
           return;
         }
         const auto i = static_cast<std::size_t>(node.winner - 1);
         const auto [lo, hi] = cur[i];
         const double rest = prob / dists[i].mass(lo, hi);
         out.welfare += rest * dists[i].partial_moment(lo, hi);
         out.profit += prob * leaf_payment(node, node.winner - 1);
         if (with_virtual) vs += rest * virt[i]->partial_moment(lo, hi);
       });
  if (with_virtual) out.virtual_surplus = vs;
  return out;
}

EvaluationReport evaluate_sequential(const SequentialMechanismTree& t,
                                     const SequentialStrategy& s,
                                     const std::vector<ValueDistribution>& dists,
                                     double v0) {
  bool regular = true;
  for (const auto& d : dists) regular = regular && VirtualTransform(d).regular();
  const CellSums c = sequential_cell_sums(t, s, dists, v0, regular);
  EvaluationReport r;
  r.expected_welfare = c.welfare;
  r.expected_profit = c.profit;
  r.expected_virtual_surplus = c.virtual_surplus;
  r.method = "exact";
  r.strategies = "sequential threshold strategies at " + std::to_string(s.size()) +
                 " histories";
  r.benchmark_welfare = benchmark_unbounded(dists, v0, Objective::kWelfare);
  r.welfare_loss = r.benchmark_welfare - r.expected_welfare;
  if (regular) {
    r.benchmark_profit = benchmark_unbounded(dists, v0, Objective::kProfit);
    r.profit_loss = *r.benchmark_profit - r.expected_profit;
  }
  return r;
}

namespace {

struct InternalNode {
  const SequentialNode* node;
  std::string history;
  int depth;
};

void collect_internal(const SequentialNode& node, const std::string& h, int depth,
                      std::vector<int>& acted, std::vector<InternalNode>& out) {
  if (node.is_leaf()) return;
  const auto i = static_cast<std::size_t>(node.bidder);
  if (acted[i]) {
    throw ArgumentError("backward induction needs each bidder to act at most once per play");
  }
  acted[i] = 1;
  out.push_back({&node, h, depth});
  for (std::size_t c = 0; c < node.children.size(); ++c) {
    collect_internal(node.children[c], child_history(h, static_cast<int>(c)), depth + 1,
                     acted, out);
  }
  acted[i] = 0;
}

// Win probability and expected payment of `bidder` below `node`, given the
// other bidders' value intervals.
std::pair<double, double> continuation(const SequentialNode& node, const std::string& h,
                                       int bidder, std::vector<Interval>& iv,
                                       const SequentialStrategy& s,
                                       const std::vector<ValueDistribution>& dists) {
  if (node.is_leaf()) {
    if (node.winner != bidder + 1) return {0.0, 0.0};
    return {1.0, leaf_payment(node, bidder)};
  }
  const auto j = static_cast<std::size_t>(node.bidder);
  const ThresholdVector& cuts = strategy_at(s, h, node);
  const Interval saved = iv[j];
  const double base = dists[j].mass(saved.first, saved.second);
  if (!(base > 0.0)) return {0.0, 0.0};
  double win = 0.0;
  double pay = 0.0;
  for (int c = 0; c < cuts.bids(); ++c) {
    const double lo = std::max(saved.first, cuts[static_cast<std::size_t>(c)]);
    const double hi = std::min(saved.second, cuts[static_cast<std::size_t>(c) + 1]);
    if (!(hi > lo)) continue;
    const double p = dists[j].mass(lo, hi) / base;
    if (!(p > 0.0)) continue;
    iv[j] = {lo, hi};
    const auto [w, q] = continuation(node.children[static_cast<std::size_t>(c)],
                                     child_history(h, c), bidder, iv, s, dists);
    win += p * w;
    pay += p * q;
  }
  iv[j] = saved;
  return {win, pay};
}

// Value intervals of all bidders on arrival at history `h`.
std::vector<Interval> intervals_at(const SequentialMechanismTree& t, const std::string& h,
                                   const SequentialStrategy& s,
                                   const std::vector<ValueDistribution>& dists) {
  auto iv = supports(dists);
  const SequentialNode* node = &t.root;
  std::string cur;
  std::size_t pos = 0;
  while (cur != h) {
    const std::size_t comma = h.find(',', pos);
    const int c = std::stoi(h.substr(pos, comma - pos));
    const auto i = static_cast<std::size_t>(node->bidder);
    const ThresholdVector& cuts = strategy_at(s, cur, *node);
    iv[i] = {std::max(iv[i].first, cuts[static_cast<std::size_t>(c)]),
             std::min(iv[i].second, cuts[static_cast<std::size_t>(c) + 1])};
    node = &node->children[static_cast<std::size_t>(c)];
    cur = child_history(cur, c);
    pos = comma == std::string::npos ? h.size() : comma + 1;
  }
  return iv;
}

}  // namespace

SequentialStrategy backward_induction_best_response(
    const SequentialMechanismTree& t, const std::vector<ValueDistribution>& dists) {
  check_dists(t, dists);
  std::vector<InternalNode> nodes;
  std::vector<int> acted(static_cast<std::size_t>(t.n), 0);
  collect_internal(t.root, "", 0, acted, nodes);
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const InternalNode& a, const InternalNode& b) { return a.depth > b.depth; });
  SequentialStrategy s;
  for (const auto& in : nodes) {
    const auto& d = dists[static_cast<std::size_t>(in.node->bidder)];
    s.emplace(in.history,
              equally_spaced_thresholds(static_cast<int>(in.node->children.size()), d.lo(),
                                        d.hi()));
  }
  for (int round = 0; round < 500; ++round) {
    double moved = 0.0;
    for (const auto& in : nodes) {
      const int i = in.node->bidder;
      auto iv = intervals_at(t, in.history, s, dists);
      BidLines lines;
      for (std::size_t c = 0; c < in.node->children.size(); ++c) {
        const auto [win, pay] = continuation(in.node->children[c],
                                             child_history(in.history, static_cast<int>(c)),
                                             i, iv, s, dists);
        lines.h.push_back(win);
        lines.t.push_back(-pay);
      }
      const auto& d = dists[static_cast<std::size_t>(i)];
      ThresholdVector next = envelope_thresholds(lines, d.lo(), d.hi());
      ThresholdVector& cur = s.at(in.history);
      for (std::size_t j = 0; j < next.cuts().size(); ++j) {
        moved = std::max(moved, std::abs(next[j] - cur[j]));
      }
      cur = std::move(next);
    }
    if (moved < 1e-14) break;
  }
  return s;
}

FlattenResult flatten_to_simultaneous(const SequentialMechanismTree& t,
                                      const SequentialStrategy& s,
                                      const std::vector<ValueDistribution>& dists,
                                      double v0, bool monotone) {
  check_dists(t, dists);
  const auto n = static_cast<std::size_t>(t.n);
  std::vector<std::vector<double>> raw(n);
  auto iv = supports(dists);
  walk(t.root, "", iv, 1.0, s, dists,
       [&](const SequentialNode& node, const std::string& h, const std::vector<Interval>&,
           double) {
         if (node.is_leaf()) return;
         const auto& c = s.at(h).cuts();
         raw[static_cast<std::size_t>(node.bidder)].insert(
             raw[static_cast<std::size_t>(node.bidder)].end(), c.begin(), c.end());
       });
  FlattenResult r;
  std::vector<int> sizes;
  for (std::size_t i = 0; i < n; ++i) {
    r.strategies.emplace_back(dedupe_cuts(raw[i], dists[i].lo(), dists[i].hi()));
    sizes.push_back(r.strategies[i].bids());
  }
  SimultaneousMechanism m(sizes, v0);
  std::vector<double> a(n), b(n);
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const auto prof = m.profile_of(idx);
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = r.strategies[i][static_cast<std::size_t>(prof[i])];
      const double hi = r.strategies[i][static_cast<std::size_t>(prof[i]) + 1];
      a[i] = lo + 0.25 * (hi - lo);
      b[i] = lo + 0.75 * (hi - lo);
    }
    const SequentialNode& la = replay(t.root, s, a);
    const SequentialNode& lb = replay(t.root, s, b);
    if (&la != &lb) {
      throw StructuralError("one simultaneous cell replays to two outcomes");
    }
    m.set_winner(idx, la.winner);
    if (!la.payments.empty()) m.set_payments(idx, la.payments);
  }
  m.set_cuts(r.strategies);
  r.mechanism = monotone ? monotonize(m, r.strategies, dists) : std::move(m);

  r.communication_requirement = t.communication_requirement();
  const int mreq = r.communication_requirement;
  const int nn = t.n;
  r.bit_bound = nn * mreq - nn * (nn - 3) / 2;
  std::vector<int> last_here(n, -1), gamma(n, -1);
  last_message_gamma(t.root, 0, last_here, gamma);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return gamma[x] > gamma[y]; });
  r.count_bounds.assign(n, 1);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const std::size_t i = order[rank];
    if (gamma[i] < 0) continue;
    const int e = mreq - static_cast<int>(rank + 1) + 2;
    r.count_bounds[i] = e >= 30 ? (1 << 30) : (1 << std::max(e, 0));
  }
  for (std::size_t i = 0; i < n; ++i) {
    r.message_counts.push_back(sizes[i]);
    r.bits.push_back(ceil_log2(sizes[i]));
    r.total_bits += r.bits.back();
    if (sizes[i] > r.count_bounds[i]) r.within_bounds = false;
  }
  if (r.total_bits > r.bit_bound) r.within_bounds = false;
  return r;
}

std::pair<SequentialMechanismTree, SequentialStrategy> tree_from_simultaneous(
    const SimultaneousMechanism& m, const StrategyProfile& s) {
  check_strategies(m, s);
  if (!is_deterministic(m)) throw ArgumentError("tree needs a deterministic allocation");
  std::vector<int> bits;
  for (int k : m.bid_sizes()) {
    const int b = ceil_log2(k);
    if ((1 << b) != k || b < 1) throw ArgumentError("bid counts must be powers of two");
    bits.push_back(b);
  }
  SequentialMechanismTree t;
  t.n = m.n();
  SequentialStrategy strat;
  std::vector<int> prof;
  auto build = [&](auto&& self, const std::string& h) -> SequentialNode {
    const auto i = prof.size();
    if (static_cast<int>(i) == m.n()) {
      const std::size_t idx = m.index_of(prof);
      const auto& w = m.weights(idx);
      const int winner = static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin());
      return leaf(winner, m.payments(idx));
    }
    SequentialNode node;
    node.bidder = static_cast<int>(i);
    node.bits = bits[i];
    strat.emplace(h, s[i]);
    for (int c = 0; c < m.bid_sizes()[i]; ++c) {
      prof.push_back(c);
      node.children.push_back(self(self, child_history(h, c)));
      prof.pop_back();
    }
    return node;
  };
  t.root = build(build, "");
  return {std::move(t), std::move(strat)};
}

SequentialMechanismTree alice_bob_example_tree(double alice_payment) {
  SequentialMechanismTree t;
  t.n = 2;
  SequentialNode after0;
  after0.bidder = 1;
  after0.bits = 1;
  after0.children = {leaf(1, {0.0, 0.0}), leaf(2, {0.0, 0.25})};
  SequentialNode after1;
  after1.bidder = 1;
  after1.bits = 1;
  after1.children = {leaf(1, {alice_payment, 0.0}), leaf(2, {0.0, 0.75})};
  t.root.bidder = 0;
  t.root.bits = 1;
  t.root.children = {after0, after1};
  return t;
}

}  // namespace bcauction
