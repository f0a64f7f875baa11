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

#include "bcauction/mechanism.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "bcauction/errors.h"

namespace bcauction {

ThresholdVector::ThresholdVector(std::vector<double> cuts)
    : cuts_(std::move(cuts)) {
  if (cuts_.size() < 2) {
    throw ArgumentError("a threshold vector needs at least two cut points");
  }
  for (std::size_t j = 0; j < cuts_.size(); ++j) {
    if (!std::isfinite(cuts_[j])) throw ArgumentError("cut points must be finite");
    if (j > 0 && cuts_[j] < cuts_[j - 1]) {
      throw ArgumentError("cut points must be nondecreasing");
    }
  }
  if (!(cuts_.front() < cuts_.back())) {
    throw ArgumentError("threshold vector endpoints must satisfy t_0 < t_k");
  }
}

int ThresholdVector::bid_of(double v) const {
  if (cuts_.empty()) throw ArgumentError("empty threshold vector");
  if (v < cuts_.front() || v > cuts_.back()) {
    throw ArgumentError("value " + std::to_string(v) +
                        " lies outside the threshold support");
  }
  const auto it = std::upper_bound(cuts_.begin(), cuts_.end(), v);
  const int j = static_cast<int>(it - cuts_.begin()) - 1;
  return std::min(j, bids() - 1);
}

int bid_of(const ThresholdVector& t, double v) { return t.bid_of(v); }

SimultaneousMechanism::SimultaneousMechanism(std::vector<int> bid_sizes,
                                             double v0)
    : bid_sizes_(std::move(bid_sizes)), v0_(v0), profile_count_(1) {
  if (bid_sizes_.empty()) throw ArgumentError("a mechanism needs a bidder");
  for (int k : bid_sizes_) {
    if (k < 1) throw ArgumentError("every bidder needs at least one message");
    if (profile_count_ > (std::size_t{1} << 40) / static_cast<std::size_t>(k)) {
      throw ArgumentError("bid profile table too large");
    }
    profile_count_ *= static_cast<std::size_t>(k);
  }
  std::vector<double> seller(bid_sizes_.size() + 1, 0.0);
  seller[0] = 1.0;
  alloc_.assign(profile_count_, seller);
  pay_.assign(profile_count_, std::vector<double>(bid_sizes_.size(), 0.0));
}

std::size_t SimultaneousMechanism::index_of(const std::vector<int>& bids) const {
  if (bids.size() != bid_sizes_.size()) {
    throw ArgumentError("bid profile has the wrong number of bidders");
  }
  std::size_t idx = 0;
  for (std::size_t i = bids.size(); i-- > 0;) {
    if (bids[i] < 0 || bids[i] >= bid_sizes_[i]) {
      throw ArgumentError("bid out of range for bidder " + std::to_string(i));
    }
    idx = idx * static_cast<std::size_t>(bid_sizes_[i]) +
          static_cast<std::size_t>(bids[i]);
  }
  return idx;
}

std::vector<int> SimultaneousMechanism::profile_of(std::size_t index) const {
  std::vector<int> b(bid_sizes_.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto k = static_cast<std::size_t>(bid_sizes_[i]);
    b[i] = static_cast<int>(index % k);
    index /= k;
  }
  return b;
}

void SimultaneousMechanism::set_weights(std::size_t index, std::vector<double> w) {
  if (w.size() != bid_sizes_.size() + 1) {
    throw ArgumentError("allocation weights need n + 1 entries");
  }
  alloc_.at(index) = std::move(w);
}

void SimultaneousMechanism::set_winner(std::size_t index, int winner) {
  if (winner < 0 || winner > n()) throw ArgumentError("winner index out of range");
  std::vector<double> w(bid_sizes_.size() + 1, 0.0);
  w[static_cast<std::size_t>(winner)] = 1.0;
  alloc_.at(index) = std::move(w);
}

void SimultaneousMechanism::set_payments(std::size_t index, std::vector<double> p) {
  if (p.size() != bid_sizes_.size()) {
    throw ArgumentError("payments need one entry per bidder");
  }
  pay_.at(index) = std::move(p);
}

void SimultaneousMechanism::set_payment(std::size_t index, int bidder, double p) {
  pay_.at(index).at(static_cast<std::size_t>(bidder)) = p;
}

void SimultaneousMechanism::validate() const {
  for (std::size_t idx = 0; idx < profile_count_; ++idx) {
    const auto& w = alloc_[idx];
    if (w.size() != bid_sizes_.size() + 1 || pay_[idx].size() != bid_sizes_.size()) {
      throw StructuralError("profile " + std::to_string(idx) + " has the wrong shape");
    }
    double sum = 0.0;
    for (double x : w) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw StructuralError("negative or non-finite weight at profile " +
                              std::to_string(idx));
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw StructuralError("weights at profile " + std::to_string(idx) +
                            " sum to " + std::to_string(sum));
    }
    for (double p : pay_[idx]) {
      if (!std::isfinite(p)) {
        throw StructuralError("non-finite payment at profile " + std::to_string(idx));
      }
    }
  }
  if (cuts_) check_strategies(*this, *cuts_);
}

std::vector<std::string> SimultaneousMechanism::payment_warnings() const {
  std::vector<std::string> out;
  for (std::size_t idx = 0; idx < profile_count_; ++idx) {
    const auto b = profile_of(idx);
    for (int j = 0; j < n(); ++j) {
      if (weight(idx, j + 1) <= 0.0) continue;
      // Without an upward-closed win set the minimal winning bid is undefined.
      auto probe = b;
      bool lost_above = false;
      for (int m = b[static_cast<std::size_t>(j)] + 1;
           m < bid_sizes_[static_cast<std::size_t>(j)]; ++m) {
        probe[static_cast<std::size_t>(j)] = m;
        if (weight(index_of(probe), j + 1) <= 0.0) lost_above = true;
      }
      if (lost_above) {
        out.push_back("bidder " + std::to_string(j) + " at profile " +
                      std::to_string(idx) +
                      " has no upward-closed win set; payment taken as given");
      }
    }
  }
  return out;
}

namespace {

void check_spec(const PrioritySpec& spec) {
  const std::size_t n = spec.thresholds.size();
  if (n == 0) throw ArgumentError("priority spec needs at least one bidder");
  if (spec.priority_order.size() != n) {
    throw ArgumentError("priority order length differs from bidder count");
  }
  std::vector<int> sorted = spec.priority_order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (sorted[i] != static_cast<int>(i)) {
      throw ArgumentError("priority order must be a permutation of bidders");
    }
  }
  const int k = spec.thresholds.front().bids();
  for (const auto& t : spec.thresholds) {
    if (t.bids() != k) {
      throw ArgumentError("all threshold vectors need the same length");
    }
  }
}

SimultaneousMechanism build(const PrioritySpec& spec) {
  check_spec(spec);
  const int n = static_cast<int>(spec.thresholds.size());
  std::vector<int> rank(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    rank[static_cast<std::size_t>(spec.priority_order[static_cast<std::size_t>(r)])] = r;
  }
  std::vector<int> sizes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    sizes[static_cast<std::size_t>(i)] = spec.thresholds[static_cast<std::size_t>(i)].bids();
  }
  SimultaneousMechanism m(sizes, spec.v0);
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const auto b = m.profile_of(idx);
    const bool all_zero =
        std::all_of(b.begin(), b.end(), [](int x) { return x == 0; });
    if (spec.modified && all_zero) continue;  // seller keeps, pays nothing
    int w = 0;
    for (int i = 1; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uw = static_cast<std::size_t>(w);
      if (b[ui] > b[uw] || (b[ui] == b[uw] && rank[ui] > rank[uw])) w = i;
    }
    // Smallest own bid that still beats everyone else.
    int need = spec.modified ? 1 : 0;
    for (int i = 0; i < n; ++i) {
      if (i == w) continue;
      const auto ui = static_cast<std::size_t>(i);
      need = std::max(need, rank[ui] > rank[static_cast<std::size_t>(w)]
                                ? b[ui] + 1
                                : b[ui]);
    }
    m.set_winner(idx, w + 1);
    m.set_payment(idx, w, spec.thresholds[static_cast<std::size_t>(w)]
                              [static_cast<std::size_t>(need)]);
  }
  m.set_cuts(spec.thresholds);
  return m;
}

}  // namespace

SimultaneousMechanism build_priority_game(const PrioritySpec& spec) {
  if (spec.modified) {
    throw ArgumentError("build_priority_game expects modified = false");
  }
  return build(spec);
}

SimultaneousMechanism build_modified_priority_game(const PrioritySpec& spec) {
  if (!spec.modified) {
    throw ArgumentError("build_modified_priority_game expects modified = true");
  }
  return build(spec);
}

SimultaneousMechanism build_game(const PrioritySpec& spec) { return build(spec); }

PrioritySpec two_bidder_spec(const ThresholdVector& a, const ThresholdVector& b,
                             bool modified, double v0) {
  PrioritySpec s;
  s.priority_order = {0, 1};
  s.thresholds = {a, b};
  s.modified = modified;
  s.v0 = v0;
  return s;
}

void check_strategies(const SimultaneousMechanism& m, const StrategyProfile& s) {
  if (static_cast<int>(s.size()) != m.n()) {
    throw ArgumentError("strategy profile needs one threshold vector per bidder");
  }
  for (int i = 0; i < m.n(); ++i) {
    if (s[static_cast<std::size_t>(i)].bids() != m.bid_sizes()[static_cast<std::size_t>(i)]) {
      throw ArgumentError("bidder " + std::to_string(i) + " has " +
                          std::to_string(s[static_cast<std::size_t>(i)].bids()) +
                          " cut intervals but " +
                          std::to_string(m.bid_sizes()[static_cast<std::size_t>(i)]) +
                          " messages");
    }
  }
}

bool is_monotone(const SimultaneousMechanism& m, double tol) {
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    auto b = m.profile_of(idx);
    for (int i = 0; i < m.n(); ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (b[ui] + 1 >= m.bid_sizes()[ui]) continue;
      ++b[ui];
      const double up = m.weight(m.index_of(b), i + 1);
      --b[ui];
      if (up < m.weight(idx, i + 1) - tol) return false;
    }
  }
  return true;
}

bool is_deterministic(const SimultaneousMechanism& m, double tol) {
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    for (double w : m.weights(idx)) {
      if (w > tol && w < 1.0 - tol) return false;
    }
  }
  return true;
}

bool rows_and_columns_distinct(const SimultaneousMechanism& m) {
  if (m.n() != 2) throw ArgumentError("row/column check needs two bidders");
  const int ka = m.bid_sizes()[0];
  const int kb = m.bid_sizes()[1];
  auto pattern = [&](int bidder, int bid) {
    std::vector<std::vector<double>> p;
    const int other = bidder == 0 ? kb : ka;
    for (int o = 0; o < other; ++o) {
      std::vector<int> b = bidder == 0 ? std::vector<int>{bid, o}
                                       : std::vector<int>{o, bid};
      p.push_back(m.weights(m.index_of(b)));
    }
    return p;
  };
  for (int bidder = 0; bidder < 2; ++bidder) {
    const int k = bidder == 0 ? ka : kb;
    std::set<std::vector<std::vector<double>>> seen;
    for (int j = 0; j < k; ++j) {
      if (!seen.insert(pattern(bidder, j)).second) return false;
    }
  }
  return true;
}

void assign_threshold_payments(SimultaneousMechanism& m, const StrategyProfile& s) {
  check_strategies(m, s);
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const auto b = m.profile_of(idx);
    std::vector<double> pay(static_cast<std::size_t>(m.n()), 0.0);
    for (int j = 0; j < m.n(); ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const double q = m.weight(idx, j + 1);
      if (q <= 0.0) continue;
      // Expected payment sum_l (q_l - q_{l-1}) t_l, charged on winning only.
      auto probe = b;
      double expected = 0.0;
      double prev = 0.0;
      for (int bid = 0; bid <= b[uj]; ++bid) {
        probe[uj] = bid;
        const double ql = m.weight(m.index_of(probe), j + 1);
        expected += (ql - prev) * s[uj][static_cast<std::size_t>(bid)];
        prev = ql;
      }
      pay[uj] = expected / q;
    }
    m.set_payments(idx, std::move(pay));
  }
}

SimultaneousMechanism monotonize(const SimultaneousMechanism& m,
                                 const StrategyProfile& s,
                                 const std::vector<ValueDistribution>& dists) {
  check_strategies(m, s);
  if (static_cast<int>(dists.size()) != m.n()) {
    throw ArgumentError("monotonize needs one distribution per bidder");
  }
  SimultaneousMechanism out(m.bid_sizes(), m.v0());
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const auto b = m.profile_of(idx);
    int best = 0;
    double best_mean = m.v0();
    for (int i = 0; i < m.n(); ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double lo = s[ui][static_cast<std::size_t>(b[ui])];
      const double hi = s[ui][static_cast<std::size_t>(b[ui]) + 1];
      if (!(hi > lo) || !(dists[ui].mass(lo, hi) > 0.0)) continue;
      const double mean = conditional_mean(dists[ui], lo, hi);
      if (mean >= best_mean) {
        best_mean = mean;
        best = i + 1;
      }
    }
    out.set_winner(idx, best);
  }
  assign_threshold_payments(out, s);
  out.set_cuts(s);
  return out;
}

}  // namespace bcauction
