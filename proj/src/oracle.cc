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

#include "bcauction/oracle.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "bcauction/errors.h"
#include "bcauction/evaluation.h"
#include "bcauction/profit_reduction.h"

namespace bcauction {

std::string AllocationTable::describe() const {
  std::ostringstream os;
  os << "prefix(";
  for (std::size_t i = 0; i < prefix.size(); ++i) os << (i ? "," : "") << prefix[i];
  os << ")";
  if (seller_at_zero) os << "+seller";
  if (diagonal_split) os << "+split";
  return os.str();
}

namespace {

SimultaneousMechanism table_mechanism(int kA, int kB, const std::vector<int>& prefix,
                                      bool seller, bool split, double v0) {
  SimultaneousMechanism m({kA, kB}, v0);
  for (int i = 0; i < kA; ++i) {
    for (int j = 0; j < kB; ++j) {
      const std::size_t idx = m.index_of({i, j});
      if (seller && i == 0 && j == 0) {
        m.set_winner(idx, 0);
      } else if (split && i == j) {
        m.set_weights(idx, {0.0, 0.5, 0.5});
      } else {
        m.set_winner(idx, j < prefix[static_cast<std::size_t>(i)] ? 1 : 2);
      }
    }
  }
  return m;
}

SimultaneousMechanism rebase(const SimultaneousMechanism& m, double v0) {
  if (m.v0() == v0) return m;
  SimultaneousMechanism out(m.bid_sizes(), v0);
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    out.set_weights(idx, m.weights(idx));
    out.set_payments(idx, m.payments(idx));
  }
  return out;
}

// Two-bidder evaluation with cached virtual transforms.
class Context {
 public:
  Context(const SimultaneousMechanism& m, const std::vector<ValueDistribution>& dists,
          double v0, Objective objective)
      : m_(rebase(m, v0)), dists_(dists), v0_(v0), objective_(objective) {
    if (m_.n() != 2 || dists_.size() != 2) {
      throw ArgumentError("the oracle handles two bidders");
    }
    if (objective_ == Objective::kProfit) {
      for (const auto& d : dists_) {
        auto t = std::make_shared<const VirtualTransform>(d);
        if (!t->regular()) throw NotRegular("profit oracle requires regular laws");
        virt_.push_back(std::move(t));
      }
    }
  }

  const SimultaneousMechanism& mechanism() const { return m_; }
  const std::vector<ValueDistribution>& dists() const { return dists_; }

  // (mass, moment) per bid, moment being virtual for profit.
  std::vector<std::pair<double, double>> cells(int i, const ThresholdVector& t) const {
    const auto ui = static_cast<std::size_t>(i);
    std::vector<std::pair<double, double>> out;
    for (int b = 0; b < t.bids(); ++b) {
      const double lo = t[static_cast<std::size_t>(b)];
      const double hi = t[static_cast<std::size_t>(b) + 1];
      const double mass = dists_[ui].mass(lo, hi);
      const double mom = virt_.empty() ? dists_[ui].partial_moment(lo, hi)
                                       : virt_[ui]->partial_moment(lo, hi);
      out.emplace_back(mass, mom);
    }
    return out;
  }

  double value(const StrategyProfile& s) const {
    const auto a = cells(0, s[0]);
    const auto b = cells(1, s[1]);
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        const auto& w = m_.weights(m_.index_of({static_cast<int>(i), static_cast<int>(j)}));
        total += w[0] * a[i].first * b[j].first * v0_ + w[1] * a[i].second * b[j].first +
                 w[2] * a[i].first * b[j].second;
      }
    }
    return total;
  }

  ThresholdVector best_response(const StrategyProfile& s, int i) const {
    const int o = 1 - i;
    const auto other = cells(o, s[static_cast<std::size_t>(o)]);
    const int k = m_.bid_sizes()[static_cast<std::size_t>(i)];
    BidLines lines;
    lines.h.assign(static_cast<std::size_t>(k), 0.0);
    lines.t.assign(static_cast<std::size_t>(k), 0.0);
    for (int mine = 0; mine < k; ++mine) {
      for (std::size_t ob = 0; ob < other.size(); ++ob) {
        const std::vector<int> b = i == 0 ? std::vector<int>{mine, static_cast<int>(ob)}
                                          : std::vector<int>{static_cast<int>(ob), mine};
        const auto& w = m_.weights(m_.index_of(b));
        const auto um = static_cast<std::size_t>(mine);
        lines.h[um] += other[ob].first * w[static_cast<std::size_t>(i) + 1];
        lines.t[um] += other[ob].first * w[0] * v0_ +
                       other[ob].second * w[static_cast<std::size_t>(o) + 1];
      }
    }
    const auto& d = dists_[static_cast<std::size_t>(i)];
    if (virt_.empty()) return envelope_thresholds(lines, d.lo(), d.hi());
    const auto& t = *virt_[static_cast<std::size_t>(i)];
    const ThresholdVector vc = envelope_thresholds(lines, t.range_lo(), t.range_hi());
    std::vector<double> cuts;
    for (double c : vc.cuts()) cuts.push_back(t.inverse_clamped(c));
    cuts.front() = d.lo();
    cuts.back() = d.hi();
    for (std::size_t j = 1; j < cuts.size(); ++j) cuts[j] = std::max(cuts[j], cuts[j - 1]);
    return ThresholdVector(cuts);
  }

  OptimizedCuts ascend(StrategyProfile s) const {
    double val = value(s);
    for (int it = 0; it < 20000; ++it) {
      double moved = 0.0;
      for (int i = 0; i < 2; ++i) {
        ThresholdVector next = best_response(s, i);
        for (std::size_t j = 0; j < next.cuts().size(); ++j) {
          moved = std::max(moved, std::abs(next[j] - s[static_cast<std::size_t>(i)][j]));
        }
        s[static_cast<std::size_t>(i)] = std::move(next);
      }
      val = value(s);
      if (moved < 1e-15) break;
    }
    return {std::move(s), val};
  }

 private:
  SimultaneousMechanism m_;
  std::vector<ValueDistribution> dists_;
  double v0_;
  Objective objective_;
  std::vector<std::shared_ptr<const VirtualTransform>> virt_;
};

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto threads = static_cast<unsigned>(std::min<std::size_t>(hw, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

MechanismFamily enumerate_monotone_2bidder(int k, bool allow_seller) {
  return enumerate_monotone_2bidder(k, k, allow_seller);
}

MechanismFamily enumerate_monotone_2bidder(int kA, int kB, bool allow_seller) {
  if (kA < 1 || kB < 1) throw ArgumentError("bid counts must be positive");
  if (kA > kOracleMaxBids || kB > kOracleMaxBids) {
    throw BudgetError("exhaustive enumeration is limited to " +
                      std::to_string(kOracleMaxBids) + " bids per bidder");
  }
  MechanismFamily f;
  f.bid_sizes = {kA, kB};
  std::vector<int> prefix(static_cast<std::size_t>(kA), 0);
  // Odometer over nondecreasing prefixes in lexicographic order.
  while (true) {
    f.enumeration.push_back(
        {prefix, false, false, table_mechanism(kA, kB, prefix, false, false, 0.0)});
    int pos = kA - 1;
    while (pos >= 0 && prefix[static_cast<std::size_t>(pos)] == kB) --pos;
    if (pos < 0) break;
    const int v = prefix[static_cast<std::size_t>(pos)] + 1;
    for (int p = pos; p < kA; ++p) prefix[static_cast<std::size_t>(p)] = v;
  }
  if (allow_seller) {
    const std::size_t base = f.enumeration.size();
    for (std::size_t i = 0; i < base; ++i) {
      const auto p = f.enumeration[i].prefix;
      f.enumeration.push_back({p, true, false, table_mechanism(kA, kB, p, true, false, 0.0)});
    }
  }
  return f;
}

int priority_game_orientation(const AllocationTable& t, int kB) {
  if (t.diagonal_split) return 0;
  bool b_first = true;
  bool a_first = true;
  for (std::size_t i = 0; i < t.prefix.size(); ++i) {
    const int ii = static_cast<int>(i);
    if (t.prefix[i] != std::min(ii, kB)) b_first = false;
    if (t.prefix[i] != std::min(ii + 1, kB)) a_first = false;
  }
  if (static_cast<int>(t.prefix.size()) != kB) return 0;
  if (b_first) return 1;
  if (a_first) return -1;
  return 0;
}

double oracle_objective(const SimultaneousMechanism& m, const StrategyProfile& s,
                        const std::vector<ValueDistribution>& dists, double v0,
                        Objective objective) {
  return Context(m, dists, v0, objective).value(s);
}

OptimizedCuts optimize_thresholds(const SimultaneousMechanism& m,
                                  const std::vector<ValueDistribution>& dists,
                                  double v0, Objective objective, int restarts,
                                  std::uint64_t seed) {
  const Context ctx(m, dists, v0, objective);
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  OptimizedCuts best;
  bool have = false;
  for (int r = 0; r <= restarts; ++r) {
    StrategyProfile start;
    for (int i = 0; i < 2; ++i) {
      const auto& d = dists[static_cast<std::size_t>(i)];
      const int k = m.bid_sizes()[static_cast<std::size_t>(i)];
      if (r == 0) {
        start.push_back(equally_spaced_thresholds(k, d.lo(), d.hi()));
        continue;
      }
      std::vector<double> c{d.lo()};
      for (int j = 1; j < k; ++j) c.push_back(d.lo() + (d.hi() - d.lo()) * unif(eng));
      c.push_back(d.hi());
      std::sort(c.begin(), c.end());
      start.emplace_back(c);
    }
    OptimizedCuts got = ctx.ascend(std::move(start));
    if (!have || got.value > best.value) {
      best = std::move(got);
      have = true;
    }
  }
  return best;
}

OptimizedCuts grid_search_thresholds(const SimultaneousMechanism& m,
                                     const std::vector<ValueDistribution>& dists,
                                     double v0, Objective objective, int points,
                                     bool polish) {
  if (points < 2) throw ArgumentError("grid needs at least two points");
  const Context ctx(m, dists, v0, objective);
  // All sorted interior cut vectors for one bidder on the grid.
  auto vectors = [&](int i) {
    const auto& d = dists[static_cast<std::size_t>(i)];
    const int k = m.bid_sizes()[static_cast<std::size_t>(i)];
    std::vector<double> grid;
    for (int g = 0; g < points; ++g) {
      grid.push_back(d.lo() + (d.hi() - d.lo()) * g / (points - 1));
    }
    std::vector<ThresholdVector> out;
    std::vector<int> pick(static_cast<std::size_t>(std::max(k - 1, 0)), 0);
    while (true) {
      std::vector<double> c{d.lo()};
      for (int p : pick) c.push_back(grid[static_cast<std::size_t>(p)]);
      c.push_back(d.hi());
      out.emplace_back(c);
      int pos = static_cast<int>(pick.size()) - 1;
      while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == points - 1) --pos;
      if (pos < 0) break;
      const int v = pick[static_cast<std::size_t>(pos)] + 1;
      for (std::size_t p = static_cast<std::size_t>(pos); p < pick.size(); ++p) pick[p] = v;
    }
    return out;
  };
  const auto va = vectors(0);
  const auto vb = vectors(1);
  std::vector<OptimizedCuts> per_row(va.size());
  parallel_for(va.size(), [&](std::size_t a) {
    OptimizedCuts best{{va[a], vb[0]}, -std::numeric_limits<double>::infinity()};
    for (const auto& b : vb) {
      StrategyProfile s{va[a], b};
      const double v = ctx.value(s);
      if (v > best.value) best = {std::move(s), v};
    }
    per_row[a] = std::move(best);
  });
  OptimizedCuts best = per_row[0];
  for (const auto& r : per_row) {
    if (r.value > best.value) best = r;
  }
  if (polish) {
    OptimizedCuts p = ctx.ascend(best.cuts);
    if (p.value > best.value) best = std::move(p);
  }
  return best;
}

Certificate certify_2bidder_optimality(int k,
                                       const std::vector<ValueDistribution>& dists,
                                       double v0, Objective objective, int restarts) {
  if (k > 3) throw BudgetError("certification is limited to k <= 3");
  if (dists.size() != 2) throw ArgumentError("certification needs two bidders");
  MechanismFamily fam = enumerate_monotone_2bidder(k, true);
  const std::size_t base = fam.enumeration.size();
  for (std::size_t i = 0; i < base; ++i) {
    const auto& t = fam.enumeration[i];
    if (t.seller_at_zero) continue;
    SimultaneousMechanism m = table_mechanism(k, k, t.prefix, false, true, 0.0);
    if (!is_monotone(m)) continue;
    fam.enumeration.push_back({t.prefix, false, true, std::move(m)});
  }
  Certificate c;
  c.entries.resize(fam.enumeration.size());
  parallel_for(fam.enumeration.size(), [&](std::size_t i) {
    const auto& t = fam.enumeration[i];
    const OptimizedCuts o = optimize_thresholds(t.mechanism, dists, v0, objective,
                                                restarts, 1000 + i);
    c.entries[i] = {static_cast<int>(i), t.describe(),
                    priority_game_orientation(t, k) != 0, o.cuts, o.value};
  });
  for (const auto& e : c.entries) {
    if (c.argmax_id < 0 || e.optimal_value > c.best_value) {
      c.argmax_id = e.allocation_id;
      c.best_value = e.optimal_value;
    }
  }
  constexpr double kTie = 1e-9;
  constexpr double kAgree = 1e-6;

  // Solver candidates, keyed by (orientation, modified).
  struct Candidate {
    int orientation;
    bool modified;
    PrioritySpec spec;
    double value;
  };
  std::vector<Candidate> cands;
  if (objective == Objective::kWelfare) {
    for (int orient : {1, -1}) {
      const auto& dA = dists[orient == 1 ? 0 : 1];
      const auto& dB = dists[orient == 1 ? 1 : 0];
      std::vector<MutuallyCenteredPair> pairs{solve_mutually_centered(dA, dB, k)};
      const double lo = std::min(dA.lo(), dB.lo());
      if (v0 > lo) pairs.push_back(solve_mpg_thresholds(dA, dB, k, v0));
      for (const auto& p : pairs) {
        PrioritySpec s = two_bidder_spec(orient == 1 ? p.x : p.y,
                                         orient == 1 ? p.y : p.x, p.modified, v0);
        if (orient == -1) s.priority_order = {1, 0};
        const double val = evaluate_priority(s, dists, false).welfare;
        cands.push_back({orient, p.modified, std::move(s), val});
      }
    }
  } else {
    const ProfitSolution sol = solve_profit_optimal(dists, k, v0);
    const int orient = sol.spec.priority_order.back() == 1 ? 1 : -1;
    cands.push_back({orient, sol.spec.modified, sol.spec, sol.virtual_surplus});
  }
  const Candidate* best_cand = &cands[0];
  for (const auto& cd : cands) {
    if (cd.value > best_cand->value) best_cand = &cd;
  }
  c.solver_value = best_cand->value;
  c.solver_cuts = best_cand->spec.thresholds;

  std::ostringstream rep;
  rep.precision(12);
  rep << "best table " << c.entries[static_cast<std::size_t>(c.argmax_id)].description
      << " value " << c.best_value << "; solver value " << c.solver_value;
  // A priority game of the solver's kind must tie the maximum with the
  // solver's cuts.
  bool matched = false;
  c.cut_error = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const auto& e = c.entries[i];
    const auto& t = fam.enumeration[i];
    if (e.optimal_value < c.best_value - kTie) continue;
    if (priority_game_orientation(t, k) != best_cand->orientation) continue;
    if (t.seller_at_zero != best_cand->modified) continue;
    double err = 0.0;
    for (std::size_t b = 0; b < 2; ++b) {
      for (std::size_t j = 0; j < e.optimal_cuts[b].cuts().size(); ++j) {
        err = std::max(err, std::abs(e.optimal_cuts[b][j] - c.solver_cuts[b][j]));
      }
    }
    if (err < c.cut_error) c.cut_error = err;
    matched = true;
  }
  const bool value_ok = std::abs(c.solver_value - c.best_value) <= kAgree;
  c.pass = matched && value_ok && c.cut_error <= kAgree;
  if (!matched) rep << "; no priority game of the solver's kind attains the maximum";
  if (!value_ok) rep << "; solver value differs from the exhaustive maximum";
  if (matched && c.cut_error > kAgree) rep << "; cut mismatch " << c.cut_error;
  c.report = rep.str();
  return c;
}

nlohmann::json certificate_to_json(const Certificate& c) {
  nlohmann::json j;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : c.entries) {
    nlohmann::json cuts = nlohmann::json::array();
    for (const auto& t : e.optimal_cuts) cuts.push_back(t.cuts());
    list.push_back({{"allocation_id", e.allocation_id},
                    {"description", e.description},
                    {"priority_game", e.priority_game},
                    {"optimal_cuts", cuts},
                    {"optimal_value", e.optimal_value}});
  }
  j["allocations"] = list;
  j["argmax_id"] = c.argmax_id;
  j["best_value"] = c.best_value;
  j["solver_value"] = c.solver_value;
  nlohmann::json sc = nlohmann::json::array();
  for (const auto& t : c.solver_cuts) sc.push_back(t.cuts());
  j["solver_cuts"] = sc;
  j["cut_error"] = c.cut_error;
  j["pass"] = c.pass;
  j["report"] = c.report;
  return j;
}

}  // namespace bcauction
