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

#include "bcauction/profit_reduction.h"

#include <algorithm>

#include "bcauction/errors.h"
#include "bcauction/evaluation.h"

namespace bcauction {

VirtualModel to_virtual_model(const std::vector<ValueDistribution>& dists,
                              double v0) {
  if (dists.empty()) throw ArgumentError("virtual model needs at least one bidder");
  VirtualModel vm;
  for (const auto& d : dists) {
    auto t = std::make_shared<const VirtualTransform>(d);
    if (!t->regular()) {
      throw NotRegular("reduction requires regularity: " + d.describe());
    }
    vm.virtual_dists.push_back(ValueDistribution::VirtualImage(d));
    vm.transforms.push_back(std::move(t));
  }
  vm.alpha = vm.transforms[0]->range_lo();
  vm.beta = vm.transforms[0]->range_hi();
  for (const auto& t : vm.transforms) {
    vm.alpha = std::min(vm.alpha, t->range_lo());
    vm.beta = std::max(vm.beta, t->range_hi());
  }
  vm.virtual_v0 = v0;
  return vm;
}

namespace {

ThresholdVector map_back(const VirtualTransform& t, const ThresholdVector& vc,
                         const ValueDistribution& d) {
  std::vector<double> cuts;
  for (double c : vc.cuts()) cuts.push_back(t.inverse_clamped(c));
  cuts.front() = d.lo();
  cuts.back() = d.hi();
  for (std::size_t j = 1; j < cuts.size(); ++j) cuts[j] = std::max(cuts[j], cuts[j - 1]);
  return ThresholdVector(cuts);
}

ProfitSolution finish(const VirtualModel& vm, const std::vector<ValueDistribution>& dists,
                      PrioritySpec vspec) {
  ProfitSolution out;
  out.virtual_surplus = evaluate_priority(vspec, vm.virtual_dists, false).welfare;
  out.spec = vspec;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    out.spec.thresholds[i] = map_back(*vm.transforms[i], vspec.thresholds[i], dists[i]);
  }
  out.virtual_spec = std::move(vspec);
  return out;
}

}  // namespace

ProfitSolution solve_profit_optimal(const std::vector<ValueDistribution>& dists,
                                    int k, double v0, const SolverConfig& cfg) {
  const int n = static_cast<int>(dists.size());
  if (n < 1) throw ArgumentError("need at least one bidder");
  if (k < 2) throw ArgumentError("profit solver needs k >= 2");
  const VirtualModel vm = to_virtual_model(dists, v0);
  std::vector<PrioritySpec> candidates;
  if (n == 2) {
    // Try both priority orders; the higher-priority bidder plays B.
    for (int top = 1; top >= 0; --top) {
      const auto& vA = vm.virtual_dists[static_cast<std::size_t>(1 - top)];
      const auto& vB = vm.virtual_dists[static_cast<std::size_t>(top)];
      std::vector<MutuallyCenteredPair> pairs{solve_mutually_centered(vA, vB, k, cfg)};
      if (v0 > vm.alpha && v0 < vm.beta) {
        pairs.push_back(solve_mpg_thresholds(vA, vB, k, v0, cfg));
      }
      for (const auto& p : pairs) {
        PrioritySpec s;
        s.priority_order = {1 - top, top};
        s.thresholds.resize(2);
        s.thresholds[static_cast<std::size_t>(1 - top)] = p.x;
        s.thresholds[static_cast<std::size_t>(top)] = p.y;
        s.modified = p.modified;
        s.v0 = v0;
        candidates.push_back(std::move(s));
      }
    }
  } else if (k == 2) {
    for (const auto& d : dists) {
      if (!d.same_law(dists[0])) {
        throw CharacterizationOpen(
            "two-bid profit solution needs identical bidder laws for n >= 3; "
            "use the quantile construction instead");
      }
    }
    const ValueDistribution& vd = vm.virtual_dists[0];
    std::vector<NBidderSolution> sols;
    if (n >= 2) sols.push_back(solve_n_bidder_pg(vd, n, cfg));
    if (v0 < vd.hi()) sols.push_back(solve_n_bidder_mpg(vd, n, v0));
    for (const auto& sol : sols) {
      PrioritySpec s;
      for (int i = 0; i < n; ++i) {
        s.priority_order.push_back(i);
        s.thresholds.push_back(ThresholdVector(
            {vd.lo(), std::clamp(sol.cuts[static_cast<std::size_t>(i)], vd.lo(), vd.hi()),
             vd.hi()}));
      }
      s.modified = sol.modified;
      s.v0 = v0;
      candidates.push_back(std::move(s));
    }
  } else {
    throw CharacterizationOpen(
        "no optimal mechanism is known for n = " + std::to_string(n) +
        ", k = " + std::to_string(k) + "; use the quantile construction instead");
  }
  ProfitSolution best;
  bool have = false;
  for (auto& c : candidates) {
    ProfitSolution sol = finish(vm, dists, std::move(c));
    if (!have || sol.virtual_surplus > best.virtual_surplus + 1e-15) {
      best = std::move(sol);
      have = true;
    }
  }
  return best;
}

WelfareSolution solve_welfare_optimal(const std::vector<ValueDistribution>& dists,
                                      int k, double v0, const SolverConfig& cfg) {
  const int n = static_cast<int>(dists.size());
  if (n < 1) throw ArgumentError("need at least one bidder");
  if (k < 2) throw ArgumentError("welfare solver needs k >= 2");
  std::vector<PrioritySpec> candidates;
  if (n == 2) {
    for (int top = 1; top >= 0; --top) {
      const auto& dA = dists[static_cast<std::size_t>(1 - top)];
      const auto& dB = dists[static_cast<std::size_t>(top)];
      std::vector<MutuallyCenteredPair> pairs{solve_mutually_centered(dA, dB, k, cfg)};
      const double lo = std::min(dA.lo(), dB.lo());
      const double hi = std::max(dA.hi(), dB.hi());
      if (v0 > lo && v0 < hi) pairs.push_back(solve_mpg_thresholds(dA, dB, k, v0, cfg));
      for (const auto& p : pairs) {
        PrioritySpec s;
        s.priority_order = {1 - top, top};
        s.thresholds.resize(2);
        s.thresholds[static_cast<std::size_t>(1 - top)] = p.x;
        s.thresholds[static_cast<std::size_t>(top)] = p.y;
        s.modified = p.modified;
        s.v0 = v0;
        candidates.push_back(std::move(s));
      }
    }
  } else if (k == 2) {
    for (const auto& d : dists) {
      if (!d.same_law(dists[0])) {
        throw CharacterizationOpen(
            "two-bid welfare solution needs identical bidder laws for n >= 3; "
            "use the quantile construction instead");
      }
    }
    const ValueDistribution& d = dists[0];
    const NBidderSolution sol = solve_n_bidder_welfare_2bid(d, n, v0, cfg);
    PrioritySpec s;
    for (int i = 0; i < n; ++i) {
      s.priority_order.push_back(i);
      s.thresholds.push_back(ThresholdVector(
          {d.lo(), std::clamp(sol.cuts[static_cast<std::size_t>(i)], d.lo(), d.hi()),
           d.hi()}));
    }
    s.modified = sol.modified;
    s.v0 = v0;
    candidates.push_back(std::move(s));
  } else {
    throw CharacterizationOpen(
        "no optimal mechanism is known for n = " + std::to_string(n) +
        ", k = " + std::to_string(k) + "; use the quantile construction instead");
  }
  WelfareSolution best;
  bool have = false;
  for (auto& c : candidates) {
    const double w = evaluate_priority(c, dists, false).welfare;
    if (!have || w > best.welfare + 1e-15) {
      best = {std::move(c), w};
      have = true;
    }
  }
  return best;
}

double expected_virtual_surplus(const SimultaneousMechanism& m,
                                const StrategyProfile& s,
                                const std::vector<ValueDistribution>& dists,
                                double v0) {
  return *exact_cell_sums(m, s, dists, v0, true).virtual_surplus;
}

}  // namespace bcauction
