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


// Acceptance suite: one PASS or FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bcauction/distributions.h"
#include "bcauction/evaluation.h"
#include "bcauction/mechanism.h"
#include "bcauction/oracle.h"
#include "bcauction/profit_reduction.h"
#include "bcauction/sequential.h"
#include "bcauction/threshold_solver.h"

using namespace bcauction;

namespace {

const ValueDistribution kUnit = ValueDistribution::Uniform(0.0, 1.0);

ValueDistribution triangular() {
  return ValueDistribution::Tabulate([](double v) { return v * v; }, 0.0, 1.0);
}

class Check {
 public:
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok_ = false;
      if (failures_++ < 8) notes_ += "      " + what + "\n";
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
    expect(std::abs(got - want) <= tol, os.str());
  }
  void note(const std::string& s) { info_ += "      " + s + "\n"; }
  bool ok() const { return ok_; }
  const std::string& notes() const { return notes_; }
  const std::string& info() const { return info_; }

 private:
  bool ok_ = true;
  int failures_ = 0;
  std::string notes_;
  std::string info_;
};

PrioritySpec ordered(const std::vector<double>& cuts, bool modified) {
  PrioritySpec s;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    s.thresholds.emplace_back(std::vector<double>{0.0, cuts[i], 1.0});
    s.priority_order.push_back(static_cast<int>(i));
  }
  s.modified = modified;
  return s;
}

// ---------------------------------------------------------------------------

void one_bit_welfare(Check& c) {
  const std::vector<ValueDistribution> d{kUnit, kUnit};
  const auto p = solve_mutually_centered(kUnit, kUnit, 2);
  c.near(p.x[1], 1.0 / 3, 1e-10, "lower cut");
  c.near(p.y[1], 2.0 / 3, 1e-10, "upper cut");
  const auto spec = two_bidder_spec(p.x, p.y, false, 0.0);
  const double w = expected_welfare_exact(build_game(spec), spec.thresholds, d, 0.0);
  c.near(w, 35.0 / 54, 1e-10, "welfare");
  c.near(benchmark_unbounded(d, 0.0, Objective::kWelfare) - w, 1.0 / 54, 1e-10, "loss");
  c.near(solve_welfare_optimal(d, 2, 0.0).welfare, 35.0 / 54, 1e-10, "best of both orders");
}

void centered_cuts(Check& c) {
  for (int k = 2; k <= 12; ++k) {
    const auto p = solve_mutually_centered(kUnit, kUnit, k);
    for (int i = 1; i < k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      c.near(p.x[ui], (2.0 * i - 1) / (2.0 * k - 1), 1e-9, "x_" + std::to_string(i) + " k=" + std::to_string(k));
      c.near(p.y[ui], 2.0 * i / (2.0 * k - 1), 1e-9, "y_" + std::to_string(i) + " k=" + std::to_string(k));
    }
  }
}

void loss_formulas(Check& c) {
  const std::vector<ValueDistribution> d{kUnit, kUnit};
  for (int k = 2; k <= 12; ++k) {
    const auto p = closed_form_uniform_welfare_2bidder(k);
    const auto spec = two_bidder_spec(p.x, p.y, false, 0.0);
    const double w = expected_welfare_exact(build_game(spec), spec.thresholds, d, 0.0);
    const double ks = 2.0 * k - 1;
    c.near(2.0 / 3 - w, 1.0 / (6 * ks * ks), 1e-10, "asymmetric loss k=" + std::to_string(k));
    const auto t = equally_spaced_thresholds(k);
    const auto sym = symmetric_tie_split_game(2, t, 0.0);
    const double ws = expected_welfare_exact(sym, {t, t}, d, 0.0);
    c.near(2.0 / 3 - ws, 1.0 / (6.0 * k * k), 1e-10, "symmetric loss k=" + std::to_string(k));
  }
}

void profit_1bit(Check& c) {
  const std::vector<ValueDistribution> d{kUnit, kUnit};
  const auto sol = solve_profit_optimal(d, 2, 0.0);
  c.expect(sol.spec.modified, "profit optimum is a modified game");
  c.near(sol.spec.thresholds[0][1], 0.5, 1e-10, "A cut");
  c.near(sol.spec.thresholds[1][1], 0.625, 1e-10, "B cut");
  const auto m = build_game(sol.spec);
  const double profit = expected_profit_exact(m, sol.spec.thresholds, d, 0.0);
  const double vs = expected_virtual_surplus(m, sol.spec.thresholds, d, 0.0);
  c.near(profit, 25.0 / 64, 1e-10, "profit");
  c.near(profit, vs, 1e-9, "profit vs virtual surplus");
  const double bench = benchmark_unbounded(d, 0.0, Objective::kProfit);
  c.near(bench, 5.0 / 12, 1e-10, "benchmark");
  c.note("profit loss vs 5/12: " + std::to_string(bench - profit));
}

void profit_n_bidders(Check& c) {
  const std::vector<ValueDistribution> d(5, kUnit);
  const auto sol = solve_profit_optimal(d, 2, 0.0);
  std::vector<double> cuts;
  for (const auto& t : sol.spec.thresholds) cuts.push_back(t[1]);
  std::sort(cuts.begin(), cuts.end());
  double y = 0.5;
  const double published[] = {0.5, 0.625, 0.695, 0.741, 0.775};
  for (std::size_t i = 0; i < 5; ++i) {
    c.near(cuts[i], y, 1e-10, "recursion cut " + std::to_string(i + 1));
    c.near(cuts[i], published[i], 5e-4, "published cut " + std::to_string(i + 1));
    y = 0.5 + y * y / 2;
  }
}

void n_bidder_losses(Check& c) {
  const std::vector<ValueDistribution> hundred(100, kUnit);
  const auto big = solve_profit_optimal(hundred, 2, 0.0);
  std::vector<double> ladder;
  for (const auto& t : big.spec.thresholds) ladder.push_back(t[1]);
  std::sort(ladder.begin(), ladder.end());
  for (int n = 1; n <= 100; ++n) {
    const double xn = ladder[static_cast<std::size_t>(n - 1)];
    c.expect(1 - xn <= 2.0 / n, "1 - x_n <= 2/n fails at n=" + std::to_string(n));
    if (n >= 15) {
      c.expect(xn <= (2.0 * n - 3) / (2.0 * n), "x_n <= (2n-3)/(2n) fails at n=" + std::to_string(n));
    }
  }
  double worst_w = 0.0;
  double worst_p = 0.0;
  for (int n = 2; n <= 100; ++n) {
    const std::vector<ValueDistribution> d(static_cast<std::size_t>(n), kUnit);
    const auto pg = solve_n_bidder_pg(kUnit, n);
    const auto ws = ordered(pg.cuts, pg.modified);
    const double wl = n / (n + 1.0) - evaluate_priority(ws, d, false).welfare;
    const auto pr = solve_profit_optimal(d, 2, 0.0);
    const double pl = benchmark_unbounded(kUnit, n, 0.0, Objective::kProfit) -
                      evaluate_priority(pr.spec, d, false).profit;
    c.expect(wl < 9.0 / n, "welfare loss >= 9/n at n=" + std::to_string(n));
    c.expect(pl < 9.0 / n, "profit loss >= 9/n at n=" + std::to_string(n));
    c.expect(wl >= -1e-9 && pl >= -1e-9, "negative loss at n=" + std::to_string(n));
    worst_w = std::max(worst_w, wl * n);
    worst_p = std::max(worst_p, pl * n);
  }
  c.note("max n * welfare loss " + std::to_string(worst_w) + ", max n * profit loss " +
         std::to_string(worst_p) + " (bound 9)");
}

std::vector<std::pair<std::string, ValueDistribution>> battery() {
  return {
      {"uniform", kUnit},
      {"triangular", triangular()},
      {"decreasing", ValueDistribution::Tabulate([](double v) { return 1 - (1 - v) * (1 - v); },
                                                 0.0, 1.0)},
      {"cubic", ValueDistribution::Tabulate([](double v) { return v * v * v; }, 0.0, 1.0)},
      {"bimodal", ValueDistribution::Tabulate(
                      [](double v) {
                        return 0.5 * std::pow(v, 4) + 0.5 * (1 - std::pow(1 - v, 4));
                      },
                      0.0, 1.0)},
  };
}

void loss_bounds(Check& c) {
  for (const auto& [name, law] : std::vector<std::pair<std::string, ValueDistribution>>{
           {"uniform", kUnit}, {"triangular", triangular()}}) {
    const std::vector<ValueDistribution> d{law, law};
    const double bench = benchmark_unbounded(d, 0.0, Objective::kWelfare);
    for (int k : {4, 8, 16, 32, 64}) {
      const auto spec = quantile_mechanism(d, k, 0.0);
      const double loss = bench - evaluate_priority(spec, d, false).welfare;
      c.expect(loss < 8.0 / (k * k) && loss > -1e-9,
               "quantile loss " + std::to_string(loss) + " on " + name + " k=" + std::to_string(k));
    }
  }
  for (const auto& [name, law] : battery()) {
    for (int n : {2, 3}) {
      const std::vector<ValueDistribution> d(static_cast<std::size_t>(n), law);
      const double bench = benchmark_unbounded(d, 0.0, Objective::kWelfare);
      for (int k : {2, 3, 4, 8, 16}) {
        PrioritySpec s;
        for (int i = 0; i < n; ++i) {
          s.thresholds.push_back(equally_spaced_thresholds(k));
          s.priority_order.push_back(i);
        }
        const double loss = bench - evaluate_priority(s, d, false).welfare;
        c.expect(loss < 1.0 / k, "equally spaced loss on " + name + " n=" + std::to_string(n) +
                                     " k=" + std::to_string(k));
      }
    }
  }
}

void symmetric_optima(Check& c) {
  const std::vector<ValueDistribution> d{kUnit, kUnit};
  const auto w = symmetric_optimal_1bit(Objective::kWelfare);
  c.near(expected_welfare_exact(w.mechanism, w.cuts, d, 0.0), 0.625, 1e-6, "symmetric welfare");
  c.near(w.cuts[0][1], 0.5, 1e-6, "symmetric welfare cut");
  c.near(w.cuts[1][1], 0.5, 1e-6, "symmetric welfare cut");
  const auto p = symmetric_optimal_1bit(Objective::kProfit);
  const double x = 1 / std::sqrt(3.0);
  c.near(p.cuts[0][1], x, 1e-6, "symmetric profit cut");
  const double pv = expected_profit_exact(p.mechanism, p.cuts, d, 0.0);
  c.near(pv, x - x * x * x, 1e-6, "symmetric profit");
  c.near(pv, 0.384900, 1e-6, "symmetric profit (decimal)");
  c.expect(0.625 < 35.0 / 54, "symmetric welfare below asymmetric");
  c.expect(pv < 25.0 / 64, "symmetric profit below asymmetric");
}

void oracle_certification(Check& c) {
  c.expect(enumerate_monotone_2bidder(2, false).enumeration.size() == 6, "6 tables at k=2");
  c.expect(enumerate_monotone_2bidder(3, false).enumeration.size() == 20, "20 tables at k=3");
  for (const auto& [name, law] : std::vector<std::pair<std::string, ValueDistribution>>{
           {"uniform", kUnit}, {"triangular", triangular()}}) {
    const std::vector<ValueDistribution> d{law, law};
    for (int k : {2, 3}) {
      const auto family = enumerate_monotone_2bidder(k, true);
      for (Objective obj : {Objective::kWelfare, Objective::kProfit}) {
        const auto cert = certify_2bidder_optimality(k, d, 0.0, obj);
        const std::string tag = name + " k=" + std::to_string(k) +
                                (obj == Objective::kWelfare ? " welfare" : " profit");
        c.expect(cert.pass, tag + ": " + cert.report);
        const auto id = static_cast<std::size_t>(cert.argmax_id);
        if (id < family.enumeration.size() && obj == Objective::kWelfare) {
          c.expect(rows_and_columns_distinct(family.enumeration[id].mechanism),
                   tag + ": winning table repeats a row or column");
        }
        c.note(tag + ": best " + std::to_string(cert.best_value));
      }
    }
  }
  const std::vector<ValueDistribution> d{kUnit, kUnit};
  double best12 = 0.0;
  for (const auto& t : enumerate_monotone_2bidder(1, 2, false).enumeration) {
    best12 = std::max(best12, optimize_thresholds(t.mechanism, d, 0.0, Objective::kWelfare).value);
  }
  c.near(best12, 5.0 / 8, 1e-9, "(1,2) optimum");
  c.expect(best12 < 35.0 / 54, "(1,2) optimum below (2,2)");
}

void incentives(Check& c) {
  const auto tri = triangular();
  std::vector<std::pair<PrioritySpec, std::vector<ValueDistribution>>> games;
  for (const auto& law : {kUnit, tri}) {
    const std::vector<ValueDistribution> d{law, law};
    for (int k = 2; k <= 6; ++k) {
      games.push_back({solve_welfare_optimal(d, k, 0.0).spec, d});
      games.push_back({solve_profit_optimal(d, k, 0.0).spec, d});
      const auto m = solve_mpg_thresholds(law, law, k, 0.2);
      games.push_back({two_bidder_spec(m.x, m.y, m.modified, 0.2), d});
    }
    for (int n : {3, 5}) {
      const std::vector<ValueDistribution> dn(static_cast<std::size_t>(n), law);
      games.push_back({solve_welfare_optimal(dn, 2, 0.0).spec, dn});
      games.push_back({solve_profit_optimal(dn, 2, 0.0).spec, dn});
    }
    const std::vector<ValueDistribution> mixed{kUnit, tri};
    games.push_back({solve_profit_optimal(mixed, 3, 0.0).spec, mixed});
  }
  for (std::size_t g = 0; g < games.size(); ++g) {
    const auto& [spec, d] = games[g];
    const auto m = build_game(spec);
    c.expect(verify_dominant_strategy(m, spec.thresholds, d).pass,
             "dominant strategy fails for game " + std::to_string(g));
    c.expect(verify_ex_post_ir(m, spec.thresholds, d).pass,
             "ex post IR fails for game " + std::to_string(g));
  }
  const std::vector<ValueDistribution> d{kUnit, kUnit};
  for (int k = 2; k <= 6; ++k) {
    StrategyProfile s{equally_spaced_thresholds(k), equally_spaced_thresholds(k)};
    const auto g = build_game(two_bidder_spec(s[0], s[1], false, 0.0));
    for (int it = 0; it < 3000; ++it) {
      for (int i = 0; i < 2; ++i) {
        s[static_cast<std::size_t>(i)] =
            best_response_thresholds(g, s, d, i, ResponseObjective::kWelfare);
        int interior = 0;
        for (int j = 1; j < k; ++j) {
          const double v = s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          interior += v > 0.0 && v < 1.0;
        }
        if (interior > k - 1) c.expect(false, "too many breakpoints");
      }
    }
    const auto want = closed_form_uniform_welfare_2bidder(k);
    for (std::size_t j = 0; j <= static_cast<std::size_t>(k); ++j) {
      c.near(s[0][j], want.x[j], 1e-8, "iterated x k=" + std::to_string(k));
      c.near(s[1][j], want.y[j], 1e-8, "iterated y k=" + std::to_string(k));
    }
  }
}

SequentialNode random_node(std::mt19937_64& eng, int n, int depth) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SequentialNode node;
  if (depth == 0 || u(eng) < 0.2) {
    node.winner = static_cast<int>(u(eng) * (n + 1));
    for (int i = 0; i < n; ++i) node.payments.push_back(0.5 * u(eng));
    return node;
  }
  node.bidder = static_cast<int>(u(eng) * n);
  node.bits = 1;
  for (int m = 0; m < 2; ++m) node.children.push_back(random_node(eng, n, depth - 1));
  return node;
}

void random_strategy(std::mt19937_64& eng, const SequentialNode& node, const std::string& h,
                     SequentialStrategy& s) {
  if (node.is_leaf()) return;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  s[h] = ThresholdVector({0.0, u(eng), 1.0});
  for (int m = 0; m < 2; ++m) random_strategy(eng, node.children[static_cast<std::size_t>(m)], child_history(h, m), s);
}

void sequential(Check& c) {
  const std::vector<ValueDistribution> d{kUnit, kUnit};
  const auto t = alice_bob_example_tree();
  const auto s = backward_induction_best_response(t, d);
  c.near(s.at("")[1], 0.5, 1e-12, "Alice's cut");
  c.near(s.at("0")[1], 0.25, 1e-12, "Bob's cut after 0");
  c.near(s.at("1")[1], 0.75, 1e-12, "Bob's cut after 1");
  const double w = evaluate_sequential(t, s, d, 0.0).expected_welfare;
  c.near(w, 21.0 / 32, 1e-12, "sequential welfare");
  c.expect(w > 35.0 / 54, "sequential welfare beats the simultaneous optimum");
  const auto f = flatten_to_simultaneous(t, s, d, 0.0);
  c.near(expected_welfare_exact(f.mechanism, f.strategies, d, 0.0), w, 1e-12, "flattened welfare");
  c.expect(f.total_bits <= f.bit_bound && f.total_bits == 3 && f.bit_bound == 5, "bit bound");

  std::mt19937_64 eng(2026);
  int trees = 0;
  while (trees < 50) {
    SequentialMechanismTree r;
    r.n = 2 + trees % 2;
    r.root = random_node(eng, r.n, 5);
    if (r.root.is_leaf()) continue;
    SequentialStrategy rs;
    random_strategy(eng, r.root, "", rs);
    const std::vector<ValueDistribution> dn(static_cast<std::size_t>(r.n), trees % 3 ? kUnit : triangular());
    const auto a = sequential_cell_sums(r, rs, dn, 0.0, false);
    const auto fr = flatten_to_simultaneous(r, rs, dn, 0.0);
    const auto b = exact_cell_sums(fr.mechanism, fr.strategies, dn, 0.0, false);
    c.near(b.welfare, a.welfare, 1e-12, "random tree welfare " + std::to_string(trees));
    c.near(b.profit, a.profit, 1e-12, "random tree profit " + std::to_string(trees));
    c.expect(fr.total_bits <= fr.bit_bound, "random tree bit bound " + std::to_string(trees));
    ++trees;
  }
}

SimultaneousMechanism random_table(std::mt19937_64& eng, int n, int k, double v0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SimultaneousMechanism m(std::vector<int>(static_cast<std::size_t>(n), k), v0);
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    std::vector<double> w(static_cast<std::size_t>(n + 1));
    double total = 0.0;
    for (auto& x : w) total += (x = u(eng) < 0.5 ? u(eng) : 0.0);
    if (total == 0.0) {
      w[static_cast<std::size_t>(u(eng) * (n + 1))] = 1.0;
    } else {
      for (auto& x : w) x /= total;
    }
    m.set_weights(idx, w);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (auto& x : p) x = 0.5 * u(eng);
    m.set_payments(idx, p);
  }
  return m;
}

void monte_carlo(Check& c) {
  std::mt19937_64 eng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto tri = triangular();
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    const int k = 2 + trial % 3;
    std::vector<ValueDistribution> d;
    StrategyProfile s;
    for (int i = 0; i < n; ++i) {
      d.push_back((trial + i) % 2 ? tri : kUnit);
      std::vector<double> cuts{0.0, 1.0};
      for (int j = 1; j < k; ++j) cuts.push_back(u(eng));
      std::sort(cuts.begin(), cuts.end());
      s.emplace_back(cuts);
    }
    const double v0 = trial % 4 == 0 ? 0.2 : 0.0;
    SimultaneousMechanism m({1}, 0.0);
    if (trial % 2 == 0) {
      PrioritySpec p;
      p.thresholds = s;
      for (int i = 0; i < n; ++i) p.priority_order.push_back(i);
      std::shuffle(p.priority_order.begin(), p.priority_order.end(), eng);
      p.modified = k > 1 && trial % 4 == 0;
      p.v0 = v0;
      m = build_game(p);
    } else {
      m = random_table(eng, n, k, v0);
    }
    const auto exact = exact_cell_sums(m, s, d, v0, false);
    const auto mc = monte_carlo_evaluate(m, s, d, v0, {1000000, 1000u + static_cast<unsigned>(trial), 0});
    const double ew = std::abs(mc.expected_welfare - exact.welfare);
    const double ep = std::abs(mc.expected_profit - exact.profit);
    // The 1e-12 only absorbs summation rounding when the estimate is constant.
    c.expect(ew <= 4 * *mc.mc_stderr + 1e-12, "welfare outside 4 stderr, trial " + std::to_string(trial));
    c.expect(ep <= 4 * *mc.mc_profit_stderr + 1e-12, "profit outside 4 stderr, trial " + std::to_string(trial));
    if (*mc.mc_stderr > 0) worst = std::max(worst, ew / *mc.mc_stderr);
    if (*mc.mc_profit_stderr > 0) worst = std::max(worst, ep / *mc.mc_profit_stderr);
    if (trial % 10 == 1) {
      const auto serial = monte_carlo_evaluate(m, s, d, v0, {1000000, 1000u + static_cast<unsigned>(trial), 1});
      const auto three = monte_carlo_evaluate(m, s, d, v0, {1000000, 1000u + static_cast<unsigned>(trial), 3});
      for (const auto* r : {&serial, &three}) {
        c.expect(r->expected_welfare == mc.expected_welfare &&
                     r->expected_profit == mc.expected_profit &&
                     *r->mc_stderr == *mc.mc_stderr && *r->mc_profit_stderr == *mc.mc_profit_stderr,
                 "thread count changed the estimate, trial " + std::to_string(trial));
      }
    }
  }
  c.note("largest deviation " + std::to_string(worst) + " stderr");
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;  // 0: no limit
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "two-bidder one-bit welfare optimum 35/54", 1, one_bit_welfare},
      {2, "mutually centered cuts for k = 2..12", 5, centered_cuts},
      {3, "exact welfare losses 1/(6(2k-1)^2) and 1/(6k^2)", 0, loss_formulas},
      {4, "two-bidder one-bit profit optimum 25/64", 0, profit_1bit},
      {5, "five-bidder profit cuts", 0, profit_n_bidders},
      {6, "n-bidder losses below 9/n for n = 2..100", 10, n_bidder_losses},
      {7, "quantile and equally spaced loss bounds", 0, loss_bounds},
      {8, "symmetric one-bit optima", 0, symmetric_optima},
      {9, "exhaustive certification for k = 2, 3", 120, oracle_certification},
      {10, "dominant strategies, ex post IR, best responses", 0, incentives},
      {11, "sequential example and flattening", 0, sequential},
      {12, "Monte-Carlo consistency and reproducibility", 0, monte_carlo},
  };
  int failed = 0;
  for (const auto& cr : all) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.limit_s > 0 && secs > cr.limit_s) {
      c.expect(false, "runtime " + std::to_string(secs) + " s over the limit");
    }
    char timing[64];
    if (cr.limit_s > 0) {
      std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, cr.limit_s);
    } else {
      std::snprintf(timing, sizeof timing, "%.2f s", secs);
    }
    std::printf("%s criterion %2d: %s (%s)\n", c.ok() ? "PASS" : "FAIL", cr.id, cr.title, timing);
    std::fputs(c.notes().c_str(), stdout);
    std::fputs(c.info().c_str(), stdout);
    std::fflush(stdout);
    failed += !c.ok();
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
