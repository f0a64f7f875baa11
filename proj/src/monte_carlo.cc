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

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <thread>

#include "bcauction/errors.h"
#include "bcauction/evaluation.h"

namespace bcauction {

namespace {

constexpr std::uint64_t kChunk = 1 << 15;

// Running mean and sum of squared deviations.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    if (n == 0.0) {
      *this = o;
      return;
    }
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * (o.n / total);
    m2 += o.m2 + d * d * (n * o.n / total);
    n = total;
  }
  double stderr_of_mean() const {
    if (n < 2.0) return 0.0;
    return std::sqrt(m2 / (n - 1.0) / n);
  }
};

struct ChunkResult {
  Moments welfare, profit, virt;
};

}  // namespace

EvaluationReport monte_carlo_evaluate(const SimultaneousMechanism& m,
                                      const StrategyProfile& s,
                                      const std::vector<ValueDistribution>& dists,
                                      double v0, const MonteCarloConfig& cfg) {
  check_strategies(m, s);
  if (static_cast<int>(dists.size()) != m.n()) {
    throw ArgumentError("need one distribution per bidder");
  }
  if (cfg.samples < 1) throw ArgumentError("Monte-Carlo needs at least one sample");
  std::vector<std::shared_ptr<const VirtualTransform>> virt;
  for (const auto& d : dists) {
    auto t = std::make_shared<const VirtualTransform>(d);
    if (!t->regular()) {
      virt.clear();
      break;
    }
    virt.push_back(std::move(t));
  }
  const bool regular = !virt.empty();
  const auto n = static_cast<std::size_t>(m.n());
  const std::uint64_t chunks = (cfg.samples + kChunk - 1) / kChunk;
  std::vector<ChunkResult> results(chunks);

  auto run_chunk = [&](std::uint64_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                      static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(c),
                      static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 eng(seq);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(cfg.samples, begin + kChunk);
    ChunkResult r;
    std::vector<double> v(n);
    std::vector<int> b(n);
    for (std::uint64_t it = begin; it < end; ++it) {
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::clamp(dists[i].quantile(unif(eng)), s[i].lo(), s[i].hi());
        b[i] = s[i].bid_of(v[i]);
      }
      // Always drawn, so streams stay aligned whether or not it is used.
      const double pick = unif(eng);
      const std::size_t idx = m.index_of(b);
      const auto& w = m.weights(idx);
      std::size_t winner = w.size() - 1;
      double acc = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        acc += w[j];
        if (pick < acc) {
          winner = j;
          break;
        }
      }
      while (winner > 0 && w[winner] <= 0.0) --winner;
      if (winner == 0) {
        r.welfare.add(v0);
        r.profit.add(v0);
        r.virt.add(v0);
      } else {
        const std::size_t i = winner - 1;
        r.welfare.add(v[i]);
        r.profit.add(m.payment(idx, static_cast<int>(i)));
        if (regular) {
          r.virt.add(virt[i]->value(std::clamp(v[i], dists[i].lo(), dists[i].hi())));
        }
      }
    }
    results[c] = r;
  };

  unsigned threads = cfg.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t c = t; c < chunks; c += threads) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  ChunkResult total;
  for (const auto& r : results) {
    total.welfare.merge(r.welfare);
    total.profit.merge(r.profit);
    total.virt.merge(r.virt);
  }
  EvaluationReport rep;
  rep.expected_welfare = total.welfare.mean;
  rep.expected_profit = total.profit.mean;
  if (regular) rep.expected_virtual_surplus = total.virt.mean;
  rep.method = "monte-carlo";
  rep.mc_samples = cfg.samples;
  rep.mc_stderr = total.welfare.stderr_of_mean();
  rep.mc_profit_stderr = total.profit.stderr_of_mean();
  std::string desc;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) desc += "; ";
    desc += "bidder " + std::to_string(i) + " threshold strategy";
  }
  rep.strategies = desc;
  rep.benchmark_welfare = benchmark_unbounded(dists, v0, Objective::kWelfare);
  rep.welfare_loss = rep.benchmark_welfare - rep.expected_welfare;
  if (regular) {
    rep.benchmark_profit = benchmark_unbounded(dists, v0, Objective::kProfit);
    rep.profit_loss = *rep.benchmark_profit - rep.expected_profit;
  }
  return rep;
}

}  // namespace bcauction
