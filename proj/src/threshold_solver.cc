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

#include "bcauction/threshold_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "bcauction/errors.h"

namespace bcauction {

namespace {

double union_lo(const ValueDistribution& a, const ValueDistribution& b) {
  return std::min(a.lo(), b.lo());
}
double union_hi(const ValueDistribution& a, const ValueDistribution& b) {
  return std::max(a.hi(), b.hi());
}

// Smallest z in (a, hi] with clipped_mean(d, a, z) >= target, or nullopt when
// even z = hi falls short.
std::optional<double> solve_upper(const ValueDistribution& d, double a,
                                  double target, double hi) {
  if (clipped_mean(d, a, hi) < target) return std::nullopt;
  double lo = a;
  double up = hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + up);
    if (mid <= lo || mid >= up) break;
    if (clipped_mean(d, a, mid) < target) {
      lo = mid;
    } else {
      up = mid;
    }
  }
  return up;
}

struct Ladder {
  std::vector<double> x, y;
  bool overshoot = false;
};

// Forward propagation of the centering equations from x[start] upward. x and
// y must already hold entries 0..start (y up to start - 1).
void propagate(const ValueDistribution& dA, const ValueDistribution& dB, int k,
               int start, double hi, Ladder& l) {
  for (int i = start; i < k; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const auto yi = solve_upper(dB, l.y[ui - 1], l.x[ui], hi);
    if (!yi) {
      l.overshoot = true;
      return;
    }
    l.y[ui] = *yi;
    const auto xn = solve_upper(dA, l.x[ui], l.y[ui], hi);
    if (!xn) {
      l.overshoot = true;
      return;
    }
    l.x[ui + 1] = *xn;
  }
}

double seller_adjusted_mean(const ValueDistribution& dA, double v0, double s) {
  const double fs = dA.cdf(s);
  if (!(fs > 0.0)) {
    throw DegenerateInterval(
        "first B cut undefined: A's law has no mass below the second A cut");
  }
  const double below = v0 > dA.lo() ? v0 * dA.cdf(v0) : 0.0;
  return (below + dA.partial_moment(v0, s)) / fs;
}

MutuallyCenteredPair finish(const ValueDistribution& dA,
                            const ValueDistribution& dB, Ladder l, double lo,
                            double hi, bool modified, double v0,
                            const SolverConfig& cfg) {
  const std::size_t k = l.x.size() - 1;
  l.x[0] = l.y[0] = lo;
  l.x[k] = l.y[k] = hi;
  for (std::size_t i = 1; i <= k; ++i) {
    l.x[i] = std::clamp(l.x[i], l.x[i - 1], hi);
    l.y[i] = std::clamp(l.y[i], l.y[i - 1], hi);
  }
  MutuallyCenteredPair p{ThresholdVector(l.x), ThresholdVector(l.y), 0.0,
                         modified};
  p.residual = centering_residual(dA, dB, p, v0);
  // Tolerance scales with the support width and the length of the ladder.
  const double tol = std::max(cfg.abs_tol, 1e-12) * (hi - lo) *
                     static_cast<double>(4 * k);
  // Where a conditional mean is flat (a cut outside one law's support) the
  // forward ladder can stop at the wrong end of a range of solutions; finish
  // with Gauss-Seidel sweeps of the same equations.
  for (int sweep = 0; sweep < 200000 && p.residual > tol; ++sweep) {
    for (std::size_t i = 1; i < k; ++i) {
      if (modified && i == 1) {
        l.x[1] = v0;
        l.y[1] = seller_adjusted_mean(dA, v0, l.x[2]);
        continue;
      }
      l.x[i] = std::clamp(clipped_mean(dB, l.y[i - 1], l.y[i]), l.x[i - 1], l.x[i + 1]);
      l.y[i] = std::clamp(clipped_mean(dA, l.x[i], l.x[i + 1]), l.y[i - 1], l.y[i + 1]);
    }
    if (sweep % 64 == 63) {
      p = {ThresholdVector(l.x), ThresholdVector(l.y), 0.0, modified};
      p.residual = centering_residual(dA, dB, p, v0);
    }
  }
  if (!(p.residual <= std::max(tol, 1e-10 * (hi - lo)))) {
    throw SolverError("centering equations not met to tolerance", p.residual);
  }
  return p;
}

}  // namespace

double clipped_mean(const ValueDistribution& d, double a, double b) {
  const double lo = std::max(a, d.lo());
  const double hi = std::min(b, d.hi());
  if (lo < hi && d.mass(lo, hi) > 0.0) return conditional_mean(d, lo, hi);
  return 0.5 * (a + b);
}

double centering_residual(const ValueDistribution& dA,
                          const ValueDistribution& dB,
                          const MutuallyCenteredPair& p, double v0) {
  const auto& x = p.x.cuts();
  const auto& y = p.y.cuts();
  const std::size_t k = x.size() - 1;
  double r = 0.0;
  for (std::size_t i = 1; i < k; ++i) {
    if (p.modified && i == 1) {
      r = std::max(r, std::abs(x[1] - v0));
      r = std::max(r, std::abs(y[1] - seller_adjusted_mean(dA, v0, x[2])));
      continue;
    }
    if (y[i] > y[i - 1]) {
      r = std::max(r, std::abs(x[i] - clipped_mean(dB, y[i - 1], y[i])));
    } else {
      r = std::max(r, std::abs(x[i] - y[i]));
    }
    if (x[i + 1] > x[i]) {
      r = std::max(r, std::abs(y[i] - clipped_mean(dA, x[i], x[i + 1])));
    } else {
      r = std::max(r, std::abs(y[i] - x[i]));
    }
  }
  return r;
}

MutuallyCenteredPair solve_mutually_centered(const ValueDistribution& dA,
                                             const ValueDistribution& dB, int k,
                                             const SolverConfig& cfg) {
  if (k < 2) throw ArgumentError("mutually centered thresholds need k >= 2");
  if (!(cfg.abs_tol > 0.0) || cfg.max_iter < 1) {
    throw ArgumentError("solver needs abs_tol > 0 and max_iter >= 1");
  }
  const double lo = union_lo(dA, dB);
  const double hi = union_hi(dA, dB);
  const auto uk = static_cast<std::size_t>(k);
  auto run = [&](double x1) {
    Ladder l;
    l.x.assign(uk + 1, lo);
    l.y.assign(uk + 1, lo);
    l.x[1] = x1;
    propagate(dA, dB, k, 1, hi, l);
    return l;
  };
  double a = cfg.bracket ? cfg.bracket->first : lo;
  double b = cfg.bracket ? cfg.bracket->second : hi;
  a = std::max(a, lo);
  b = std::min(b, hi);
  if (!(a < b)) throw ArgumentError("empty outer bracket");
  // Bracket endpoints may not straddle the root; widen to the support if so.
  auto too_high = [&](double x1) {
    const Ladder l = run(x1);
    return l.overshoot || l.x[uk] >= hi;
  };
  if (too_high(a)) a = lo;
  if (b < hi && !too_high(b)) b = hi;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (too_high(mid)) {
      b = mid;
    } else {
      a = mid;
    }
  }
  Ladder l = run(a > lo ? a : 0.5 * (a + b));
  if (l.overshoot) throw SolverError("outer bisection lost its bracket", b - a);
  return finish(dA, dB, std::move(l), lo, hi, false, 0.0, cfg);
}

MutuallyCenteredPair solve_mpg_thresholds(const ValueDistribution& dA,
                                          const ValueDistribution& dB, int k,
                                          double v0, const SolverConfig& cfg) {
  if (k < 2) throw ArgumentError("modified thresholds need k >= 2");
  const double lo = union_lo(dA, dB);
  const double hi = union_hi(dA, dB);
  if (!(v0 < hi)) throw ArgumentError("seller value must lie below the support top");
  if (v0 <= lo) return solve_mutually_centered(dA, dB, k, cfg);
  const auto uk = static_cast<std::size_t>(k);
  Ladder l;
  l.x.assign(uk + 1, lo);
  l.y.assign(uk + 1, lo);
  l.x[1] = v0;
  if (k == 2) {
    l.y[1] = seller_adjusted_mean(dA, v0, hi);
    return finish(dA, dB, std::move(l), lo, hi, true, v0, cfg);
  }
  auto run = [&](double s) {
    Ladder r = l;
    r.x[2] = s;
    if (!(dA.cdf(s) > 0.0)) return r;  // z too small; caller moves up
    r.y[1] = seller_adjusted_mean(dA, v0, s);
    propagate(dA, dB, k, 2, hi, r);
    return r;
  };
  auto too_high = [&](double s) {
    if (!(dA.cdf(s) > 0.0)) return false;
    const Ladder r = run(s);
    return r.overshoot || r.x[uk] >= hi;
  };
  double a = cfg.bracket ? std::max(cfg.bracket->first, v0) : v0;
  double b = cfg.bracket ? std::min(cfg.bracket->second, hi) : hi;
  if (too_high(a)) a = v0;
  if (b < hi && !too_high(b)) b = hi;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (too_high(mid)) {
      b = mid;
    } else {
      a = mid;
    }
  }
  const double s = a > v0 ? a : 0.5 * (a + b);
  if (!(dA.cdf(s) > 0.0)) {
    throw DegenerateInterval("A's law has no mass below the second A cut");
  }
  Ladder r = run(s);
  if (r.overshoot) throw SolverError("outer bisection lost its bracket", b - a);
  return finish(dA, dB, std::move(r), lo, hi, true, v0, cfg);
}

MutuallyCenteredPair closed_form_uniform_welfare_2bidder(int k, double lo,
                                                         double hi) {
  if (k < 2) throw ArgumentError("closed form needs k >= 2");
  if (!(lo < hi)) throw ArgumentError("closed form needs lo < hi");
  const auto uk = static_cast<std::size_t>(k);
  std::vector<double> x(uk + 1), y(uk + 1);
  const double den = 2.0 * k - 1.0;
  x[0] = y[0] = lo;
  x[uk] = y[uk] = hi;
  for (int i = 1; i < k; ++i) {
    x[static_cast<std::size_t>(i)] = lo + (hi - lo) * (2.0 * i - 1.0) / den;
    y[static_cast<std::size_t>(i)] = lo + (hi - lo) * (2.0 * i) / den;
  }
  return {ThresholdVector(x), ThresholdVector(y), 0.0, false};
}

MutuallyCenteredPair closed_form_uniform_profit_2bidder(int k) {
  if (k < 2) throw ArgumentError("closed form needs k >= 2");
  double theta = 0.625;  // the general formula is 0/0 at k = 2
  if (k > 2) {
    const double m = 2.0 * k - 3.0;
    const double alpha = 1.0 / (m * m);
    theta = (-2.0 * alpha + std::sqrt(1.0 + 3.0 * alpha)) / (2.0 * (1.0 - alpha));
  }
  const auto uk = static_cast<std::size_t>(k);
  std::vector<double> x(uk + 1), y(uk + 1);
  const double m = 2.0 * k - 3.0;
  x[0] = y[0] = 0.0;
  x[uk] = y[uk] = 1.0;
  x[1] = 0.5;
  for (int i = 1; i < k; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    y[ui] = theta + (2.0 * i - 2.0) * (1.0 - theta) / m;
    if (i >= 2) x[ui] = theta + (2.0 * i - 3.0) * (1.0 - theta) / m;
  }
  return {ThresholdVector(x), ThresholdVector(y), 0.0, true};
}

namespace {

void check_n(int n) {
  if (n < 1) throw ArgumentError("need at least one bidder");
}

}  // namespace

double n_bidder_2bid_welfare(const ValueDistribution& d,
                             const std::vector<double>& cuts, bool modified,
                             double v0) {
  const std::size_t n = cuts.size();
  check_n(static_cast<int>(n));
  double w = 0.0;
  double above = 1.0;  // product of F over higher-priority bidders
  for (std::size_t i = n; i-- > 0;) {
    w += above * d.partial_moment(cuts[i], d.hi());
    above *= d.cdf(cuts[i]);
  }
  if (modified) {
    w += above * v0;
  } else {
    // All bid 0: the top-priority bidder wins with E(v | v <= x_n).
    const double fn = d.cdf(cuts.back());
    if (fn > 0.0) w += (above / fn) * d.partial_moment(d.lo(), cuts.back());
  }
  return w;
}

NBidderSolution solve_n_bidder_pg(const ValueDistribution& d, int n,
                                  const SolverConfig& cfg) {
  if (n < 2) throw ArgumentError("n-bidder solver needs n >= 2");
  const double lo = d.lo();
  const double hi = d.hi();
  const auto un = static_cast<std::size_t>(n);
  auto ladder = [&](double xn) {
    std::vector<double> x(un);
    x[un - 1] = xn;
    x[0] = clipped_mean(d, lo, xn);
    for (std::size_t m = 0; m + 2 < un; ++m) {
      x[m + 1] = d.partial_moment(x[m], hi) + d.cdf(x[m]) * x[m];
    }
    return x;
  };
  auto gap = [&](double xn) {
    const auto x = ladder(xn);
    double num = 0.0;
    double prod = 1.0;
    for (std::size_t i = un - 1; i-- > 0;) {
      num += prod * d.partial_moment(x[i], hi);
      prod *= d.cdf(x[i]);
    }
    if (!(prod < 1.0)) return hi - xn;
    return num / (1.0 - prod) - xn;
  };
  double a = cfg.bracket ? std::max(cfg.bracket->first, lo) : lo;
  double b = cfg.bracket ? std::min(cfg.bracket->second, hi) : hi;
  if (gap(a) <= 0.0) a = lo;
  if (gap(b) > 0.0) b = hi;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (gap(mid) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  const double xn = 0.5 * (a + b);
  NBidderSolution s;
  s.cuts = ladder(xn);
  s.modified = false;
  s.residual = std::abs(gap(xn));
  if (s.residual > std::max(1e-9, 1e3 * cfg.abs_tol) * (hi - lo)) {
    throw SolverError("n-bidder fixed point not reached", s.residual);
  }
  s.welfare = n_bidder_2bid_welfare(d, s.cuts, false, 0.0);
  return s;
}

NBidderSolution solve_n_bidder_mpg(const ValueDistribution& d, int n, double v0) {
  if (n < 1) throw ArgumentError("n-bidder solver needs n >= 1");
  if (!(v0 < d.hi())) throw ArgumentError("seller value must lie below the support top");
  const auto un = static_cast<std::size_t>(n);
  NBidderSolution s;
  s.cuts.resize(un);
  s.cuts[0] = std::max(v0, d.lo());
  for (std::size_t m = 0; m + 1 < un; ++m) {
    const double y = s.cuts[m];
    s.cuts[m + 1] = d.partial_moment(y, d.hi()) + d.cdf(y) * y;
  }
  s.modified = true;
  s.welfare = n_bidder_2bid_welfare(d, s.cuts, true, v0);
  return s;
}

NBidderSolution solve_n_bidder_welfare_2bid(const ValueDistribution& d, int n,
                                            double v0, const SolverConfig& cfg) {
  NBidderSolution pg = solve_n_bidder_pg(d, n, cfg);
  if (!(v0 > d.lo())) return pg;
  NBidderSolution mpg = solve_n_bidder_mpg(d, n, v0);
  // The unmodified game never lets the seller keep the item.
  return mpg.welfare > pg.welfare ? mpg : pg;
}

double symmetric_2bid_welfare(const ValueDistribution& d, int n, double x) {
  const double f = d.cdf(x);
  const double fn1 = std::pow(f, n - 1);
  double w = fn1 * d.partial_moment(d.lo(), x);
  // (1 - F^n) / (1 - F) = 1 + F + ... + F^{n-1}
  double geo = 0.0;
  double p = 1.0;
  for (int i = 0; i < n; ++i) {
    geo += p;
    p *= f;
  }
  w += geo * d.partial_moment(x, d.hi());
  return w;
}

double symmetric_threshold_n_2bid(const ValueDistribution& d, int n) {
  if (n < 2) throw ArgumentError("symmetric threshold needs n >= 2");
  if (d.kind() == ValueDistribution::Kind::kUniform) {
    return d.lo() + (d.hi() - d.lo()) * std::pow(static_cast<double>(n),
                                                 -1.0 / (n - 1.0));
  }
  const auto r = boost::math::tools::brent_find_minima(
      [&](double x) { return -symmetric_2bid_welfare(d, n, x); }, d.lo(), d.hi(),
      std::numeric_limits<double>::digits / 2);
  return r.first;
}

PrioritySpec quantile_mechanism(const std::vector<ValueDistribution>& dists,
                                int k, double v0) {
  const int n = static_cast<int>(dists.size());
  check_n(n);
  if (k < 2 * n) {
    throw ArgumentError("quantile mechanism needs k >= 2n, got k = " +
                        std::to_string(k) + ", n = " + std::to_string(n));
  }
  double lo = dists[0].lo();
  double hi = dists[0].hi();
  for (const auto& d : dists) {
    lo = std::min(lo, d.lo());
    hi = std::max(hi, d.hi());
  }
  std::vector<double> cuts;
  const int base = (k - 2) / n;
  const int extra = (k - 2) % n;
  for (int i = 0; i < n; ++i) {
    const int alpha = base + (i < extra ? 1 : 0);
    for (int j = 1; j <= alpha; ++j) {
      cuts.push_back(dists[static_cast<std::size_t>(i)].quantile(
          static_cast<double>(j) / (alpha + 1)));
    }
  }
  if (v0 > lo && v0 < hi) cuts.push_back(v0);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> uniq;
  for (double c : cuts) {
    if (!(c > lo && c < hi)) continue;
    if (uniq.empty() || c - uniq.back() > 1e-12) uniq.push_back(c);
  }
  // Pad at midpoints of the widest gaps.
  const auto want = static_cast<std::size_t>(k - 1);
  while (uniq.size() < want) {
    std::vector<double> full;
    full.push_back(lo);
    full.insert(full.end(), uniq.begin(), uniq.end());
    full.push_back(hi);
    std::size_t best = 0;
    for (std::size_t g = 1; g + 1 < full.size(); ++g) {
      if (full[g + 1] - full[g] > full[best + 1] - full[best]) best = g;
    }
    uniq.insert(std::upper_bound(uniq.begin(), uniq.end(), full[best]),
                0.5 * (full[best] + full[best + 1]));
  }
  while (uniq.size() > want) uniq.pop_back();  // cannot happen when k >= 2n
  std::vector<double> t;
  t.push_back(lo);
  t.insert(t.end(), uniq.begin(), uniq.end());
  t.push_back(hi);
  PrioritySpec spec;
  for (int i = 0; i < n; ++i) spec.priority_order.push_back(i);
  spec.thresholds.assign(static_cast<std::size_t>(n), ThresholdVector(t));
  spec.modified = true;
  spec.v0 = v0;
  return spec;
}

ThresholdVector equally_spaced_thresholds(int k, double lo, double hi) {
  if (k < 1) throw ArgumentError("equally spaced thresholds need k >= 1");
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    t[static_cast<std::size_t>(j)] = lo + (hi - lo) * j / k;
  }
  t.back() = hi;
  return ThresholdVector(t);
}

SimultaneousMechanism symmetric_tie_split_game(int n, const ThresholdVector& t,
                                               double v0) {
  check_n(n);
  SimultaneousMechanism m(std::vector<int>(static_cast<std::size_t>(n), t.bids()),
                          v0);
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const auto b = m.profile_of(idx);
    const int top = *std::max_element(b.begin(), b.end());
    const auto ties = std::count(b.begin(), b.end(), top);
    std::vector<double> w(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) {
      if (b[static_cast<std::size_t>(i)] == top) {
        w[static_cast<std::size_t>(i) + 1] = 1.0 / static_cast<double>(ties);
      }
    }
    m.set_weights(idx, std::move(w));
  }
  StrategyProfile s(static_cast<std::size_t>(n), t);
  assign_threshold_payments(m, s);
  m.set_cuts(s);
  return m;
}

SymmetricOneBit symmetric_optimal_1bit(Objective objective) {
  if (objective == Objective::kWelfare) {
    const ThresholdVector t({0.0, 0.5, 1.0});
    auto w = [](double x, double y) {
      return x * y * (0.5 * x / 2 + 0.5 * y / 2) + x * (1 - y) * (1 + y) / 2 +
             (1 - x) * y * (1 + x) / 2 +
             (1 - x) * (1 - y) * (0.5 * (1 + x) / 2 + 0.5 * (1 + y) / 2);
    };
    return {symmetric_tie_split_game(2, t, 0.0), {t, t}, w(0.5, 0.5)};
  }
  // r(x) = x (1 - x) x + (1 - x) x x + (1 - x)^2 x = x - x^3, maximized where
  // 1 - 3x^2 = 0.
  const double x = 1.0 / std::sqrt(3.0);
  const ThresholdVector t({0.0, x, 1.0});
  SimultaneousMechanism m = symmetric_tie_split_game(2, t, 0.0);
  m.set_winner(m.index_of({0, 0}), 0);
  assign_threshold_payments(m, {t, t});
  return {m, {t, t}, x - x * x * x};
}

}  // namespace bcauction
