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

// bcauction command-line tool.
//
// Exit codes: 0 ok, 1 usage, 2 numerical failure, 3 reproduction mismatch.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bcauction/errors.h"
#include "bcauction/evaluation.h"
#include "bcauction/mechanism_json.h"
#include "bcauction/oracle.h"
#include "bcauction/profit_reduction.h"
#include "bcauction/sequential.h"
#include "reproduce.h"

namespace {

using namespace bcauction;

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kMismatch = 3 };

struct Options {
  std::string objective = "welfare";
  int n = 0;
  int k = 2;
  std::vector<std::string> dists;
  double v0 = 0.0;
  std::string method = "exact";
  std::uint64_t samples = 1000000;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string out;
  bool json = false;
  std::string manifest;
  std::string mechanism;
  std::string strategies;
  std::string tree;
  std::string save_mechanism;
  bool monotone = false;
  bool incentives = false;
  int restarts = 32;
  int kmax = 12;
  int nmax = 100;
  std::string id;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string join_cuts(const ThresholdVector& t) {
  std::string s;
  for (double c : t.cuts()) s += (s.empty() ? "" : ";") + num(c);
  return s;
}

Objective objective_of(const Options& o) {
  if (o.objective == "welfare") return Objective::kWelfare;
  if (o.objective == "profit") return Objective::kProfit;
  throw ArgumentError("--objective must be welfare or profit");
}

std::vector<ValueDistribution> dists_of(const Options& o, int n) {
  std::vector<std::string> specs = o.dists;
  if (specs.empty()) specs.push_back("uniform:0,1");
  if (n <= 0) n = o.n > 0 ? o.n : std::max<int>(2, static_cast<int>(specs.size()));
  if (specs.size() == 1) specs.assign(static_cast<std::size_t>(n), specs[0]);
  if (static_cast<int>(specs.size()) != n) {
    throw ArgumentError("give one --dist, or one per bidder (" + std::to_string(n) + ")");
  }
  std::vector<ValueDistribution> out;
  for (const auto& s : specs) out.push_back(ValueDistribution::Parse(s));
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write " + path);
  f << text;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string report_block(const EvaluationReport& r) { return report_to_csv(r); }

// Each command returns its output text and exit code.
struct Result {
  std::string text;
  int code = kOk;
};

Result cmd_solve(const Options& o) {
  const auto dists = dists_of(o, 0);
  PrioritySpec spec;
  nlohmann::json extra;
  if (objective_of(o) == Objective::kWelfare) {
    spec = solve_welfare_optimal(dists, o.k, o.v0).spec;
  } else {
    const ProfitSolution sol = solve_profit_optimal(dists, o.k, o.v0);
    spec = sol.spec;
    extra["virtual_surplus"] = sol.virtual_surplus;
  }
  SimultaneousMechanism m = build_game(spec);
  m.set_cuts(spec.thresholds);
  const EvaluationReport rep = evaluate_priority_report(spec, dists);
  if (!o.save_mechanism.empty()) write_file(o.save_mechanism, mechanism_to_json(m).dump(2) + "\n");
  if (o.json) {
    nlohmann::json j{{"objective", o.objective},
                     {"priority_order", spec.priority_order},
                     {"modified", spec.modified},
                     {"v0", spec.v0},
                     {"thresholds", cuts_to_json(spec.thresholds)},
                     {"report", report_to_json(rep)},
                     {"mechanism", mechanism_to_json(m)}};
    j.update(extra);
    return {j.dump(2) + "\n"};
  }
  std::string s = "bidder,priority,modified,cuts\n";
  for (std::size_t r = 0; r < spec.priority_order.size(); ++r) {
    const int b = spec.priority_order[r];
    s += std::to_string(b) + "," + std::to_string(r) + "," + (spec.modified ? "1" : "0") +
         "," + join_cuts(spec.thresholds[static_cast<std::size_t>(b)]) + "\n";
  }
  return {s + "\n" + report_block(rep)};
}

Result cmd_eval(const Options& o) {
  if (o.mechanism.empty()) throw ArgumentError("eval needs --mechanism");
  const SimultaneousMechanism m = mechanism_from_json(read_json_file(o.mechanism));
  StrategyProfile s;
  if (!o.strategies.empty()) {
    s = cuts_from_json(read_json_file(o.strategies));
  } else if (m.cuts()) {
    s = *m.cuts();
  } else {
    throw ArgumentError("mechanism has no cuts; pass --strategies");
  }
  const auto dists = dists_of(o, m.n());
  EvaluationReport rep;
  if (o.method == "exact") {
    rep = evaluate_exact(m, s, dists, m.v0());
  } else if (o.method == "mc") {
    if (!o.seed) throw ArgumentError("--seed is required with --method mc");
    rep = monte_carlo_evaluate(m, s, dists, m.v0(), {o.samples, *o.seed, o.threads});
  } else {
    throw ArgumentError("--method must be exact or mc");
  }
  std::optional<IncentiveCheck> ds, ir;
  if (o.incentives) {
    ds = verify_dominant_strategy(m, s, dists);
    ir = verify_ex_post_ir(m, s, dists);
  }
  if (o.json) {
    nlohmann::json j = report_to_json(rep);
    if (ds) {
      j["dominant_strategy"] = {{"pass", ds->pass}, {"worst_violation", ds->worst_violation}};
      j["ex_post_ir"] = {{"pass", ir->pass}, {"worst_violation", ir->worst_violation}};
    }
    return {j.dump(2) + "\n"};
  }
  std::string text = report_block(rep);
  if (ds) {
    text += "\ncheck,pass,worst_violation\n";
    text += "dominant_strategy," + std::string(ds->pass ? "1" : "0") + "," +
            num(ds->worst_violation) + "\n";
    text += "ex_post_ir," + std::string(ir->pass ? "1" : "0") + "," +
            num(ir->worst_violation) + "\n";
  }
  return {text};
}

Result cmd_certify(const Options& o) {
  const auto dists = dists_of(o, 2);
  const Certificate c = certify_2bidder_optimality(o.k, dists, o.v0, objective_of(o),
                                                   o.restarts);
  const int code = c.pass ? kOk : kNumerical;
  if (o.json) return {certificate_to_json(c).dump(2) + "\n", code};
  std::string s = "allocation_id,description,priority_game,optimal_value,cuts_0,cuts_1\n";
  for (const auto& e : c.entries) {
    s += std::to_string(e.allocation_id) + "," + e.description + "," +
         (e.priority_game ? "1" : "0") + "," + num(e.optimal_value) + "," +
         join_cuts(e.optimal_cuts[0]) + "," + join_cuts(e.optimal_cuts[1]) + "\n";
  }
  s += "\nargmax_id,best_value,solver_value,cut_error,pass\n";
  s += std::to_string(c.argmax_id) + "," + num(c.best_value) + "," + num(c.solver_value) +
       "," + num(c.cut_error) + "," + (c.pass ? "1" : "0") + "\n";
  return {s, code};
}

std::pair<SequentialMechanismTree, std::optional<SequentialStrategy>> load_tree(
    const Options& o) {
  if (o.tree.empty()) throw ArgumentError("needs --tree");
  SequentialMechanismTree t = tree_from_json(read_json_file(o.tree));
  std::optional<SequentialStrategy> s;
  if (!o.strategies.empty()) s = strategy_from_json(read_json_file(o.strategies));
  return {std::move(t), std::move(s)};
}

std::string strategy_block(const SequentialStrategy& s) {
  std::string out = "history,cuts\n";
  for (const auto& [h, t] : s) out += "\"" + h + "\"," + join_cuts(t) + "\n";
  return out;
}

Result cmd_sequential_eval(const Options& o) {
  auto [t, given] = load_tree(o);
  const auto dists = dists_of(o, t.n);
  const SequentialStrategy s = given ? *given : backward_induction_best_response(t, dists);
  const EvaluationReport rep = evaluate_sequential(t, s, dists, o.v0);
  if (o.json) {
    nlohmann::json j = report_to_json(rep);
    j["strategies"] = strategy_to_json(s)["strategies"];
    j["communication_requirement"] = t.communication_requirement();
    return {j.dump(2) + "\n"};
  }
  return {report_block(rep) + "\n" + strategy_block(s)};
}

Result cmd_flatten(const Options& o) {
  auto [t, given] = load_tree(o);
  const auto dists = dists_of(o, t.n);
  const SequentialStrategy s = given ? *given : backward_induction_best_response(t, dists);
  const FlattenResult f = flatten_to_simultaneous(t, s, dists, o.v0, o.monotone);
  const double tree_w = sequential_cell_sums(t, s, dists, o.v0, false).welfare;
  const double flat_w = expected_welfare_exact(f.mechanism, f.strategies, dists, o.v0);
  SimultaneousMechanism m = f.mechanism;
  m.set_cuts(f.strategies);
  if (!o.save_mechanism.empty()) write_file(o.save_mechanism, mechanism_to_json(m).dump(2) + "\n");
  const int code = f.within_bounds ? kOk : kNumerical;
  if (o.json) {
    nlohmann::json j{{"mechanism", mechanism_to_json(m)},
                     {"message_counts", f.message_counts},
                     {"bits", f.bits},
                     {"total_bits", f.total_bits},
                     {"communication_requirement", f.communication_requirement},
                     {"bit_bound", f.bit_bound},
                     {"count_bounds", f.count_bounds},
                     {"within_bounds", f.within_bounds},
                     {"tree_welfare", tree_w},
                     {"flattened_welfare", flat_w}};
    return {j.dump(2) + "\n", code};
  }
  std::string out = "bidder,messages,bits,count_bound,cuts\n";
  for (std::size_t i = 0; i < f.message_counts.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(f.message_counts[i]) + "," +
           std::to_string(f.bits[i]) + "," + std::to_string(f.count_bounds[i]) + "," +
           join_cuts(f.strategies[i]) + "\n";
  }
  out += "\ntotal_bits,bit_bound,communication_requirement,within_bounds,tree_welfare,"
         "flattened_welfare\n";
  out += std::to_string(f.total_bits) + "," + std::to_string(f.bit_bound) + "," +
         std::to_string(f.communication_requirement) + "," + (f.within_bounds ? "1" : "0") +
         "," + num(tree_w) + "," + num(flat_w) + "\n";
  return {out, code};
}

Result cmd_reproduce(const Options& o) {
  const auto rows = tools::reproduce(o.id, {o.kmax, o.nmax});
  bool all = true;
  for (const auto& r : rows) all = all && r.ok();
  const int code = all ? kOk : kMismatch;
  if (o.json) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : rows) {
      list.push_back({{"label", r.label},
                      {"computed", r.computed},
                      {"target", r.target},
                      {"abs_diff", std::abs(r.computed - r.target)},
                      {"tolerance", r.tolerance},
                      {"relation", r.relation},
                      {"ok", r.ok()}});
    }
    return {nlohmann::json{{"id", o.id}, {"rows", list}, {"pass", all}}.dump(2) + "\n", code};
  }
  std::string s = "id,label,computed,target,abs_diff,tolerance,relation,ok\n";
  for (const auto& r : rows) {
    s += o.id + ",\"" + r.label + "\"," + num(r.computed) + "," + num(r.target) + "," +
         num(std::abs(r.computed - r.target)) + "," + num(r.tolerance) + "," + r.relation +
         "," + (r.ok() ? "1" : "0") + "\n";
  }
  return {s, code};
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--objective", o.objective, "welfare or profit")
      ->check(CLI::IsMember({"welfare", "profit"}));
  sub->add_option("--n", o.n, "number of bidders");
  sub->add_option("--k", o.k, "messages per bidder");
  sub->add_option("--dist", o.dists,
                  "uniform:a,b or table:path.csv; once for all bidders or once per bidder");
  sub->add_option("--v0", o.v0, "seller value");
  sub->add_option("--out", o.out, "write output here instead of stdout");
  sub->add_flag("--json", o.json, "JSON output instead of CSV");
  sub->add_option("--manifest", o.manifest, "write a run manifest here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-communication auctions: solve, evaluate, certify, reproduce"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "optimal priority game for the given laws");
  add_common(solve, o);
  solve->add_option("--save-mechanism", o.save_mechanism, "write the mechanism JSON here");

  auto* eval = app.add_subcommand("eval", "evaluate a mechanism JSON file");
  add_common(eval, o);
  eval->add_option("--mechanism", o.mechanism, "mechanism JSON")->required();
  eval->add_option("--strategies", o.strategies, "cuts JSON (defaults to the mechanism's)");
  eval->add_option("--method", o.method, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  eval->add_option("--samples", o.samples, "Monte-Carlo samples");
  eval->add_option("--seed", o.seed, "Monte-Carlo seed (required with mc)");
  eval->add_option("--threads", o.threads, "Monte-Carlo threads (0: all cores)");
  eval->add_flag("--incentives", o.incentives, "also run the incentive checks");

  auto* certify = app.add_subcommand("certify", "exhaustive two-bidder optimality check");
  add_common(certify, o);
  certify->add_option("--restarts", o.restarts, "random restarts per table");

  auto* seq = app.add_subcommand("sequential-eval", "evaluate a sequential mechanism tree");
  add_common(seq, o);
  seq->add_option("--tree", o.tree, "tree JSON")->required();
  seq->add_option("--strategies", o.strategies,
                  "strategy JSON (defaults to backward induction)");

  auto* flat = app.add_subcommand("flatten", "sequential tree to simultaneous mechanism");
  add_common(flat, o);
  flat->add_option("--tree", o.tree, "tree JSON")->required();
  flat->add_option("--strategies", o.strategies,
                   "strategy JSON (defaults to backward induction)");
  flat->add_flag("--monotone", o.monotone, "reassign cells to be monotone");
  flat->add_option("--save-mechanism", o.save_mechanism, "write the mechanism JSON here");

  auto* repro = app.add_subcommand("reproduce", "recompute a published figure");
  add_common(repro, o);
  std::string ids;
  for (const auto& id : tools::reproduce_ids()) ids += (ids.empty() ? "" : ", ") + id;
  repro->add_option("id", o.id, "one of: " + ids)->required();
  repro->add_option("--kmax", o.kmax, "largest k for loss-vs-k and centered-cuts");
  repro->add_option("--nmax", o.nmax, "largest n for loss-vs-n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Result res;
  std::string command;
  try {
    if (solve->parsed()) {
      command = "solve";
      res = cmd_solve(o);
    } else if (eval->parsed()) {
      command = "eval";
      res = cmd_eval(o);
    } else if (certify->parsed()) {
      command = "certify";
      res = cmd_certify(o);
    } else if (seq->parsed()) {
      command = "sequential-eval";
      res = cmd_sequential_eval(o);
    } else if (flat->parsed()) {
      command = "flatten";
      res = cmd_flatten(o);
    } else {
      command = "reproduce";
      res = cmd_reproduce(o);
    }
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const StructuralError& e) {
    // Malformed mechanism, tree or strategy input.
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }

  try {
    if (o.out.empty()) {
      std::cout << res.text;
    } else {
      write_file(o.out, res.text);
    }
    if (!o.manifest.empty()) {
      std::vector<std::string> args(argv + 1, argv + argc);
      char sum[32];
      std::snprintf(sum, sizeof sum, "%016" PRIx64, fnv1a(res.text));
      nlohmann::json m{{"command", command},
                       {"arguments", args},
                       {"seed", o.seed ? nlohmann::json(*o.seed) : nlohmann::json(nullptr)},
                       {"tool_version", kVersion},
                       {"output_checksum", std::string("fnv1a64:") + sum}};
      write_file(o.manifest, m.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return res.code;
}
