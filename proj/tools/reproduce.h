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

#ifndef BCAUCTION_TOOLS_REPRODUCE_H_
#define BCAUCTION_TOOLS_REPRODUCE_H_

#include <string>
#include <vector>

namespace bcauction::tools {

// relation is one of "eq" (|computed - target| <= tolerance), "lt", "le",
// "gt" (strict or weak comparisons against target) or "info" (unchecked).
struct ReproRow {
  std::string label;
  double computed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::string relation = "eq";

  bool ok() const;
};

struct ReproOptions {
  int kmax = 12;
  int nmax = 100;
};

std::vector<std::string> reproduce_ids();

// Throws ArgumentError for an unknown id.
std::vector<ReproRow> reproduce(const std::string& id, const ReproOptions& opt);

}  // namespace bcauction::tools

#endif  // BCAUCTION_TOOLS_REPRODUCE_H_
