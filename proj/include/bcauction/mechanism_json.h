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

#ifndef BCAUCTION_MECHANISM_JSON_H_
#define BCAUCTION_MECHANISM_JSON_H_

#include <string>
#include <vector>

#include "bcauction/mechanism.h"
#include "json.hpp"

namespace bcauction {

// {"n", "bid_sizes", "v0", "allocation": {"b0,b1": [{"winner", "prob"}]},
//  "payments": {"b0,b1": [p0, p1]}, optional "cuts": [[...], ...]}.
nlohmann::json mechanism_to_json(const SimultaneousMechanism& m);
SimultaneousMechanism mechanism_from_json(const nlohmann::json& j);

std::string profile_key(const std::vector<int>& bids);
std::vector<int> parse_profile_key(const std::string& key);

// Reads and parses a file; parse errors carry the byte offset.
nlohmann::json read_json_file(const std::string& path);

nlohmann::json cuts_to_json(const StrategyProfile& s);
StrategyProfile cuts_from_json(const nlohmann::json& j);

}  // namespace bcauction

#endif  // BCAUCTION_MECHANISM_JSON_H_
