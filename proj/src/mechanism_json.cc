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

#include "bcauction/mechanism_json.h"

#include <fstream>
#include <sstream>

#include "bcauction/errors.h"

namespace bcauction {

using nlohmann::json;

std::string profile_key(const std::vector<int>& bids) {
  std::string key;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(bids[i]);
  }
  return key;
}

std::vector<int> parse_profile_key(const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ArgumentError("bad bid profile key '" + key + "'");
    }
  }
  return out;
}

json cuts_to_json(const StrategyProfile& s) {
  json arr = json::array();
  for (const auto& t : s) arr.push_back(t.cuts());
  return arr;
}

StrategyProfile cuts_from_json(const json& j) {
  StrategyProfile s;
  for (const auto& row : j) s.emplace_back(row.get<std::vector<double>>());
  return s;
}

json mechanism_to_json(const SimultaneousMechanism& m) {
  json j;
  j["n"] = m.n();
  j["bid_sizes"] = m.bid_sizes();
  j["v0"] = m.v0();
  json alloc = json::object();
  json pay = json::object();
  for (std::size_t idx = 0; idx < m.profile_count(); ++idx) {
    const std::string key = profile_key(m.profile_of(idx));
    json list = json::array();
    for (int w = 0; w <= m.n(); ++w) {
      if (m.weight(idx, w) > 0.0) {
        list.push_back({{"winner", w}, {"prob", m.weight(idx, w)}});
      }
    }
    alloc[key] = list;
    pay[key] = m.payments(idx);
  }
  j["allocation"] = alloc;
  j["payments"] = pay;
  if (m.cuts()) j["cuts"] = cuts_to_json(*m.cuts());
  return j;
}

SimultaneousMechanism mechanism_from_json(const json& j) {
  try {
    const auto sizes = j.at("bid_sizes").get<std::vector<int>>();
    if (j.contains("n") && j.at("n").get<int>() != static_cast<int>(sizes.size())) {
      throw StructuralError("'n' disagrees with the length of 'bid_sizes'");
    }
    SimultaneousMechanism m(sizes, j.value("v0", 0.0));
    std::vector<bool> seen(m.profile_count(), false);
    for (const auto& [key, list] : j.at("allocation").items()) {
      const std::size_t idx = m.index_of(parse_profile_key(key));
      std::vector<double> w(sizes.size() + 1, 0.0);
      for (const auto& e : list) {
        const int winner = e.at("winner").get<int>();
        if (winner < 0 || winner > m.n()) {
          throw StructuralError("winner index out of range at profile " + key);
        }
        w[static_cast<std::size_t>(winner)] += e.at("prob").get<double>();
      }
      m.set_weights(idx, std::move(w));
      seen[idx] = true;
    }
    for (std::size_t idx = 0; idx < seen.size(); ++idx) {
      if (!seen[idx]) {
        throw StructuralError("allocation missing profile " +
                              profile_key(m.profile_of(idx)));
      }
    }
    if (j.contains("payments")) {
      for (const auto& [key, list] : j.at("payments").items()) {
        m.set_payments(m.index_of(parse_profile_key(key)),
                       list.get<std::vector<double>>());
      }
    }
    if (j.contains("cuts")) m.set_cuts(cuts_from_json(j.at("cuts")));
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed mechanism JSON: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw StructuralError(path + ": parse error at byte " +
                          std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace bcauction
