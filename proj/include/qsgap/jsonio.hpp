// Copyright 2026 The qsgap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON and CSV emission. All output is deterministic: fixed key order,
// fixed column order, no floating point.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsgap/adversary.hpp"
#include "qsgap/attacks.hpp"
#include "qsgap/summary.hpp"

namespace qsgap {

using OrderedJson = nlohmann::ordered_json;

inline std::string hex_encode(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

inline OrderedJson state_json(const MemoryState& st) {
  OrderedJson j;
  auto items = OrderedJson::array();
  for (const auto& it : st.items) items.push_back(it.str());
  j["I"] = std::move(items);
  j["G"] = hex_encode(st.general);
  return j;
}

inline OrderedJson interval_json(const Interval& iv) {
  return OrderedJson::array({iv.lo.str(), iv.hi.str()});
}

inline OrderedJson node_json(const TraceNode& n) {
  OrderedJson j;
  j["level"] = n.level;
  j["iv_pi"] = interval_json(n.iv_pi);
  j["iv_rho"] = interval_json(n.iv_rho);
  j["gap"] = OrderedJson{{"i", n.gap.index}, {"a", n.gap.a.str()},
                         {"b", n.gap.b.str()}, {"size", n.gap.size}};
  j["peak_items"] = n.peak_items;
  j["n_before"] = n.n_before;
  j["n_after"] = n.n_after;
  return j;
}

inline OrderedJson trace_json(const AdvResult& r) {
  OrderedJson j;
  j["m"] = r.m;
  j["n"] = r.pi.size();
  auto nodes = OrderedJson::array();
  for (const auto& n : r.nodes) nodes.push_back(node_json(n));
  j["nodes"] = std::move(nodes);
  return j;
}

inline constexpr const char* kAttackCsvHeader =
    "attack,summary,eps_inv,k,N_total,peak_items,final_items,root_gap,bound_rhs,"
    "lemma1_ok,claim1_ok,spacegap_ok,survived,witness";

inline std::string csv_row(const AttackOutcome& o) {
  std::string row;
  row += attack_name(o.kind);
  row += ',';
  row += o.summary_name;
  row += ',';
  row += std::to_string(o.m);
  row += ',';
  row += std::to_string(o.k);
  row += ',';
  row += std::to_string(o.n_total);
  row += ',';
  row += std::to_string(o.peak_items);
  row += ',';
  row += std::to_string(o.final_items);
  row += ',';
  row += std::to_string(o.root_gap);
  row += ',';
  row += Item(o.bound_rhs).str();
  row += ',';
  row += o.lemma1_ok ? "true" : "false";
  row += ',';
  row += o.claim1_ok ? "true" : "false";
  row += ',';
  row += o.spacegap_ok ? "true" : "false";
  row += ',';
  row += o.survived ? "true" : "false";
  row += ',';
  row += o.witness;  // key=value text, never contains commas
  return row;
}

}  // namespace qsgap
