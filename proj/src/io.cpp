// Copyright 2026 The idvmech Authors
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

#include "idv/io.hpp"

#include <cmath>
#include <sstream>

namespace idv {
namespace {

using Rows = std::vector<std::vector<double>>;

Json parse_text(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
}

const Json& member(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ParseError(path + ": non-finite number");
  return x;
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<int>();
}

std::vector<double> vector_of(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

Rows rows_of(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of arrays");
  Rows out;
  out.reserve(j.size());
  for (std::size_t r = 0; r < j.size(); ++r) out.push_back(vector_of(j[r], path + "[" + std::to_string(r) + "]"));
  return out;
}

ValuationSpec valuation_from_json(const Json& j, const std::string& path) {
  const Json& type = member(j, "type", path);
  if (!type.is_string()) throw ParseError(path + ".type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "linear") return LinearValuation{rows_of(member(j, "coeffs", path), path + ".coeffs")};
  if (t == "tabulated") return TabulatedValuation{rows_of(member(j, "table", path), path + ".table")};
  if (t == "decomposable") {
    DecomposableValuation v;
    v.vhat = vector_of(member(j, "vhat", path), path + ".vhat");
    if (j.contains("vhat_slope")) v.vhat_slope = vector_of(j["vhat_slope"], path + ".vhat_slope");
    v.h = rows_of(member(j, "h", path), path + ".h");
    v.g = rows_of(member(j, "g", path), path + ".g");
    return v;
  }
  if (t == "separable_sos") {
    SeparableSosValuation v;
    v.h = rows_of(member(j, "h", path), path + ".h");
    v.g = rows_of(member(j, "g", path), path + ".g");
    return v;
  }
  throw ParseError(path + ".type: unknown valuation type '" + t + "'");
}

Json valuation_to_json(const ValuationSpec& spec) {
  Json j;
  j["type"] = variant_name(spec);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TabulatedValuation>) {
          j["table"] = v.table;
        } else if constexpr (std::is_same_v<T, LinearValuation>) {
          j["coeffs"] = v.coeffs;
        } else if constexpr (std::is_same_v<T, DecomposableValuation>) {
          j["vhat"] = v.vhat;
          if (v.vhat_slope) j["vhat_slope"] = *v.vhat_slope;
          j["h"] = v.h;
          j["g"] = v.g;
        } else {
          j["h"] = v.h;
          j["g"] = v.g;
        }
      },
      spec);
  return j;
}

Json outcome_json(const Outcome& outcome) { return Json(outcome); }

}  // namespace

Instance instance_from_json(const Json& doc) {
  const std::string root = "instance";
  const int n = integer(member(doc, "n", root), "n");
  const int m = integer(member(doc, "m", root), "m");
  const int k = integer(member(doc, "k", root), "k");
  const Rows grid = rows_of(member(doc, "grid", root), "grid");
  if (static_cast<int>(grid.size()) != n) {
    throw ParseError("grid: expected " + std::to_string(n) + " agents, got " + std::to_string(grid.size()));
  }
  const Json& vals = member(doc, "valuations", root);
  if (!vals.is_array()) throw ParseError("valuations: expected an array");
  std::vector<ValuationSpec> valuations;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    valuations.push_back(valuation_from_json(vals[i], "valuations[" + std::to_string(i) + "]"));
  }
  try {
    OutcomeSet outcomes(m, k);
    if (doc.contains("outcomes")) {
      const Json& listed = doc["outcomes"];
      if (!listed.is_array() || static_cast<int>(listed.size()) != outcomes.size()) {
        throw ParseError("outcomes: expected the " + std::to_string(outcomes.size()) +
                         " canonical outcomes");
      }
      for (int a = 0; a < outcomes.size(); ++a) {
        if (listed[static_cast<std::size_t>(a)] != outcome_json(outcomes.at(a))) {
          throw ParseError("outcomes[" + std::to_string(a) + "]: expected " + outcome_label(outcomes.at(a)));
        }
      }
    }
    return Instance(SignalGrid(grid), std::move(outcomes), std::move(valuations));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  } catch (const ResourceError& e) {
    throw ParseError(e.what());
  }
}

Instance parse_instance(const std::string& text) {
  return instance_from_json(parse_text(text, "instance"));
}

Json instance_to_json(const Instance& instance) {
  Json j;
  j["n"] = instance.agents();
  j["m"] = instance.outcomes().projects();
  j["k"] = instance.outcomes().max_size();
  j["grid"] = instance.grid().all_points();
  Json outcomes = Json::array();
  for (const auto& o : instance.outcomes().all()) outcomes.push_back(outcome_json(o));
  j["outcomes"] = outcomes;
  Json vals = Json::array();
  for (const auto& v : instance.valuations()) vals.push_back(valuation_to_json(v));
  j["valuations"] = vals;
  return j;
}

std::string serialize_instance(const Instance& instance) {
  return instance_to_json(instance).dump(2) + "\n";
}

SocialChoiceFunction parse_scf(const std::string& text, const Instance& instance) {
  const Json doc = parse_text(text, "scf");
  const Json& table = member(doc, "table", "scf");
  if (!table.is_array()) throw ParseError("table: expected an array");
  const std::size_t P = instance.grid().profile_count();
  const int mu = instance.outcomes().size();
  if (table.size() != P) {
    throw ParseError("table: expected " + std::to_string(P) + " profiles, got " + std::to_string(table.size()));
  }
  SocialChoiceFunction f(P, mu);
  for (std::size_t p = 0; p < P; ++p) {
    const std::string path = "table[" + std::to_string(p) + "]";
    try {
      if (table[p].is_number_integer()) {
        f.set_point(p, table[p].get<int>());
      } else {
        f.set(p, OutcomeDistribution(vector_of(table[p], path)));
      }
    } catch (const DomainError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  return f;
}

Json scf_to_json(const SocialChoiceFunction& f) {
  Json table = Json::array();
  for (std::size_t p = 0; p < f.profile_count(); ++p) {
    const auto row = f.at(p);
    int point = -1;
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (row[a] == 1.0) point = static_cast<int>(a);
    }
    if (point >= 0) {
      table.push_back(point);
    } else {
      table.push_back(std::vector<double>(row.begin(), row.end()));
    }
  }
  Json j;
  j["outcomes"] = f.outcome_count();
  j["table"] = table;
  return j;
}

std::string profile_key(const GridProfile& profile) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out << ',';
    out << profile[i];
  }
  out << ')';
  return out.str();
}

PaymentTable parse_payments(const std::string& text, const Instance& instance) {
  const Json doc = parse_text(text, "payments");
  const Json& pay = member(doc, "payments", "payments");
  if (!pay.is_object()) throw ParseError("payments.payments: expected an object keyed by profile");
  const SignalGrid& grid = instance.grid();
  const int n = instance.agents();
  PaymentTable table(grid.profile_count(), n);
  for (std::size_t p = 0; p < grid.profile_count(); ++p) {
    const std::string key = profile_key(grid.unflat(p));
    const std::string path = "payments[\"" + key + "\"]";
    auto it = pay.find(key);
    if (it == pay.end()) throw ParseError(path + ": missing");
    const auto row = vector_of(*it, path);
    if (static_cast<int>(row.size()) != n) {
      throw ParseError(path + ": expected " + std::to_string(n) + " payments");
    }
    for (int i = 0; i < n; ++i) table.set(p, i, row[static_cast<std::size_t>(i)]);
  }
  if (pay.size() != grid.profile_count()) throw ParseError("payments.payments: unexpected extra profiles");
  return table;
}

Json payments_to_json(const PaymentTable& table, const Instance& instance, const std::string& anchor) {
  Json j;
  j["anchor"] = anchor;
  Json pay = Json::object();
  for (std::size_t p = 0; p < table.profile_count(); ++p) {
    const auto row = table.row(p);
    pay[profile_key(instance.grid().unflat(p))] = std::vector<double>(row.begin(), row.end());
  }
  j["payments"] = pay;
  return j;
}

std::string anchor_name(AnchorPolicy policy) {
  switch (policy) {
    case AnchorPolicy::kTight: return "tight";
    case AnchorPolicy::kZero: return "zero";
    default: return "custom";
  }
}

Json report_to_json(const CheckReport& report, const Instance& instance) {
  Json j;
  j["condition"] = report.condition;
  j["verdict"] = report.verdict;
  if (report.witness) {
    const Witness& w = *report.witness;
    Json wj;
    if (w.agent >= 0) wj["agent"] = w.agent;
    if (w.other_agent >= 0) wj["other_agent"] = w.other_agent;
    if (!w.profile.empty()) {
      wj["profile"] = w.profile;
      if (w.profile.size() == static_cast<std::size_t>(instance.agents())) {
        wj["signals"] = instance.grid().signals(w.profile);
      }
    }
    if (!w.upper.empty()) {
      wj["upper"] = w.upper;
      if (w.upper.size() == static_cast<std::size_t>(instance.agents())) {
        wj["upper_signals"] = instance.grid().signals(w.upper);
      }
    }
    if (!w.own.empty()) wj["own"] = w.own;
    if (!w.outcomes.empty()) {
      Json outs = Json::array();
      for (int a : w.outcomes) outs.push_back(outcome_json(instance.outcomes().at(a)));
      wj["outcomes"] = outs;
    }
    wj["slack"] = w.slack;
    wj["detail"] = w.detail;
    j["witness"] = wj;
  } else {
    j["witness"] = nullptr;
  }
  j["slack"] = report.slack;
  return j;
}

Json mechanism_to_json(const MechanismResult& result, const Instance& instance,
                       const std::string& mechanism) {
  Json j;
  j["mechanism"] = mechanism;
  j["excluded"] = result.excluded;
  if (result.seed) {
    j["seed"] = *result.seed;
  } else {
    j["seed"] = nullptr;
  }
  Json rows = Json::array();
  const SignalGrid& grid = instance.grid();
  for (std::size_t p = 0; p < grid.profile_count(); ++p) {
    const GridProfile profile = grid.unflat(p);
    Json r;
    r["profile"] = profile;
    r["signals"] = grid.signals(profile);
    r["outcome"] = outcome_json(instance.outcomes().at(result.scf.point(p)));
    const auto pay = result.payments.row(p);
    r["payments"] = std::vector<double>(pay.begin(), pay.end());
    rows.push_back(r);
  }
  j["profiles"] = rows;
  return j;
}

}  // namespace idv
