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

#pragma once

// JSON formats for instances, choice functions, payments and reports. The
// schemas are described in docs/formats.md.

#include <string>

#include <json.hpp>

#include "idv/core.hpp"
#include "idv/mechanisms.hpp"
#include "idv/payments.hpp"

namespace idv {

using Json = nlohmann::ordered_json;

/// Throws ParseError naming the offending field.
Instance parse_instance(const std::string& text);
Instance instance_from_json(const Json& doc);
Json instance_to_json(const Instance& instance);
std::string serialize_instance(const Instance& instance);

/// {"table": [entry, ...]} in canonical profile order; an entry is an outcome
/// index or an array of weights.
SocialChoiceFunction parse_scf(const std::string& text, const Instance& instance);
Json scf_to_json(const SocialChoiceFunction& f);

/// Profile key "(k_0,k_1,...)" of grid indices.
std::string profile_key(const GridProfile& profile);

/// {"anchor": ..., "payments": {"(k_0,...)": [p_0, ...], ...}}
PaymentTable parse_payments(const std::string& text, const Instance& instance);
Json payments_to_json(const PaymentTable& table, const Instance& instance,
                      const std::string& anchor);
std::string anchor_name(AnchorPolicy policy);

Json report_to_json(const CheckReport& report, const Instance& instance);
Json mechanism_to_json(const MechanismResult& result, const Instance& instance,
                       const std::string& mechanism);

}  // namespace idv
