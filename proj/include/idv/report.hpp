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

#include <optional>
#include <string>
#include <vector>

namespace idv {

using GridProfile = std::vector<int>;

/// A concrete counterexample. Fields that do not apply to a condition are
/// left at their defaults.
struct Witness {
  int agent = -1;         // agent whose signal varies
  int other_agent = -1;   // second agent (single-crossing)
  GridProfile profile;    // base profile, grid indices
  GridProfile upper;      // second profile when the condition compares two
  std::vector<int> own;   // own-signal grid indices: pair, or cycle in order
  std::vector<int> outcomes;
  double slack = 0.0;     // signed violation, < -kTol
  std::string detail;

  bool operator==(const Witness&) const = default;
};

struct CheckReport {
  std::string condition;
  bool verdict = true;
  std::optional<Witness> witness;
  /// Smallest margin seen over all checked inequalities (the witness slack
  /// when the verdict is false).
  double slack = 0.0;
};

}  // namespace idv
