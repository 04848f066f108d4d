/*
 * Copyright 2026 The sliceaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SLICEAUDIT_SLICE_HPP_
#define SLICEAUDIT_SLICE_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sliceaudit/schema.hpp"

namespace sliceaudit {

// One conjunct of a slice predicate: a categorical equality or a closed
// numeric interval on a single feature.
struct FeatureCondition {
  std::string feature;
  std::optional<std::string> equals;  // categorical form
  std::optional<NumericBounds> range; // numeric form, lo <= value <= hi

  bool matches(const FeatureValue& value) const;
  Json to_json() const;
  static FeatureCondition from_json(const Json& value, const std::string& where);
};

// A named conjunction of conditions; each predicate materializes one test
// distribution over the universe.
struct SlicePredicate {
  std::string name;
  std::vector<FeatureCondition> conditions;

  bool matches(const std::map<std::string, FeatureValue>& features) const;
  void validate(const Schema& schema) const;

  Json to_json() const;
  static SlicePredicate from_json(const Json& value, const std::string& where);
};

}  // namespace sliceaudit

#endif  // SLICEAUDIT_SLICE_HPP_
