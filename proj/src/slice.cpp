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

#include "sliceaudit/slice.hpp"

#include <set>

namespace sliceaudit {

bool FeatureCondition::matches(const FeatureValue& value) const {
  if (equals) {
    const auto* s = std::get_if<std::string>(&value);
    return s != nullptr && *s == *equals;
  }
  const double v = numeric_value(value);
  return range->lo <= v && v <= range->hi;
}

Json FeatureCondition::to_json() const {
  Json j;
  j["feature"] = feature;
  if (equals) {
    j["equals"] = *equals;
  } else {
    j["lo"] = range->lo;
    j["hi"] = range->hi;
  }
  return j;
}

FeatureCondition FeatureCondition::from_json(const Json& value, const std::string& where) {
  FeatureCondition cond;
  cond.feature = require_string(value, "feature", where);
  const bool has_equals = value.contains("equals");
  const bool has_range = value.contains("lo") || value.contains("hi");
  if (has_equals == has_range) {
    fail(Errc::parse, where + ": condition on '" + cond.feature +
                          "' must carry either 'equals' or 'lo'/'hi'");
  }
  if (has_equals) {
    cond.equals = require_string(value, "equals", where);
  } else {
    NumericBounds b{require_number(value, "lo", where), require_number(value, "hi", where)};
    if (!(b.lo <= b.hi)) {
      fail(Errc::schema, where + ": inverted range on '" + cond.feature + "'");
    }
    cond.range = b;
  }
  return cond;
}

bool SlicePredicate::matches(const std::map<std::string, FeatureValue>& features) const {
  for (const FeatureCondition& cond : conditions) {
    auto it = features.find(cond.feature);
    if (it == features.end() || !cond.matches(it->second)) {
      return false;
    }
  }
  return true;
}

void SlicePredicate::validate(const Schema& schema) const {
  if (conditions.empty()) {
    fail(Errc::schema, "slice '" + name + "' has no conditions");
  }
  std::set<std::string> seen;
  for (const FeatureCondition& cond : conditions) {
    const FeatureDef& def = schema.require(cond.feature);
    if (!seen.insert(cond.feature).second) {
      fail(Errc::schema, "slice '" + name + "' conditions feature '" + cond.feature + "' twice");
    }
    if (cond.equals && def.kind != FeatureKind::categorical) {
      fail(Errc::kind_mismatch,
           "equality condition on numeric feature '" + cond.feature + "' in slice '" + name + "'");
    }
    if (cond.range && def.kind == FeatureKind::categorical) {
      fail(Errc::kind_mismatch,
           "range condition on categorical feature '" + cond.feature + "' in slice '" + name + "'");
    }
    if (cond.range && !(cond.range->lo <= cond.range->hi)) {
      fail(Errc::schema, "inverted range on '" + cond.feature + "' in slice '" + name + "'");
    }
  }
}

Json SlicePredicate::to_json() const {
  Json j;
  j["name"] = name;
  Json conds = Json::array();
  for (const FeatureCondition& cond : conditions) {
    conds.push_back(cond.to_json());
  }
  j["conditions"] = std::move(conds);
  return j;
}

SlicePredicate SlicePredicate::from_json(const Json& value, const std::string& where) {
  SlicePredicate spec;
  spec.name = require_string(value, "name", where);
  const Json& conds = require_field(value, "conditions", where);
  if (!conds.is_array() || conds.empty()) {
    fail(Errc::parse, where + ": slice '" + spec.name + "' needs a non-empty condition array");
  }
  for (const Json& c : conds) {
    spec.conditions.push_back(FeatureCondition::from_json(c, where + "/" + spec.name));
  }
  return spec;
}

}  // namespace sliceaudit
