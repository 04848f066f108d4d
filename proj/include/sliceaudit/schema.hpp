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

#ifndef SLICEAUDIT_SCHEMA_HPP_
#define SLICEAUDIT_SCHEMA_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sliceaudit/jsonio.hpp"

namespace sliceaudit {

enum class FeatureKind { categorical, integer, real };

const char* feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(std::string_view name);

struct NumericBounds {
  double lo = 0.0;
  double hi = 0.0;
};

// One case feature: kind plus an optional domain (category set or numeric
// bounds) that ingest validates against.
struct FeatureDef {
  std::string name;
  FeatureKind kind = FeatureKind::real;
  std::string unit;
  std::optional<std::vector<std::string>> categories;  // categorical only
  std::optional<NumericBounds> bounds;                 // integer/real only

  bool is_numeric() const { return kind != FeatureKind::categorical; }
};

// categorical -> string, integer -> int64, real -> double
using FeatureValue = std::variant<std::string, std::int64_t, double>;

double numeric_value(const FeatureValue& value);

struct Schema {
  std::vector<FeatureDef> features;
  std::string payload_kind;
  std::string label_kind;

  const FeatureDef* find(std::string_view name) const;
  const FeatureDef& require(std::string_view name) const;
  void validate() const;

  Json to_json() const;
  static Schema from_json(const Json& document);
  std::string digest() const;

  bool operator==(const Schema& other) const;
};

Schema parse_schema(std::string_view text, const std::string& where);
Schema load_schema(const std::filesystem::path& path);

// Parses and domain-checks one feature value of the declared kind.
FeatureValue feature_value_from_json(const FeatureDef& def, const Json& value,
                                     const std::string& where);
Json feature_value_to_json(const FeatureValue& value);

}  // namespace sliceaudit

#endif  // SLICEAUDIT_SCHEMA_HPP_
