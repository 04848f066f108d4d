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

#include "sliceaudit/schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sliceaudit {

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::categorical: return "categorical";
    case FeatureKind::integer: return "integer";
    case FeatureKind::real: return "real";
  }
  return "?";
}

FeatureKind feature_kind_from_name(std::string_view name) {
  if (name == "categorical") return FeatureKind::categorical;
  if (name == "integer") return FeatureKind::integer;
  if (name == "real") return FeatureKind::real;
  fail(Errc::schema, "unknown feature kind '" + std::string(name) + "'");
}

double numeric_value(const FeatureValue& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    return static_cast<double>(*i);
  }
  if (const auto* d = std::get_if<double>(&value)) {
    return *d;
  }
  fail(Errc::kind_mismatch, "categorical value used where a number is required");
}

const FeatureDef* Schema::find(std::string_view name) const {
  for (const FeatureDef& def : features) {
    if (def.name == name) return &def;
  }
  return nullptr;
}

const FeatureDef& Schema::require(std::string_view name) const {
  const FeatureDef* def = find(name);
  if (def == nullptr) {
    fail(Errc::unknown_feature, "feature '" + std::string(name) + "' is not in the schema");
  }
  return *def;
}

void Schema::validate() const {
  if (payload_kind.empty()) fail(Errc::schema, "payload_kind must be non-empty");
  if (label_kind.empty()) fail(Errc::schema, "label_kind must be non-empty");
  std::set<std::string> seen;
  for (const FeatureDef& def : features) {
    if (def.name.empty()) fail(Errc::schema, "feature with empty name");
    if (!seen.insert(def.name).second) {
      fail(Errc::schema, "duplicate feature name '" + def.name + "'");
    }
    if (def.kind == FeatureKind::categorical) {
      if (def.bounds) {
        fail(Errc::schema, "categorical feature '" + def.name + "' cannot carry numeric bounds");
      }
      if (def.categories && def.categories->empty()) {
        fail(Errc::schema, "categorical domain of '" + def.name + "' must be non-empty");
      }
    } else {
      if (def.categories) {
        fail(Errc::schema, "numeric feature '" + def.name + "' cannot carry a category set");
      }
      if (def.bounds && !(def.bounds->lo <= def.bounds->hi)) {
        fail(Errc::schema, "feature '" + def.name + "' has inverted bounds");
      }
    }
  }
}

Json Schema::to_json() const {
  Json doc;
  Json feature_list = Json::array();
  for (const FeatureDef& def : features) {
    Json f;
    f["name"] = def.name;
    f["kind"] = feature_kind_name(def.kind);
    f["unit"] = def.unit;
    if (def.categories) {
      f["domain"] = Json{{"categories", *def.categories}};
    } else if (def.bounds) {
      f["domain"] = Json{{"lo", def.bounds->lo}, {"hi", def.bounds->hi}};
    }
    feature_list.push_back(std::move(f));
  }
  doc["features"] = std::move(feature_list);
  doc["payload_kind"] = payload_kind;
  doc["label_kind"] = label_kind;
  return doc;
}

Schema Schema::from_json(const Json& document) {
  const std::string where = "schema";
  Schema schema;
  const Json& feature_list = require_field(document, "features", where);
  if (!feature_list.is_array()) {
    fail(Errc::parse, where + ": 'features' must be an array");
  }
  for (const Json& f : feature_list) {
    FeatureDef def;
    def.name = require_string(f, "name", where);
    def.kind = feature_kind_from_name(require_string(f, "kind", where));
    if (f.contains("unit")) {
      def.unit = require_string(f, "unit", where);
    }
    if (f.contains("domain") && !f["domain"].is_null()) {
      const Json& domain = f["domain"];
      if (!domain.is_object()) {
        fail(Errc::parse, where + ": domain of '" + def.name + "' must be an object");
      }
      if (domain.contains("categories")) {
        std::vector<std::string> cats;
        for (const Json& c : domain["categories"]) {
          if (!c.is_string()) {
            fail(Errc::parse, where + ": categories of '" + def.name + "' must be strings");
          }
          cats.push_back(c.get<std::string>());
        }
        def.categories = std::move(cats);
      } else {
        def.bounds = NumericBounds{require_number(domain, "lo", where + "/" + def.name),
                                   require_number(domain, "hi", where + "/" + def.name)};
      }
    }
    schema.features.push_back(std::move(def));
  }
  schema.payload_kind = require_string(document, "payload_kind", where);
  schema.label_kind = require_string(document, "label_kind", where);
  schema.validate();
  return schema;
}

std::string Schema::digest() const { return digest_of_json(to_json()); }

bool Schema::operator==(const Schema& other) const {
  return to_json() == other.to_json();
}

Schema parse_schema(std::string_view text, const std::string& where) {
  return Schema::from_json(parse_json(text, where));
}

Schema load_schema(const std::filesystem::path& path) {
  return Schema::from_json(load_json_file(path));
}

FeatureValue feature_value_from_json(const FeatureDef& def, const Json& value,
                                     const std::string& where) {
  switch (def.kind) {
    case FeatureKind::categorical: {
      if (!value.is_string()) {
        fail(Errc::validation, where + ": feature '" + def.name + "' expects a category string");
      }
      std::string category = value.get<std::string>();
      if (def.categories &&
          std::find(def.categories->begin(), def.categories->end(), category) ==
              def.categories->end()) {
        fail(Errc::validation,
             where + ": '" + category + "' is outside the domain of '" + def.name + "'");
      }
      return category;
    }
    case FeatureKind::integer: {
      std::int64_t v = 0;
      if (value.is_number_integer()) {
        v = value.get<std::int64_t>();
      } else if (value.is_number_float()) {
        double d = value.get<double>();
        if (d != std::floor(d)) {
          fail(Errc::validation, where + ": feature '" + def.name + "' expects an integer");
        }
        v = static_cast<std::int64_t>(d);
      } else {
        fail(Errc::validation, where + ": feature '" + def.name + "' expects an integer");
      }
      if (def.bounds && (static_cast<double>(v) < def.bounds->lo ||
                         static_cast<double>(v) > def.bounds->hi)) {
        fail(Errc::validation,
             where + ": value " + std::to_string(v) + " outside bounds of '" + def.name + "'");
      }
      return v;
    }
    case FeatureKind::real: {
      if (!value.is_number()) {
        fail(Errc::validation, where + ": feature '" + def.name + "' expects a number");
      }
      double d = value.get<double>();
      if (!std::isfinite(d)) {
        fail(Errc::validation, where + ": feature '" + def.name + "' must be finite");
      }
      if (def.bounds && (d < def.bounds->lo || d > def.bounds->hi)) {
        fail(Errc::validation, where + ": value outside bounds of '" + def.name + "'");
      }
      return d;
    }
  }
  fail(Errc::internal, "unreachable feature kind");
}

Json feature_value_to_json(const FeatureValue& value) {
  if (const auto* s = std::get_if<std::string>(&value)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
  return std::get<double>(value);
}

}  // namespace sliceaudit
