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

#include "sliceaudit/family.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sliceaudit {

namespace {

std::string format_number(double value) { return Json(value).dump(); }

void check_numeric_entry_in_domain(const FeatureDef& def, double lo, double hi,
                                   const std::string& name) {
  if (def.bounds && (lo < def.bounds->lo || hi > def.bounds->hi)) {
    fail(Errc::validation,
         "profile entry for '" + name + "' lies outside the feature domain");
  }
}

}  // namespace

void CaseProfile::validate(const Schema& schema) const {
  if (entries.empty()) {
    fail(Errc::empty_profile, "case profile has no entries");
  }
  for (const auto& [name, entry] : entries) {
    const FeatureDef& def = schema.require(name);
    const int forms = (entry.category ? 1 : 0) + (entry.value ? 1 : 0) + (entry.range ? 1 : 0);
    if (forms != 1) {
      fail(Errc::validation, "profile entry for '" + name + "' must take exactly one form");
    }
    if (entry.category) {
      if (def.kind != FeatureKind::categorical) {
        fail(Errc::kind_mismatch, "category given for numeric feature '" + name + "'");
      }
      if (def.categories && std::find(def.categories->begin(), def.categories->end(),
                                      *entry.category) == def.categories->end()) {
        fail(Errc::validation,
             "category '" + *entry.category + "' outside the domain of '" + name + "'");
      }
    } else {
      if (def.kind == FeatureKind::categorical) {
        fail(Errc::kind_mismatch, "number given for categorical feature '" + name + "'");
      }
      if (entry.value) {
        check_numeric_entry_in_domain(def, *entry.value, *entry.value, name);
      } else {
        if (!(entry.range->lo <= entry.range->hi)) {
          fail(Errc::validation, "inverted range in profile entry for '" + name + "'");
        }
        check_numeric_entry_in_domain(def, entry.range->lo, entry.range->hi, name);
      }
    }
  }
}

Json CaseProfile::to_json() const {
  Json doc;
  for (const auto& [name, entry] : entries) {
    if (entry.category) {
      doc[name] = *entry.category;
    } else if (entry.value) {
      doc[name] = *entry.value;
    } else {
      doc[name] = Json{{"lo", entry.range->lo}, {"hi", entry.range->hi}};
    }
  }
  return doc;
}

CaseProfile CaseProfile::from_json(const Json& document) {
  const std::string where = "profile";
  if (!document.is_object() || document.empty()) {
    fail(Errc::empty_profile, where + ": expected a non-empty feature map");
  }
  CaseProfile profile;
  for (auto it = document.begin(); it != document.end(); ++it) {
    CaseProfileEntry entry;
    const Json& value = it.value();
    if (value.is_string()) {
      entry.category = value.get<std::string>();
    } else if (value.is_number()) {
      entry.value = value.get<double>();
    } else if (value.is_object()) {
      entry.range = NumericBounds{require_number(value, "lo", where + "/" + it.key()),
                                  require_number(value, "hi", where + "/" + it.key())};
    } else {
      fail(Errc::parse, where + ": entry '" + it.key() + "' must be a string, number, or range");
    }
    profile.entries.emplace(it.key(), std::move(entry));
  }
  return profile;
}

std::string CaseProfile::digest() const { return digest_of_json(to_json()); }

CaseProfile load_profile(const std::filesystem::path& path) {
  return CaseProfile::from_json(load_json_file(path));
}

Tolerance ToleranceConfig::for_feature(const std::string& name) const {
  auto it = per_feature.find(name);
  if (it != per_feature.end()) return it->second;
  return Tolerance{Tolerance::Mode::relative, default_relative};
}

void ToleranceConfig::validate(const Schema& schema) const {
  if (!(default_relative > 0)) {
    fail(Errc::config, "default relative tolerance must be strictly positive");
  }
  for (const auto& [name, tol] : per_feature) {
    const FeatureDef& def = schema.require(name);
    if (def.kind == FeatureKind::categorical) {
      fail(Errc::config, "tolerance configured for categorical feature '" + name + "'");
    }
    // Integer features may use a zero half-width (exact match); real features
    // would degenerate to a measure-zero slice.
    if (tol.half_width < 0 || (def.kind == FeatureKind::real && !(tol.half_width > 0))) {
      fail(Errc::config, "half-width for '" + name + "' must be strictly positive");
    }
  }
}

Json ToleranceConfig::to_json() const {
  Json doc;
  doc["default_relative"] = default_relative;
  Json features = Json::object();
  for (const auto& [name, tol] : per_feature) {
    if (tol.mode == Tolerance::Mode::absolute) {
      features[name] = Json{{"absolute", tol.half_width}};
    } else {
      features[name] = Json{{"relative", tol.half_width}};
    }
  }
  doc["features"] = std::move(features);
  return doc;
}

ToleranceConfig ToleranceConfig::from_json(const Json& document) {
  const std::string where = "tolerances";
  ToleranceConfig config;
  if (document.contains("default_relative")) {
    config.default_relative = require_number(document, "default_relative", where);
  }
  if (document.contains("features")) {
    const Json& features = document["features"];
    if (!features.is_object()) {
      fail(Errc::parse, where + ": 'features' must be an object");
    }
    for (auto it = features.begin(); it != features.end(); ++it) {
      Tolerance tol;
      if (it.value().contains("absolute")) {
        tol.mode = Tolerance::Mode::absolute;
        tol.half_width = require_number(it.value(), "absolute", where + "/" + it.key());
      } else {
        tol.mode = Tolerance::Mode::relative;
        tol.half_width = require_number(it.value(), "relative", where + "/" + it.key());
      }
      config.per_feature.emplace(it.key(), tol);
    }
  }
  return config;
}

ToleranceConfig load_tolerances(const std::filesystem::path& path) {
  return ToleranceConfig::from_json(load_json_file(path));
}

FeatureCondition build_condition(const FeatureDef& feature, const CaseProfileEntry& entry,
                                 const ToleranceConfig& tolerances) {
  FeatureCondition cond;
  cond.feature = feature.name;
  if (entry.category) {
    if (feature.kind != FeatureKind::categorical) {
      fail(Errc::kind_mismatch, "category given for numeric feature '" + feature.name + "'");
    }
    cond.equals = *entry.category;
    return cond;
  }
  if (feature.kind == FeatureKind::categorical) {
    fail(Errc::kind_mismatch, "number given for categorical feature '" + feature.name + "'");
  }
  NumericBounds bounds;
  if (entry.range) {
    bounds = *entry.range;  // the stated case range is used as-is
  } else {
    const Tolerance tol = tolerances.for_feature(feature.name);
    const double half = tol.mode == Tolerance::Mode::absolute
                            ? tol.half_width
                            : tol.half_width * std::abs(*entry.value);
    bounds = NumericBounds{*entry.value - half, *entry.value + half};
  }
  if (feature.kind == FeatureKind::integer) {
    // Closed integer interval; a tolerance below 1 degenerates to an exact match.
    bounds.lo = std::ceil(bounds.lo);
    bounds.hi = std::floor(bounds.hi);
    if (bounds.lo > bounds.hi) {
      fail(Errc::validation,
           "tolerance on integer feature '" + feature.name + "' admits no integer values");
    }
  }
  cond.range = bounds;
  return cond;
}

namespace {

std::string spec_name_for(const std::vector<FeatureCondition>& conditions) {
  std::string name;
  for (const FeatureCondition& cond : conditions) {
    if (!name.empty()) name += " & ";
    if (cond.equals) {
      name += cond.feature + "=" + *cond.equals;
    } else {
      name += cond.feature + "=[" + format_number(cond.range->lo) + "," +
              format_number(cond.range->hi) + "]";
    }
  }
  return name;
}

void enumerate_subsets(const std::vector<std::string>& names, int k, std::size_t start,
                       std::vector<std::size_t>& current,
                       std::vector<std::vector<std::size_t>>& out) {
  for (std::size_t i = start; i < names.size(); ++i) {
    current.push_back(i);
    out.push_back(current);
    if (static_cast<int>(current.size()) < k) {
      enumerate_subsets(names, k, i + 1, current, out);
    }
    current.pop_back();
  }
}

}  // namespace

DistributionFamily generate_kway_family(const CaseProfile& profile, int k,
                                        const Schema& schema,
                                        const ToleranceConfig& tolerances) {
  profile.validate(schema);
  tolerances.validate(schema);
  const int m = static_cast<int>(profile.entries.size());
  if (k < 1 || k > m) {
    fail(Errc::invalid_k, "k must satisfy 1 <= k <= " + std::to_string(m) +
                              ", got " + std::to_string(k));
  }

  std::vector<std::string> names;
  for (const auto& [name, entry] : profile.entries) {
    names.push_back(name);  // std::map iteration is already lexicographic
  }

  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> current;
  enumerate_subsets(names, k, 0, current, subsets);

  DistributionFamily family;
  family.meta.k = k;
  family.meta.profile_digest = profile.digest();
  family.meta.tolerances = tolerances;
  for (const auto& subset : subsets) {
    SlicePredicate spec;
    for (std::size_t index : subset) {
      const std::string& feature_name = names[index];
      spec.conditions.push_back(build_condition(schema.require(feature_name),
                                                profile.entries.at(feature_name), tolerances));
    }
    spec.name = spec_name_for(spec.conditions);
    family.specs.push_back(std::move(spec));
  }
  family.supports.assign(family.specs.size(), std::nullopt);
  family.validate(schema);
  return family;
}

void DistributionFamily::validate(const Schema& schema) const {
  if (specs.empty()) {
    fail(Errc::config, "distribution family must contain at least one slice");
  }
  if (!supports.empty() && supports.size() != specs.size()) {
    fail(Errc::config, "family support list does not align with its specs");
  }
  std::set<std::string> names;
  for (const SlicePredicate& spec : specs) {
    spec.validate(schema);
    if (!names.insert(spec.name).second) {
      fail(Errc::config, "duplicate slice name '" + spec.name + "' in family");
    }
  }
}

std::size_t support(const SlicePredicate& spec, const DataUniverse& universe) {
  return select(universe, spec).size();
}

bool profile_consistency(const CaseProfile& profile, const DistributionFamily& family,
                         const Schema& schema) {
  profile.validate(schema);
  std::map<std::string, FeatureValue> realization;
  for (const auto& [name, entry] : profile.entries) {
    if (entry.category) {
      realization.emplace(name, *entry.category);
    } else if (entry.value) {
      realization.emplace(name, *entry.value);
    } else {
      realization.emplace(name, (entry.range->lo + entry.range->hi) / 2.0);
    }
  }
  for (const SlicePredicate& spec : family.specs) {
    if (!spec.matches(realization)) return false;
  }
  return true;
}

std::string family_to_text(const DistributionFamily& family) {
  Json doc;
  doc["generated"] = Json{{"k", family.meta.k},
                          {"profile_digest", family.meta.profile_digest},
                          {"tolerances", family.meta.tolerances.to_json()}};
  Json specs = Json::array();
  for (std::size_t i = 0; i < family.specs.size(); ++i) {
    Json spec = family.specs[i].to_json();
    if (i < family.supports.size() && family.supports[i]) {
      spec["support"] = *family.supports[i];
    }
    specs.push_back(std::move(spec));
  }
  doc["specs"] = std::move(specs);
  return doc.dump(2) + "\n";
}

void save_family(const DistributionFamily& family, const std::filesystem::path& path) {
  write_text_file(path, family_to_text(family));
}

DistributionFamily load_family(const std::filesystem::path& path) {
  Json doc = load_json_file(path);
  const std::string where = path.string();
  DistributionFamily family;
  if (doc.contains("generated")) {
    const Json& generated = doc["generated"];
    family.meta.k = static_cast<int>(require_integer(generated, "k", where));
    family.meta.profile_digest = require_string(generated, "profile_digest", where);
    if (generated.contains("tolerances")) {
      family.meta.tolerances = ToleranceConfig::from_json(generated["tolerances"]);
    }
  }
  const Json& specs = require_field(doc, "specs", where);
  if (!specs.is_array()) {
    fail(Errc::parse, where + ": 'specs' must be an array");
  }
  for (const Json& spec : specs) {
    family.specs.push_back(SlicePredicate::from_json(spec, where));
    if (spec.contains("support")) {
      family.supports.push_back(static_cast<std::size_t>(require_integer(spec, "support", where)));
    } else {
      family.supports.push_back(std::nullopt);
    }
  }
  return family;
}

}  // namespace sliceaudit
