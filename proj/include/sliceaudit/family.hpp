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

#ifndef SLICEAUDIT_FAMILY_HPP_
#define SLICEAUDIT_FAMILY_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sliceaudit/universe.hpp"

namespace sliceaudit {

// What is known about the case for one feature: a category, an exact
// number, or a number range.
struct CaseProfileEntry {
  std::optional<std::string> category;
  std::optional<double> value;
  std::optional<NumericBounds> range;
};

struct CaseProfile {
  std::map<std::string, CaseProfileEntry> entries;  // keyed by feature name

  void validate(const Schema& schema) const;
  Json to_json() const;
  static CaseProfile from_json(const Json& document);
  std::string digest() const;
};

CaseProfile load_profile(const std::filesystem::path& path);

// Half-width applied when an exact case number is widened into a matching
// interval, absolute in feature units or relative to the case value.
struct Tolerance {
  enum class Mode { absolute, relative };
  Mode mode = Mode::relative;
  double half_width = 0.05;
};

struct ToleranceConfig {
  double default_relative = 0.05;
  std::map<std::string, Tolerance> per_feature;

  Tolerance for_feature(const std::string& name) const;
  void validate(const Schema& schema) const;
  Json to_json() const;
  static ToleranceConfig from_json(const Json& document);
};

ToleranceConfig load_tolerances(const std::filesystem::path& path);

struct FamilyMetadata {
  int k = 0;
  std::string profile_digest;
  ToleranceConfig tolerances;
};

struct DistributionFamily {
  std::vector<SlicePredicate> specs;
  // Informational counts written by the family command; re-derived at audit
  // time, aligned with specs when present.
  std::vector<std::optional<std::size_t>> supports;
  FamilyMetadata meta;

  void validate(const Schema& schema) const;
};

FeatureCondition build_condition(const FeatureDef& feature, const CaseProfileEntry& entry,
                                 const ToleranceConfig& tolerances);

// All non-empty feature subsets of size <= k, each turned into a conjunctive
// slice around the case values; deterministic order and naming.
DistributionFamily generate_kway_family(const CaseProfile& profile, int k,
                                        const Schema& schema,
                                        const ToleranceConfig& tolerances);

std::size_t support(const SlicePredicate& spec, const DataUniverse& universe);

// True iff a hypothetical instance realizing the profile (ranges at their
// midpoint) satisfies every spec in the family.
bool profile_consistency(const CaseProfile& profile, const DistributionFamily& family,
                         const Schema& schema);

std::string family_to_text(const DistributionFamily& family);
void save_family(const DistributionFamily& family, const std::filesystem::path& path);
DistributionFamily load_family(const std::filesystem::path& path);

}  // namespace sliceaudit

#endif  // SLICEAUDIT_FAMILY_HPP_
