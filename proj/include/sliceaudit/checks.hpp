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

#ifndef SLICEAUDIT_CHECKS_HPP_
#define SLICEAUDIT_CHECKS_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sliceaudit/adapters.hpp"

namespace sliceaudit {

enum class MetricKind {
  error_rate,
  accuracy,
  false_inclusion_rate,  // positives among true negatives
  false_exclusion_rate,  // negatives among true positives
};

const char* metric_kind_name(MetricKind kind);
MetricKind metric_kind_from_name(std::string_view name);

// Error-like metrics pass when small; accuracy passes when large.
inline bool metric_is_error_like(MetricKind kind) { return kind != MetricKind::accuracy; }

// Maps a score vector to the reported inclusion/exclusion decision:
// positive iff score >= tau. A definite-exclusion flag emitted by the tool
// (H_p impossible) forces exclusion regardless of the score sentinel.
struct DecisionRule {
  std::string score_field = "log10_lr";
  double tau = 0.0;
  std::string exclusion_flag_field = "definite_exclusion";

  Json to_json() const;
};

bool decide(const ToolOutput& output, const DecisionRule& rule);

enum class CheckMode { confidence_interval, point_estimate };

struct CheckSpec {
  MetricKind metric = MetricKind::error_rate;
  DecisionRule decision;
  double theta = 0.05;        // pass threshold on the metric
  double alpha = 0.05;        // 1 - confidence level
  std::size_t min_support = 30;
  CheckMode mode = CheckMode::confidence_interval;
  std::string provenance;     // free-text source of theta, echoed in reports

  void validate() const;
  Json to_json() const;
  static CheckSpec from_json(const Json& document);
};

CheckSpec load_check_spec(const std::filesystem::path& path);

struct MetricEstimate {
  double point = 0.0;
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
};

enum class CheckReason {
  met_threshold,
  threshold_violated,
  insufficient_support,
  no_eligible_instances,
};

const char* check_reason_name(CheckReason reason);
CheckReason check_reason_from_name(std::string_view name);

struct CheckResult {
  bool pass = false;
  std::optional<MetricEstimate> estimate;  // absent when no eligible instances
  CheckReason reason = CheckReason::no_eligible_instances;
};

// Point estimate and counts for one metric over aligned decisions/labels.
// Throws NoEligibleInstances when the metric's denominator is empty.
MetricEstimate evaluate_metric(MetricKind metric, const std::vector<bool>& decisions,
                               const std::vector<bool>& labels);

// Two-sided exact (Clopper-Pearson) interval at level 1-alpha.
std::pair<double, double> exact_binomial_ci(std::size_t successes, std::size_t trials,
                                            double alpha);

CheckResult run_check(const CheckSpec& spec, const std::vector<bool>& decisions,
                      const std::vector<bool>& labels);

}  // namespace sliceaudit

#endif  // SLICEAUDIT_CHECKS_HPP_
