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

#include "sliceaudit/checks.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

namespace sliceaudit {

const char* metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::error_rate: return "error_rate";
    case MetricKind::accuracy: return "accuracy";
    case MetricKind::false_inclusion_rate: return "false_inclusion_rate";
    case MetricKind::false_exclusion_rate: return "false_exclusion_rate";
  }
  return "?";
}

MetricKind metric_kind_from_name(std::string_view name) {
  if (name == "error_rate") return MetricKind::error_rate;
  if (name == "accuracy") return MetricKind::accuracy;
  if (name == "false_inclusion_rate") return MetricKind::false_inclusion_rate;
  if (name == "false_exclusion_rate") return MetricKind::false_exclusion_rate;
  fail(Errc::config, "unknown metric '" + std::string(name) + "'");
}

Json DecisionRule::to_json() const {
  Json j;
  j["score_field"] = score_field;
  j["tau"] = tau;
  j["exclusion_flag_field"] = exclusion_flag_field;
  return j;
}

bool decide(const ToolOutput& output, const DecisionRule& rule) {
  if (!rule.exclusion_flag_field.empty()) {
    auto flag = output.scores.find(rule.exclusion_flag_field);
    if (flag != output.scores.end() && flag->second >= 0.5) {
      return false;
    }
  }
  auto it = output.scores.find(rule.score_field);
  if (it == output.scores.end()) {
    fail(Errc::missing_score, "tool output lacks score field '" + rule.score_field + "'");
  }
  if (!std::isfinite(it->second)) {
    fail(Errc::non_finite_score, "score '" + rule.score_field + "' is not finite");
  }
  return it->second >= rule.tau;
}

void CheckSpec::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    fail(Errc::config, "theta must lie in [0, 1]");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(Errc::config, "alpha must lie in (0, 1)");
  }
  if (min_support < 1) {
    fail(Errc::config, "n_min must be at least 1");
  }
  if (!std::isfinite(decision.tau)) {
    fail(Errc::config, "tau must be finite");
  }
  if (decision.score_field.empty()) {
    fail(Errc::config, "score_field must be non-empty");
  }
}

Json CheckSpec::to_json() const {
  Json j;
  j["metric"] = metric_kind_name(metric);
  j["score_field"] = decision.score_field;
  j["tau"] = decision.tau;
  j["theta"] = theta;
  j["alpha"] = alpha;
  j["n_min"] = min_support;
  j["mode"] = mode == CheckMode::confidence_interval ? "ci" : "point";
  j["provenance"] = provenance;
  return j;
}

CheckSpec CheckSpec::from_json(const Json& document) {
  const std::string where = "check spec";
  CheckSpec spec;
  spec.metric = metric_kind_from_name(require_string(document, "metric", where));
  if (document.contains("score_field")) {
    spec.decision.score_field = require_string(document, "score_field", where);
  }
  if (document.contains("tau")) {
    spec.decision.tau = require_number(document, "tau", where);
  }
  spec.theta = require_number(document, "theta", where);
  if (document.contains("alpha")) {
    spec.alpha = require_number(document, "alpha", where);
  }
  if (document.contains("n_min")) {
    const std::int64_t n_min = require_integer(document, "n_min", where);
    if (n_min < 1) fail(Errc::config, "n_min must be at least 1");
    spec.min_support = static_cast<std::size_t>(n_min);
  }
  if (document.contains("mode")) {
    const std::string mode = require_string(document, "mode", where);
    if (mode == "ci") {
      spec.mode = CheckMode::confidence_interval;
    } else if (mode == "point") {
      spec.mode = CheckMode::point_estimate;
    } else {
      fail(Errc::config, "mode must be 'ci' or 'point', got '" + mode + "'");
    }
  }
  if (document.contains("provenance")) {
    spec.provenance = require_string(document, "provenance", where);
  }
  spec.validate();
  return spec;
}

CheckSpec load_check_spec(const std::filesystem::path& path) {
  return CheckSpec::from_json(load_json_file(path));
}

const char* check_reason_name(CheckReason reason) {
  switch (reason) {
    case CheckReason::met_threshold: return "MetThreshold";
    case CheckReason::threshold_violated: return "ThresholdViolated";
    case CheckReason::insufficient_support: return "InsufficientSupport";
    case CheckReason::no_eligible_instances: return "NoEligibleInstances";
  }
  return "?";
}

CheckReason check_reason_from_name(std::string_view name) {
  if (name == "MetThreshold") return CheckReason::met_threshold;
  if (name == "ThresholdViolated") return CheckReason::threshold_violated;
  if (name == "InsufficientSupport") return CheckReason::insufficient_support;
  if (name == "NoEligibleInstances") return CheckReason::no_eligible_instances;
  fail(Errc::parse, "unknown check reason '" + std::string(name) + "'");
}

MetricEstimate evaluate_metric(MetricKind metric, const std::vector<bool>& decisions,
                               const std::vector<bool>& labels) {
  if (decisions.size() != labels.size()) {
    fail(Errc::invalid_counts, "decisions and labels are not aligned");
  }
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const bool decision = decisions[i];
    const bool label = labels[i];
    switch (metric) {
      case MetricKind::error_rate:
        ++denominator;
        if (decision != label) ++numerator;
        break;
      case MetricKind::accuracy:
        ++denominator;
        if (decision == label) ++numerator;
        break;
      case MetricKind::false_inclusion_rate:
        if (!label) {
          ++denominator;
          if (decision) ++numerator;
        }
        break;
      case MetricKind::false_exclusion_rate:
        if (label) {
          ++denominator;
          if (!decision) ++numerator;
        }
        break;
    }
  }
  if (denominator == 0) {
    fail(Errc::no_eligible_instances,
         std::string(metric_kind_name(metric)) + " has an empty denominator on this slice");
  }
  MetricEstimate estimate;
  estimate.numerator = numerator;
  estimate.denominator = denominator;
  estimate.point = static_cast<double>(numerator) / static_cast<double>(denominator);
  return estimate;
}

std::pair<double, double> exact_binomial_ci(std::size_t successes, std::size_t trials,
                                            double alpha) {
  if (trials < 1 || successes > trials) {
    fail(Errc::invalid_counts, "need 0 <= successes <= trials with trials >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(Errc::invalid_counts, "alpha must lie in (0, 1)");
  }
  const double k = static_cast<double>(successes);
  const double n = static_cast<double>(trials);
  double lo = 0.0;
  double hi = 1.0;
  if (successes > 0) {
    lo = boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
  }
  if (successes < trials) {
    hi = boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
  }
  return {lo, hi};
}

CheckResult run_check(const CheckSpec& spec, const std::vector<bool>& decisions,
                      const std::vector<bool>& labels) {
  spec.validate();
  CheckResult result;
  MetricEstimate estimate;
  try {
    estimate = evaluate_metric(spec.metric, decisions, labels);
  } catch (const Error& e) {
    if (e.code() == Errc::no_eligible_instances) {
      result.pass = false;
      result.reason = CheckReason::no_eligible_instances;
      return result;
    }
    throw;
  }
  auto [lo, hi] = exact_binomial_ci(estimate.numerator, estimate.denominator, spec.alpha);
  estimate.ci_lo = lo;
  estimate.ci_hi = hi;
  result.estimate = estimate;

  // A sub-population too small to estimate with confidence fails outright,
  // whatever the observed counts say.
  if (estimate.denominator < spec.min_support) {
    result.pass = false;
    result.reason = CheckReason::insufficient_support;
    return result;
  }

  bool met;
  if (metric_is_error_like(spec.metric)) {
    const double bound =
        spec.mode == CheckMode::confidence_interval ? estimate.ci_hi : estimate.point;
    met = bound <= spec.theta;
  } else {
    const double bound =
        spec.mode == CheckMode::confidence_interval ? estimate.ci_lo : estimate.point;
    met = bound >= spec.theta;
  }
  result.pass = met;
  result.reason = met ? CheckReason::met_threshold : CheckReason::threshold_violated;
  return result;
}

}  // namespace sliceaudit
