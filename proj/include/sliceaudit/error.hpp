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

#ifndef SLICEAUDIT_ERROR_HPP_
#define SLICEAUDIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sliceaudit {

// Every failure the library reports, one code per contract violation.
enum class Errc {
  parse,
  schema,
  validation,
  duplicate_id,
  schema_mismatch,
  unknown_feature,
  kind_mismatch,
  invalid_k,
  empty_profile,
  missing_score,
  non_finite_score,
  invalid_counts,
  no_eligible_instances,
  protocol,
  serialization,
  adapter,
  payload_kind_mismatch,
  unknown_allele,
  complexity_guard,
  degenerate_locus,
  config,
  no_evaluable_slices,
  internal,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

// True for codes that identify a bad configuration or input file rather than
// a misbehaving tool process. Drives the CLI exit-code split (2 vs 3).
bool errc_is_config(Errc code);

}  // namespace sliceaudit

#endif  // SLICEAUDIT_ERROR_HPP_
