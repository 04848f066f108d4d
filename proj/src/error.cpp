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

#include "sliceaudit/error.hpp"

namespace sliceaudit {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::parse: return "ParseError";
    case Errc::schema: return "SchemaError";
    case Errc::validation: return "ValidationError";
    case Errc::duplicate_id: return "DuplicateIdError";
    case Errc::schema_mismatch: return "SchemaMismatchError";
    case Errc::unknown_feature: return "UnknownFeatureError";
    case Errc::kind_mismatch: return "KindMismatchError";
    case Errc::invalid_k: return "InvalidK";
    case Errc::empty_profile: return "EmptyProfile";
    case Errc::missing_score: return "MissingScoreError";
    case Errc::non_finite_score: return "NonFiniteScoreError";
    case Errc::invalid_counts: return "InvalidCounts";
    case Errc::no_eligible_instances: return "NoEligibleInstances";
    case Errc::protocol: return "ProtocolError";
    case Errc::serialization: return "SerializationError";
    case Errc::adapter: return "AdapterInvocationError";
    case Errc::payload_kind_mismatch: return "PayloadKindMismatch";
    case Errc::unknown_allele: return "UnknownAllele";
    case Errc::complexity_guard: return "ComplexityGuard";
    case Errc::degenerate_locus: return "DegenerateLocus";
    case Errc::config: return "ConfigError";
    case Errc::no_evaluable_slices: return "NoEvaluableSlices";
    case Errc::internal: return "InternalError";
  }
  return "UnknownError";
}

bool errc_is_config(Errc code) {
  switch (code) {
    case Errc::missing_score:
    case Errc::non_finite_score:
    case Errc::protocol:
    case Errc::adapter:
    case Errc::degenerate_locus:
      return false;
    default:
      return true;
  }
}

}  // namespace sliceaudit
