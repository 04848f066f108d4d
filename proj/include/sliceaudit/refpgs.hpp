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

#ifndef SLICEAUDIT_REFPGS_HPP_
#define SLICEAUDIT_REFPGS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sliceaudit/adapters.hpp"

namespace sliceaudit::refpgs {

inline constexpr const char* kPayloadKind = "pgs-mixture-v1";
inline constexpr const char* kToolName = "refpgs";
inline constexpr const char* kToolVersion = "1.0.0";

// Score emitted instead of -inf when the contributor hypothesis is
// impossible; the decision rule reads the flag, not the sentinel.
inline constexpr double kDefiniteExclusionScore = -999.0;
inline constexpr const char* kDefiniteExclusionField = "definite_exclusion";

// Enumeration budget for one hypothesis at one locus.
inline constexpr double kComplexityBound = 1e6;

struct LocusModel {
  std::string name;
  std::vector<std::string> alleles;  // sorted, <= 32 per locus
  std::vector<double> freqs;         // aligned; strictly positive, sums to 1

  std::size_t allele_index(std::string_view allele) const;
  void validate() const;
};

struct FrequencyTable {
  std::vector<LocusModel> loci;  // sorted by locus name

  const LocusModel& require_locus(std::string_view name) const;
  void validate() const;
  Json to_json() const;
  static FrequencyTable from_json(const Json& document);
  std::string digest() const;
};

FrequencyTable load_frequency_table(const std::filesystem::path& path);

// Unordered allele pair at one locus, stored as indices with a <= b.
struct Genotype {
  std::uint8_t a = 0;
  std::uint8_t b = 0;

  Genotype() = default;
  Genotype(std::uint8_t first, std::uint8_t second)
      : a(first < second ? first : second), b(first < second ? second : first) {}

  bool homozygous() const { return a == b; }
  int copies_of(std::uint8_t allele) const {
    return (a == allele ? 1 : 0) + (b == allele ? 1 : 0);
  }
};

// Hardy-Weinberg prior: 2 f_a f_b for heterozygotes, f_a^2 for homozygotes.
double genotype_prior(const Genotype& genotype, const LocusModel& locus);

// Semi-continuous single-locus model. Per allele a, with
// q(a) = prod_i dropout_i^{copies_i(a)}:
//   a in evidence:  1 - q(a) * (1 - drop_in * f_a)
//   a otherwise:        q(a) * (1 - drop_in * f_a)
// and the locus likelihood is the product over the allele set.
double locus_likelihood(std::uint32_t evidence_mask, std::span<const Genotype> genotypes,
                        const LocusModel& locus, std::span<const double> dropout,
                        double drop_in);

// P(evidence | knowns plus u unknown contributors), the exact sum over all
// unknown genotype assignments weighted by their Hardy-Weinberg priors.
// Unknowns sharing a dropout value are enumerated as genotype multisets with
// multiplicity-corrected priors; every term is nonnegative, so the sum is
// forward-stable and structural zeros come out exact.
double hypothesis_likelihood(std::uint32_t evidence_mask, std::span<const Genotype> knowns,
                             std::span<const double> known_dropout,
                             std::span<const double> unknown_dropout,
                             const LocusModel& locus, double drop_in);

std::uint32_t evidence_mask_from_names(const std::vector<std::string>& alleles,
                                       const LocusModel& locus);

struct LocusData {
  std::string locus;
  std::uint32_t evidence_mask = 0;
  Genotype reference;
};

// Parsed and validated "pgs-mixture-v1" payload.
struct MixturePayload {
  std::string freq_ref;
  int contributors = 1;
  double drop_in = 0.0;
  std::vector<double> dropout;  // one entry per contributor, each in [0, 1)
  std::vector<LocusData> loci;  // aligned with the frequency table

  static MixturePayload parse(const Json& payload, const FrequencyTable& table);
};

struct LrResult {
  double log10_lr = 0.0;
  bool definite_exclusion = false;       // contributor hypothesis impossible
  std::vector<double> per_locus_log10;   // empty on definite exclusion
};

// Likelihood ratio of "reference is contributor 1" against "all contributors
// are unknown, unrelated individuals", accumulated in log10 across loci.
LrResult compute_lr(const MixturePayload& payload, const FrequencyTable& table);

// In-process adapter around compute_lr.
class RefPgsTool : public ToolAdapter {
 public:
  explicit RefPgsTool(FrequencyTable table);

  const ToolIdentity& identity() override { return identity_; }
  ToolOutput run(const Instance& instance) override;
  ToolOutput run_payload(const Json& payload);

  const FrequencyTable& table() const { return table_; }

 private:
  FrequencyTable table_;
  ToolIdentity identity_;
};

ToolIdentity refpgs_identity(const FrequencyTable& table);

// Wire-protocol loop for the standalone executable: identity line first,
// then one response per request line until EOF. Returns a process exit code.
int serve_protocol(std::istream& in, std::ostream& out, const FrequencyTable& table);

}  // namespace sliceaudit::refpgs

#endif  // SLICEAUDIT_REFPGS_HPP_
