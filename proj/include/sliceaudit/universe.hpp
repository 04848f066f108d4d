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

#ifndef SLICEAUDIT_UNIVERSE_HPP_
#define SLICEAUDIT_UNIVERSE_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "sliceaudit/schema.hpp"
#include "sliceaudit/slice.hpp"

namespace sliceaudit {

// One labeled test example: case features for slicing, an opaque payload the
// tool consumes, and the ground truth.
struct Instance {
  std::string id;
  std::string source;
  std::map<std::string, FeatureValue> features;
  Json payload;
  Json label;

  Json to_json() const;  // canonical record (sorted keys inside sub-objects)
};

// Immutable after construction; safe to share across threads.
class DataUniverse {
 public:
  DataUniverse(Schema schema, std::vector<Instance> instances,
               std::vector<std::string> provenance);

  const Schema& schema() const { return schema_; }
  const std::vector<Instance>& instances() const { return instances_; }
  const std::vector<std::string>& provenance() const { return provenance_; }
  std::size_t size() const { return instances_.size(); }

 private:
  Schema schema_;
  std::vector<Instance> instances_;
  std::vector<std::string> provenance_;
};

// A slice of a universe: indices in universe order, so repeated filtering
// composes and stays order-stable.
struct InstanceSet {
  const DataUniverse* universe = nullptr;
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  const Instance& at(std::size_t position) const {
    return universe->instances()[indices[position]];
  }
};

DataUniverse ingest_dataset(const Schema& schema, std::istream& records,
                            const std::string& source);
DataUniverse ingest_file(const Schema& schema, const std::filesystem::path& path,
                         const std::string& source);

DataUniverse merge(const std::vector<DataUniverse>& universes);

InstanceSet select(const DataUniverse& universe, const SlicePredicate& predicate);
InstanceSet select(const InstanceSet& set, const SlicePredicate& predicate);
InstanceSet all_instances(const DataUniverse& universe);

struct NumericSummary {
  std::size_t count = 0;
  double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};

struct CoverageSummary {
  std::size_t total = 0;
  std::map<std::string, std::size_t> per_source;
  std::map<std::string, std::map<std::string, std::size_t>> category_counts;
  std::map<std::string, NumericSummary> numeric_summaries;

  Json to_json() const;
};

CoverageSummary summarize(const DataUniverse& universe);

// Universe file: line 1 is a header {"universe":{"provenance":..,"schema":..}},
// every following line is one canonical instance record. UTF-8, LF-terminated.
void save_universe(const DataUniverse& universe, const std::filesystem::path& path);
DataUniverse load_universe(const std::filesystem::path& path);
std::string universe_to_text(const DataUniverse& universe);

}  // namespace sliceaudit

#endif  // SLICEAUDIT_UNIVERSE_HPP_
