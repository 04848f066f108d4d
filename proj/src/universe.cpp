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

#include "sliceaudit/universe.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace sliceaudit {

Json Instance::to_json() const {
  Json record;
  record["id"] = id;
  record["source"] = source;
  Json feats;
  for (const auto& [name, value] : features) {
    feats[name] = feature_value_to_json(value);
  }
  record["features"] = std::move(feats);
  record["payload"] = payload;
  record["label"] = label;
  return record;
}

DataUniverse::DataUniverse(Schema schema, std::vector<Instance> instances,
                           std::vector<std::string> provenance)
    : schema_(std::move(schema)),
      instances_(std::move(instances)),
      provenance_(std::move(provenance)) {
  if (provenance_.empty()) {
    fail(Errc::validation, "universe provenance must be non-empty");
  }
  std::sort(provenance_.begin(), provenance_.end());
  provenance_.erase(std::unique(provenance_.begin(), provenance_.end()), provenance_.end());
  std::set<std::string> ids;
  for (const Instance& instance : instances_) {
    if (!ids.insert(instance.id).second) {
      fail(Errc::duplicate_id, "duplicate instance id '" + instance.id + "'");
    }
  }
}

namespace {

Instance parse_record(const Schema& schema, const Json& record, const std::string& where,
                      const std::string& source) {
  Instance instance;
  instance.id = require_string(record, "id", where);
  instance.source = source;
  const Json& feats = require_field(record, "features", where);
  if (!feats.is_object()) {
    fail(Errc::validation, where + ": 'features' must be an object");
  }
  for (const FeatureDef& def : schema.features) {
    auto it = feats.find(def.name);
    if (it == feats.end()) {
      fail(Errc::validation, where + ": missing feature '" + def.name + "'");
    }
    instance.features.emplace(def.name, feature_value_from_json(def, *it, where));
  }
  for (auto it = feats.begin(); it != feats.end(); ++it) {
    if (schema.find(it.key()) == nullptr) {
      fail(Errc::validation, where + ": feature '" + it.key() + "' is not in the schema");
    }
  }
  instance.payload = require_field(record, "payload", where);
  instance.label = require_field(record, "label", where);
  return instance;
}

}  // namespace

DataUniverse ingest_dataset(const Schema& schema, std::istream& records,
                            const std::string& source) {
  schema.validate();
  if (source.empty()) {
    fail(Errc::validation, "ingest source tag must be non-empty");
  }
  std::vector<Instance> instances;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(records, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::string where = source + " record " + std::to_string(line_number);
    Json record = parse_json(line, where);
    Instance instance = parse_record(schema, record, where, source);
    if (!ids.insert(instance.id).second) {
      fail(Errc::duplicate_id, where + ": id '" + instance.id + "' already ingested");
    }
    instances.push_back(std::move(instance));
  }
  return DataUniverse(schema, std::move(instances), {source});
}

DataUniverse ingest_file(const Schema& schema, const std::filesystem::path& path,
                         const std::string& source) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(Errc::config, "cannot open " + path.string());
  }
  return ingest_dataset(schema, in, source);
}

DataUniverse merge(const std::vector<DataUniverse>& universes) {
  if (universes.empty()) {
    fail(Errc::validation, "merge requires at least one universe");
  }
  const Schema& schema = universes.front().schema();
  for (const DataUniverse& u : universes) {
    if (!(u.schema() == schema)) {
      fail(Errc::schema_mismatch, "universes to merge carry different schemas");
    }
  }

  // Ids colliding across inputs are rewritten as "<source>/<id>" on every
  // claimant; a collision that survives prefixing is unresolvable.
  std::map<std::string, std::size_t> id_counts;
  for (const DataUniverse& u : universes) {
    for (const Instance& instance : u.instances()) {
      ++id_counts[instance.id];
    }
  }

  std::vector<Instance> merged;
  std::vector<std::string> provenance;
  std::set<std::string> final_ids;
  for (const DataUniverse& u : universes) {
    for (const std::string& tag : u.provenance()) {
      provenance.push_back(tag);
    }
    for (const Instance& instance : u.instances()) {
      Instance copy = instance;
      if (id_counts[instance.id] > 1) {
        copy.id = instance.source + "/" + instance.id;
      }
      if (!final_ids.insert(copy.id).second) {
        fail(Errc::duplicate_id,
             "id collision on '" + copy.id + "' is unresolvable after source prefixing");
      }
      merged.push_back(std::move(copy));
    }
  }
  return DataUniverse(schema, std::move(merged), std::move(provenance));
}

InstanceSet select(const DataUniverse& universe, const SlicePredicate& predicate) {
  predicate.validate(universe.schema());
  InstanceSet set;
  set.universe = &universe;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (predicate.matches(universe.instances()[i].features)) {
      set.indices.push_back(i);
    }
  }
  return set;
}

InstanceSet select(const InstanceSet& set, const SlicePredicate& predicate) {
  predicate.validate(set.universe->schema());
  InstanceSet out;
  out.universe = set.universe;
  for (std::size_t index : set.indices) {
    if (predicate.matches(set.universe->instances()[index].features)) {
      out.indices.push_back(index);
    }
  }
  return out;
}

InstanceSet all_instances(const DataUniverse& universe) {
  InstanceSet set;
  set.universe = &universe;
  set.indices.resize(universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i) set.indices[i] = i;
  return set;
}

namespace {

// Quantile with linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double position = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(position);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = position - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

CoverageSummary summarize(const DataUniverse& universe) {
  CoverageSummary summary;
  summary.total = universe.size();
  for (const Instance& instance : universe.instances()) {
    ++summary.per_source[instance.source];
  }
  for (const FeatureDef& def : universe.schema().features) {
    if (def.kind == FeatureKind::categorical) {
      auto& counts = summary.category_counts[def.name];
      for (const Instance& instance : universe.instances()) {
        ++counts[std::get<std::string>(instance.features.at(def.name))];
      }
    } else {
      std::vector<double> values;
      values.reserve(universe.size());
      for (const Instance& instance : universe.instances()) {
        values.push_back(numeric_value(instance.features.at(def.name)));
      }
      std::sort(values.begin(), values.end());
      NumericSummary ns;
      ns.count = values.size();
      if (!values.empty()) {
        ns.min = values.front();
        ns.q25 = quantile(values, 0.25);
        ns.median = quantile(values, 0.5);
        ns.q75 = quantile(values, 0.75);
        ns.max = values.back();
      }
      summary.numeric_summaries[def.name] = ns;
    }
  }
  return summary;
}

Json CoverageSummary::to_json() const {
  Json doc;
  doc["total"] = total;
  doc["per_source"] = per_source;
  Json features;
  for (const auto& [name, counts] : category_counts) {
    features[name] = Json{{"categories", counts}};
  }
  for (const auto& [name, ns] : numeric_summaries) {
    features[name] = Json{{"count", ns.count}, {"min", ns.min},    {"q25", ns.q25},
                          {"median", ns.median}, {"q75", ns.q75}, {"max", ns.max}};
  }
  doc["features"] = std::move(features);
  return doc;
}

std::string universe_to_text(const DataUniverse& universe) {
  std::ostringstream out;
  Json header;
  header["universe"] = Json{{"provenance", universe.provenance()},
                            {"schema", universe.schema().to_json()}};
  out << header.dump() << '\n';
  for (const Instance& instance : universe.instances()) {
    out << instance.to_json().dump() << '\n';
  }
  return out.str();
}

void save_universe(const DataUniverse& universe, const std::filesystem::path& path) {
  write_text_file(path, universe_to_text(universe));
}

DataUniverse load_universe(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(Errc::config, "cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    fail(Errc::parse, path.string() + ": empty universe file");
  }
  Json header = parse_json(line, path.string() + " header");
  const Json& body = require_field(header, "universe", path.string());
  Schema schema = Schema::from_json(require_field(body, "schema", path.string()));
  std::vector<std::string> provenance;
  for (const Json& tag : require_field(body, "provenance", path.string())) {
    provenance.push_back(tag.get<std::string>());
  }

  std::vector<Instance> instances;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::string where = path.string() + " line " + std::to_string(line_number);
    Json record = parse_json(line, where);
    std::string source = require_string(record, "source", where);
    instances.push_back(parse_record(schema, record, where, source));
  }
  return DataUniverse(std::move(schema), std::move(instances), std::move(provenance));
}

}  // namespace sliceaudit
