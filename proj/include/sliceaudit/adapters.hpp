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

#ifndef SLICEAUDIT_ADAPTERS_HPP_
#define SLICEAUDIT_ADAPTERS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sliceaudit/universe.hpp"

namespace sliceaudit {

struct ToolIdentity {
  std::string name;
  std::string version;
  std::string digest;        // covers name, version, and tool configuration
  std::string payload_kind;  // payload format the tool accepts

  Json to_json() const;
  static ToolIdentity from_json(const Json& value, const std::string& where);
};

struct ToolOutput {
  std::map<std::string, double> scores;  // every value finite
  std::string diagnostics;               // optional, not sent over the wire

  bool operator==(const ToolOutput& other) const { return scores == other.scores; }
};

// The black-box tool contract. run() must be a pure function of the
// instance payload: identical payloads yield identical outputs. Adapters
// must be total over valid payloads of their declared payload_kind.
class ToolAdapter {
 public:
  virtual ~ToolAdapter() = default;

  virtual const ToolIdentity& identity() = 0;
  virtual ToolOutput run(const Instance& instance) = 0;

  // Evaluates many instances; the default fans run() out over a bounded
  // thread pool. Outputs are slotted by position, so results do not depend
  // on scheduling. Implementations must stay reentrant.
  virtual std::vector<ToolOutput> run_many(const DataUniverse& universe,
                                           const std::vector<std::size_t>& indices,
                                           int parallelism);

  // Releases any external resources; for process adapters this sends EOF
  // and requires a clean exit.
  virtual void close() {}
};

std::string payload_digest(const Json& payload);

// ---------------------------------------------------------------------------
// Wire protocol: line-delimited JSON over stdin/stdout of a spawned process.
//
//   tool -> harness  (once, on startup)
//     {"identity":{"name":..,"version":..,"digest":..,"payload_kind":..}}
//   harness -> tool  (one per instance)
//     {"seq":N,"id":"...","payload":{...}}
//   tool -> harness  (one per request, any order)
//     {"seq":N,"scores":{"log10_lr":"<decimal, 17 significant digits>"}}
//     {"seq":N,"error":"message"}
//
// The tool must flush after every line and exit 0 once stdin reaches EOF.
// ---------------------------------------------------------------------------

std::string encode_request(const Instance& instance, std::uint64_t seq);

struct ProtocolResponse {
  std::uint64_t seq = 0;
  std::optional<ToolOutput> output;  // empty on tool-reported error
  std::string error;
};

ProtocolResponse decode_response(const std::string& line);

std::string encode_response(std::uint64_t seq, const ToolOutput& output);
std::string encode_error_response(std::uint64_t seq, const std::string& message);
std::string encode_identity(const ToolIdentity& identity);

// Runs a vendor executable behind the wire protocol. The command line is
// executed via /bin/sh; requests are serialized on the child's stdin and
// responses matched back by sequence number, so response order is free.
class ExternalProcessAdapter : public ToolAdapter {
 public:
  explicit ExternalProcessAdapter(std::string command);
  ~ExternalProcessAdapter() override;

  const ToolIdentity& identity() override;
  ToolOutput run(const Instance& instance) override;
  std::vector<ToolOutput> run_many(const DataUniverse& universe,
                                   const std::vector<std::size_t>& indices,
                                   int parallelism) override;
  void close() override;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

// Persistent tool-output cache, one JSONL file per tool digest. An entry is
// valid only while the instance's payload digest matches.
class OutputCache {
 public:
  OutputCache(std::filesystem::path directory, const ToolIdentity& tool);

  std::optional<ToolOutput> lookup(const Instance& instance) const;
  void store(const Instance& instance, const ToolOutput& output);
  void flush();

 private:
  struct Entry {
    std::string payload_digest;
    ToolOutput output;
  };
  std::filesystem::path file_;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> pending_lines_;
};

struct RunStats {
  std::size_t invocations = 0;
  std::size_t cache_hits = 0;
};

// Evaluates the tool on a slice, cache-aware. With verify_cached set, a
// deterministic 1% sample of cache hits is re-invoked and compared; any
// mismatch fails the batch, since a nondeterministic tool violates the
// adapter contract.
std::vector<ToolOutput> run_tool(ToolAdapter& tool, const InstanceSet& instances,
                                 OutputCache* cache = nullptr, int parallelism = 1,
                                 bool verify_cached = false, RunStats* stats = nullptr);

}  // namespace sliceaudit

#endif  // SLICEAUDIT_ADAPTERS_HPP_
