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

#include "sliceaudit/adapters.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "sliceaudit/subprocess.hpp"

namespace sliceaudit {

Json ToolIdentity::to_json() const {
  Json j;
  j["name"] = name;
  j["version"] = version;
  j["digest"] = digest;
  j["payload_kind"] = payload_kind;
  return j;
}

ToolIdentity ToolIdentity::from_json(const Json& value, const std::string& where) {
  ToolIdentity identity;
  identity.name = require_string(value, "name", where);
  identity.version = require_string(value, "version", where);
  identity.digest = require_string(value, "digest", where);
  identity.payload_kind = require_string(value, "payload_kind", where);
  return identity;
}

std::string payload_digest(const Json& payload) { return digest_of_json(payload); }

std::vector<ToolOutput> ToolAdapter::run_many(const DataUniverse& universe,
                                              const std::vector<std::size_t>& indices,
                                              int parallelism) {
  std::vector<ToolOutput> outputs(indices.size());
  if (indices.empty()) return outputs;
  const int workers =
      std::clamp<int>(parallelism, 1, static_cast<int>(indices.size()));
  if (workers == 1) {
    for (std::size_t k = 0; k < indices.size(); ++k) {
      outputs[k] = run(universe.instances()[indices[k]]);
    }
    return outputs;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t first_error_position = indices.size();
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= indices.size()) return;
      try {
        outputs[k] = run(universe.instances()[indices[k]]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (k < first_error_position) {
          first_error_position = k;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return outputs;
}

std::string encode_request(const Instance& instance, std::uint64_t seq) {
  Json line;
  line["seq"] = seq;
  line["id"] = instance.id;
  line["payload"] = instance.payload;
  std::string text = line.dump();
  if (text.find('\n') != std::string::npos) {
    fail(Errc::serialization, "request for '" + instance.id + "' serialized with a newline");
  }
  return text;
}

ProtocolResponse decode_response(const std::string& line) {
  Json value = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded() || !value.is_object()) {
    fail(Errc::protocol, "malformed response line: " + line.substr(0, 200));
  }
  ProtocolResponse response;
  const Json& seq = require_field(value, "seq", "response");
  if (!seq.is_number_integer()) {
    fail(Errc::protocol, "response 'seq' must be an integer");
  }
  response.seq = seq.get<std::uint64_t>();
  if (value.contains("error")) {
    response.error = value["error"].is_string() ? value["error"].get<std::string>()
                                                : value["error"].dump();
    if (response.error.empty()) response.error = "tool reported an unspecified error";
    return response;
  }
  const Json& scores = require_field(value, "scores", "response");
  if (!scores.is_object() || scores.empty()) {
    fail(Errc::protocol, "response 'scores' must be a non-empty object");
  }
  ToolOutput output;
  for (auto it = scores.begin(); it != scores.end(); ++it) {
    double score = 0.0;
    if (it.value().is_string()) {
      score = parse_score(it.value().get<std::string>());
    } else if (it.value().is_number()) {
      score = it.value().get<double>();
    } else {
      fail(Errc::protocol, "score '" + it.key() + "' must be decimal text");
    }
    if (!std::isfinite(score)) {
      fail(Errc::non_finite_score, "score '" + it.key() + "' is not finite");
    }
    output.scores.emplace(it.key(), score);
  }
  response.output = std::move(output);
  return response;
}

std::string encode_response(std::uint64_t seq, const ToolOutput& output) {
  Json scores;
  for (const auto& [name, value] : output.scores) {
    scores[name] = format_score(value);
  }
  Json line;
  line["seq"] = seq;
  line["scores"] = std::move(scores);
  return line.dump();
}

std::string encode_error_response(std::uint64_t seq, const std::string& message) {
  Json line;
  line["seq"] = seq;
  line["error"] = message;
  return line.dump();
}

std::string encode_identity(const ToolIdentity& identity) {
  Json line;
  line["identity"] = identity.to_json();
  return line.dump();
}

// ---------------------------------------------------------------------------
// ExternalProcessAdapter

class ExternalProcessAdapter::Impl {
 public:
  explicit Impl(std::string command) : command_(std::move(command)) {}

  const ToolIdentity& identity() {
    ensure_spawned();
    return identity_;
  }

  std::vector<ToolOutput> evaluate(const std::vector<const Instance*>& instances) {
    ensure_spawned();
    std::vector<ToolOutput> outputs(instances.size());
    if (instances.empty()) return outputs;

    std::map<std::uint64_t, std::size_t> seq_to_position;
    const std::uint64_t first_seq = next_seq_;
    for (std::size_t k = 0; k < instances.size(); ++k) {
      seq_to_position.emplace(next_seq_++, k);
    }

    // Feed requests from a separate thread so a tool that answers slowly
    // cannot deadlock against a full pipe.
    std::string writer_error;
    std::thread writer([&] {
      try {
        for (std::size_t k = 0; k < instances.size(); ++k) {
          process_->write_line(encode_request(*instances[k], first_seq + k));
        }
      } catch (const std::exception& e) {
        writer_error = e.what();
      }
    });

    std::set<std::uint64_t> outstanding;
    for (const auto& [seq, position] : seq_to_position) outstanding.insert(seq);

    std::string failure;
    Errc failure_code = Errc::adapter;
    std::string line;
    while (!outstanding.empty()) {
      if (!process_->read_line(line)) {
        failure = "tool exited before responding to " +
                  std::to_string(outstanding.size()) + " request(s); first missing instance '" +
                  instances[seq_to_position.at(*outstanding.begin())]->id + "'";
        break;
      }
      try {
        ProtocolResponse response = decode_response(line);
        auto it = seq_to_position.find(response.seq);
        if (it == seq_to_position.end()) {
          fail(Errc::protocol, "response with unknown seq " + std::to_string(response.seq));
        }
        if (!outstanding.erase(response.seq)) {
          fail(Errc::protocol, "duplicate response for seq " + std::to_string(response.seq));
        }
        if (!response.output) {
          fail(Errc::adapter,
               "tool failed on instance '" + instances[it->second]->id + "': " + response.error);
        }
        outputs[it->second] = std::move(*response.output);
      } catch (const Error& e) {
        failure = e.what();
        failure_code = e.code();
        break;
      }
    }

    writer.join();
    if (failure.empty() && !writer_error.empty()) {
      failure = writer_error;
    }
    if (!failure.empty()) {
      throw Error(failure_code, failure + " (command: " + command_ + ")");
    }
    return outputs;
  }

  void close() {
    if (!process_) return;
    process_->close_stdin();
    std::string line;
    while (process_->read_line(line)) {
      // drain stray output so the child can exit
    }
    const int status = process_->wait();
    process_.reset();
    if (status != 0) {
      fail(Errc::adapter,
           "tool exited with status " + std::to_string(status) + " (command: " + command_ + ")");
    }
  }

 private:
  void ensure_spawned() {
    if (process_) return;
    process_ = std::make_unique<Subprocess>(command_);
    std::string line;
    if (!process_->read_line(line)) {
      const int status = process_->wait();
      process_.reset();
      fail(Errc::adapter, "tool produced no identity line and exited with status " +
                              std::to_string(status) + " (command: " + command_ + ")");
    }
    Json value = Json::parse(line, nullptr, false);
    if (value.is_discarded() || !value.contains("identity")) {
      fail(Errc::protocol, "expected an identity line, got: " + line.substr(0, 200));
    }
    identity_ = ToolIdentity::from_json(value["identity"], "identity");
  }

  std::string command_;
  std::unique_ptr<Subprocess> process_;
  ToolIdentity identity_;
  std::uint64_t next_seq_ = 1;
};

ExternalProcessAdapter::ExternalProcessAdapter(std::string command)
    : impl_(std::make_unique<Impl>(std::move(command))) {}

ExternalProcessAdapter::~ExternalProcessAdapter() {
  try {
    impl_->close();
  } catch (...) {
    // destructor must not throw; close() explicitly to observe failures
  }
}

const ToolIdentity& ExternalProcessAdapter::identity() { return impl_->identity(); }

ToolOutput ExternalProcessAdapter::run(const Instance& instance) {
  return impl_->evaluate({&instance}).front();
}

std::vector<ToolOutput> ExternalProcessAdapter::run_many(const DataUniverse& universe,
                                                         const std::vector<std::size_t>& indices,
                                                         int /*parallelism*/) {
  // One process, one request stream: throughput comes from pipelining, not
  // concurrent writers.
  std::vector<const Instance*> instances;
  instances.reserve(indices.size());
  for (std::size_t index : indices) {
    instances.push_back(&universe.instances()[index]);
  }
  return impl_->evaluate(instances);
}

void ExternalProcessAdapter::close() { impl_->close(); }

// ---------------------------------------------------------------------------
// OutputCache

namespace {

std::string sanitize_for_filename(std::string name) {
  for (char& c : name) {
    if (c == ':' || c == '/' || c == '\\') c = '-';
  }
  return name;
}

}  // namespace

OutputCache::OutputCache(std::filesystem::path directory, const ToolIdentity& tool) {
  std::filesystem::create_directories(directory);
  file_ = directory / (sanitize_for_filename(tool.digest) + ".jsonl");
  std::ifstream in(file_, std::ios::binary);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json record = Json::parse(line, nullptr, false);
    if (record.is_discarded()) continue;  // a torn tail line is not fatal
    Entry entry;
    std::string id = require_string(record, "id", "cache");
    entry.payload_digest = require_string(record, "payload_digest", "cache");
    const Json& scores = require_field(record, "scores", "cache");
    for (auto it = scores.begin(); it != scores.end(); ++it) {
      entry.output.scores.emplace(it.key(), parse_score(it.value().get<std::string>()));
    }
    entries_[id] = std::move(entry);
  }
}

std::optional<ToolOutput> OutputCache::lookup(const Instance& instance) const {
  auto it = entries_.find(instance.id);
  if (it == entries_.end()) return std::nullopt;
  if (it->second.payload_digest != payload_digest(instance.payload)) {
    return std::nullopt;  // payload changed since caching
  }
  return it->second.output;
}

void OutputCache::store(const Instance& instance, const ToolOutput& output) {
  Entry entry{payload_digest(instance.payload), output};
  Json scores;
  for (const auto& [name, value] : output.scores) {
    scores[name] = format_score(value);
  }
  Json record;
  record["id"] = instance.id;
  record["payload_digest"] = entry.payload_digest;
  record["scores"] = std::move(scores);
  pending_lines_.push_back(record.dump());
  entries_[instance.id] = std::move(entry);
}

void OutputCache::flush() {
  if (pending_lines_.empty()) return;
  std::ofstream out(file_, std::ios::binary | std::ios::app);
  if (!out) {
    fail(Errc::config, "cannot append to cache file " + file_.string());
  }
  for (const std::string& line : pending_lines_) {
    out << line << '\n';
  }
  out.flush();
  pending_lines_.clear();
}

// ---------------------------------------------------------------------------

std::vector<ToolOutput> run_tool(ToolAdapter& tool, const InstanceSet& instances,
                                 OutputCache* cache, int parallelism, bool verify_cached,
                                 RunStats* stats) {
  const ToolIdentity& identity = tool.identity();
  const std::string& expected_kind = instances.universe->schema().payload_kind;
  if (identity.payload_kind != expected_kind) {
    fail(Errc::payload_kind_mismatch, "tool accepts '" + identity.payload_kind +
                                          "' but the universe carries '" + expected_kind + "'");
  }

  std::vector<ToolOutput> outputs(instances.size());
  std::vector<std::size_t> miss_positions;
  std::vector<std::size_t> miss_indices;
  std::vector<std::size_t> hit_positions;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const Instance& instance = instances.at(k);
    if (cache != nullptr) {
      if (auto hit = cache->lookup(instance)) {
        outputs[k] = std::move(*hit);
        hit_positions.push_back(k);
        continue;
      }
    }
    miss_positions.push_back(k);
    miss_indices.push_back(instances.indices[k]);
  }

  std::vector<ToolOutput> fresh = tool.run_many(*instances.universe, miss_indices, parallelism);
  for (std::size_t m = 0; m < miss_positions.size(); ++m) {
    outputs[miss_positions[m]] = std::move(fresh[m]);
  }

  if (verify_cached && !hit_positions.empty()) {
    // Deterministic ~1% sample of cache hits, never empty.
    std::vector<std::size_t> sample;
    for (std::size_t k : hit_positions) {
      if (fnv1a64(instances.at(k).id) % 100 == 0) sample.push_back(k);
    }
    if (sample.empty()) {
      std::size_t best = hit_positions.front();
      for (std::size_t k : hit_positions) {
        if (fnv1a64(instances.at(k).id) < fnv1a64(instances.at(best).id)) best = k;
      }
      sample.push_back(best);
    }
    for (std::size_t k : sample) {
      const Instance& instance = instances.at(k);
      ToolOutput fresh_output = tool.run(instance);
      if (!(fresh_output == outputs[k])) {
        fail(Errc::adapter, "nondeterministic tool: cached and fresh outputs differ for "
                            "instance '" + instance.id + "'");
      }
      if (stats != nullptr) ++stats->invocations;
    }
  }

  if (cache != nullptr) {
    for (std::size_t m = 0; m < miss_positions.size(); ++m) {
      cache->store(instances.at(miss_positions[m]), outputs[miss_positions[m]]);
    }
    cache->flush();
  }
  if (stats != nullptr) {
    stats->invocations += miss_positions.size();
    stats->cache_hits += hit_positions.size();
  }
  return outputs;
}

}  // namespace sliceaudit
