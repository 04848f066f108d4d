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

#include "sliceaudit/jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sliceaudit {

Json parse_json(std::string_view text, const std::string& where) {
  Json value = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) {
    fail(Errc::parse, where + ": malformed JSON");
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(Errc::config, "cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    fail(Errc::config, "read failure on " + path.string());
  }
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    fail(Errc::config, "cannot write " + path.string());
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) {
    fail(Errc::config, "write failure on " + path.string());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  return parse_json(read_text_file(path), path.string());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x00000100000001b3ULL;
  }
  return hash;
}

std::string digest_of(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string digest_of_json(const Json& value) { return digest_of(value.dump()); }

std::string format_score(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_score(std::string_view text) {
  std::string owned(text);
  char* end = nullptr;
  double value = std::strtod(owned.c_str(), &end);
  if (end == owned.c_str() || end != owned.c_str() + owned.size()) {
    fail(Errc::protocol, "malformed decimal score '" + owned + "'");
  }
  return value;
}

const Json& require_field(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object()) {
    fail(Errc::parse, where + ": expected an object");
  }
  auto it = object.find(key);
  if (it == object.end()) {
    fail(Errc::parse, where + ": missing field '" + key + "'");
  }
  return *it;
}

std::string require_string(const Json& object, const char* key, const std::string& where) {
  const Json& value = require_field(object, key, where);
  if (!value.is_string()) {
    fail(Errc::parse, where + ": field '" + key + "' must be a string");
  }
  return value.get<std::string>();
}

double require_number(const Json& object, const char* key, const std::string& where) {
  const Json& value = require_field(object, key, where);
  if (!value.is_number()) {
    fail(Errc::parse, where + ": field '" + key + "' must be a number");
  }
  return value.get<double>();
}

std::int64_t require_integer(const Json& object, const char* key, const std::string& where) {
  const Json& value = require_field(object, key, where);
  if (!value.is_number_integer()) {
    fail(Errc::parse, where + ": field '" + key + "' must be an integer");
  }
  return value.get<std::int64_t>();
}

}  // namespace sliceaudit
