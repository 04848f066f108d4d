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

#ifndef SLICEAUDIT_JSONIO_HPP_
#define SLICEAUDIT_JSONIO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sliceaudit/error.hpp"

namespace sliceaudit {

// Json sorts object keys (std::map), which is what canonical serialization
// relies on. OrderedJson preserves insertion order for documents whose field
// layout is part of the file format (reports, manifests).
using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Parses text as JSON; `where` names the input in diagnostics.
Json parse_json(std::string_view text, const std::string& where);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
Json load_json_file(const std::filesystem::path& path);

// FNV-1a 64-bit over bytes. Digest strings render as "fnv64:<16 hex digits>".
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_of(std::string_view bytes);
std::string digest_of_json(const Json& value);

// Scores cross process boundaries as decimal text with 17 significant
// digits, which round-trips IEEE doubles exactly.
std::string format_score(double value);
double parse_score(std::string_view text);

// Field access helpers that turn missing/mistyped fields into ParseError
// with a useful path.
const Json& require_field(const Json& object, const char* key, const std::string& where);
std::string require_string(const Json& object, const char* key, const std::string& where);
double require_number(const Json& object, const char* key, const std::string& where);
std::int64_t require_integer(const Json& object, const char* key, const std::string& where);

}  // namespace sliceaudit

#endif  // SLICEAUDIT_JSONIO_HPP_
