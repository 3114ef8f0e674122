// Copyright 2026 The nftl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "nftl/common/error.hpp"

namespace nftl {

/// Structured record. Objects keep their keys in a std::map, so iteration
/// order is byte-lexicographic and serialization order follows from it.
using Value = nlohmann::json;

/// Deterministic byte rendering of a record: sorted keys, no whitespace,
/// minimal decimal integers, UTF-8. Floating point, binary blobs and invalid
/// UTF-8 are rejected with UNSUPPORTED_VALUE.
Result<std::string> canonical_serialize(const Value& value);

/// Same as canonical_serialize but throws std::invalid_argument. For records
/// the caller built itself and knows to be canonical-safe.
std::string canonical(const Value& value);

/// Parses structured text and rejects anything canonical_serialize would
/// refuse. Does not require the input bytes to already be canonical.
Result<Value> parse_record(std::string_view text);

/// Parses and additionally requires that the input is byte-identical to the
/// canonical rendering of the parsed value.
Result<Value> parse_canonical(std::string_view text);

/// Checks that a record is built only from canonical-safe kinds.
bool is_canonical_safe(const Value& value);

// Typed field access for decoding records. All throw std::invalid_argument
// naming the field on a missing key or a kind mismatch.
const std::string& field_string(const Value& obj, std::string_view key);
std::int64_t field_int(const Value& obj, std::string_view key);
bool field_bool(const Value& obj, std::string_view key);
const Value& field_array(const Value& obj, std::string_view key);
const Value& field(const Value& obj, std::string_view key);

}  // namespace nftl
