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

#include "nftl/common/canonical.hpp"

#include <stdexcept>

namespace nftl {

bool is_canonical_safe(const Value& value) {
  switch (value.type()) {
    case Value::value_t::null:
    case Value::value_t::boolean:
    case Value::value_t::string:
    case Value::value_t::number_integer:
    case Value::value_t::number_unsigned:
      return true;
    case Value::value_t::array:
      for (const auto& item : value) {
        if (!is_canonical_safe(item)) return false;
      }
      return true;
    case Value::value_t::object:
      for (const auto& [key, item] : value.items()) {
        if (!is_canonical_safe(item)) return false;
      }
      return true;
    case Value::value_t::number_float:
    case Value::value_t::binary:
    case Value::value_t::discarded:
      return false;
  }
  return false;
}

Result<std::string> canonical_serialize(const Value& value) {
  if (!is_canonical_safe(value)) {
    return make_error(Errc::UNSUPPORTED_VALUE,
                      "record contains a non-integer number, binary or discarded value");
  }
  try {
    // strict error handler throws on invalid UTF-8 in strings and keys
    return value.dump(-1, ' ', false, Value::error_handler_t::strict);
  } catch (const Value::type_error& e) {
    return make_error(Errc::UNSUPPORTED_VALUE, e.what());
  }
}

std::string canonical(const Value& value) {
  auto bytes = canonical_serialize(value);
  if (!bytes) throw std::invalid_argument(bytes.error().describe());
  return std::move(bytes).value();
}

Result<Value> parse_record(std::string_view text) {
  Value parsed;
  try {
    parsed = Value::parse(text.begin(), text.end());
  } catch (const Value::parse_error& e) {
    return make_error(Errc::UNSUPPORTED_VALUE, e.what());
  }
  if (!is_canonical_safe(parsed)) {
    return make_error(Errc::UNSUPPORTED_VALUE, "record contains a non-integer number");
  }
  return parsed;
}

Result<Value> parse_canonical(std::string_view text) {
  auto parsed = parse_record(text);
  if (!parsed) return parsed;
  auto rendered = canonical_serialize(*parsed);
  if (!rendered) return rendered.error();
  if (*rendered != text) {
    return make_error(Errc::UNSUPPORTED_VALUE, "input is not in canonical form");
  }
  return parsed;
}

namespace {

const Value& lookup(const Value& obj, std::string_view key) {
  if (!obj.is_object()) throw std::invalid_argument("expected a record");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw std::invalid_argument("missing field '" + std::string(key) + "'");
  }
  return *it;
}

[[noreturn]] void kind_mismatch(std::string_view key, std::string_view kind) {
  throw std::invalid_argument("field '" + std::string(key) + "' must be " + std::string(kind));
}

}  // namespace

const Value& field(const Value& obj, std::string_view key) { return lookup(obj, key); }

const std::string& field_string(const Value& obj, std::string_view key) {
  const auto& v = lookup(obj, key);
  if (!v.is_string()) kind_mismatch(key, "a string");
  return v.get_ref<const std::string&>();
}

std::int64_t field_int(const Value& obj, std::string_view key) {
  const auto& v = lookup(obj, key);
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) kind_mismatch(key, "a 64-bit integer");
    return static_cast<std::int64_t>(u);
  }
  if (!v.is_number_integer()) kind_mismatch(key, "an integer");
  return v.get<std::int64_t>();
}

bool field_bool(const Value& obj, std::string_view key) {
  const auto& v = lookup(obj, key);
  if (!v.is_boolean()) kind_mismatch(key, "a boolean");
  return v.get<bool>();
}

const Value& field_array(const Value& obj, std::string_view key) {
  const auto& v = lookup(obj, key);
  if (!v.is_array()) kind_mismatch(key, "a list");
  return v;
}

}  // namespace nftl
