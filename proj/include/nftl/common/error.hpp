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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace nftl {

// Wire-visible error codes. The spelling of each code is part of the
// external contract (HTTP bodies, traces, CLI output).
#define NFTL_ERROR_CODES(X)   \
  X(EMPTY_NAME)               \
  X(UNKNOWN_IDENTITY)         \
  X(ROLE_MISMATCH)            \
  X(UNSUPPORTED_VALUE)        \
  X(BAD_LINKAGE)              \
  X(CORRUPT_LOG)              \
  X(IO_ERROR)                 \
  X(EMPTY_BUYERS)             \
  X(EMPTY_SELLERS)            \
  X(NULL_AUCTIONEER)          \
  X(DUPLICATE_PARTICIPANT)    \
  X(NEGATIVE_PRICE)           \
  X(UNKNOWN_EXCHANGE)         \
  X(UNKNOWN_COMMODITY)        \
  X(UNKNOWN_AUCTION)          \
  X(NOT_OWNER)                \
  X(NOT_ACTIVE_SELLER)        \
  X(ALREADY_LISTED)           \
  X(ENV_CLOSED)               \
  X(NEGATIVE_RESERVE)         \
  X(UNKNOWN_LISTING)          \
  X(LISTING_NOT_OPEN)         \
  X(UNKNOWN_BUYER)            \
  X(NOT_ACTIVE_BUYER)         \
  X(SELF_BID)                 \
  X(BID_TOO_LOW)              \
  X(CALLER_MISMATCH)          \
  X(NOT_AUCTIONEER)           \
  X(ALREADY_CLOSED)           \
  X(RENOVATIONS_DISABLED)     \
  X(LISTED_COMMODITY_FROZEN)  \
  X(NEGATIVE_COST)            \
  X(OPEN_LISTINGS_REMAIN)     \
  X(BAD_ARGS)                 \
  X(UNKNOWN_OPERATION)        \
  X(BAD_SIGNATURE)            \
  X(ENDORSEMENT_SHORTFALL)    \
  X(CHAINCODE_ERROR)          \
  X(GAP_DETECTED)             \
  X(SCENARIO_PARSE_ERROR)     \
  X(INVALID_CONFIG)           \
  X(NOT_FOUND)                \
  X(MALFORMED_REQUEST)

enum class Errc {
#define NFTL_ENUM_ENTRY(name) name,
  NFTL_ERROR_CODES(NFTL_ENUM_ENTRY)
#undef NFTL_ENUM_ENTRY
};

std::string_view to_string(Errc code);
std::optional<Errc> errc_from_string(std::string_view text);

struct Error {
  Errc code;
  std::string message;

  std::string describe() const;
};

inline Error make_error(Errc code, std::string message = {}) {
  return Error{code, std::move(message)};
}

/// Value-or-error carrier for domain failures. Programming errors and I/O
/// faults that callers cannot act on are still reported with exceptions.
template <typename T>
class [[nodiscard]] Result {
 public:
  Result(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
  Result(Error error) : storage_(std::in_place_index<1>, std::move(error)) {}

  bool ok() const noexcept { return storage_.index() == 0; }
  explicit operator bool() const noexcept { return ok(); }

  T& value() & { return std::get<0>(storage_); }
  const T& value() const& { return std::get<0>(storage_); }
  T&& value() && { return std::get<0>(std::move(storage_)); }

  const Error& error() const { return std::get<1>(storage_); }

  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }
  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }

 private:
  std::variant<T, Error> storage_;
};

using Status = Result<std::monostate>;

inline Status ok_status() { return Status(std::monostate{}); }

}  // namespace nftl
