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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nftl/common/canonical.hpp"
#include "nftl/common/digest.hpp"
#include "nftl/membership/registry.hpp"

namespace nftl::ledger {

using membership::Signature;

enum class Namespace { Commodity, Listing, Offer, Renovation, Environment, Identity };

std::string_view to_string(Namespace ns);
std::optional<Namespace> namespace_from_string(std::string_view text);

/// World-state key. Namespace names contain no '/', which keeps the
/// rendered "namespace/entityId" form injective.
struct StateKey {
  Namespace ns = Namespace::Commodity;
  std::string entity_id;

  std::string render() const;
  static std::optional<StateKey> parse(std::string_view rendered);

  auto operator<=>(const StateKey&) const = default;
};

/// Commit position of a write: (block number, index within block).
struct Version {
  std::uint64_t block = 0;
  std::uint64_t tx = 0;

  auto operator<=>(const Version&) const = default;

  Value to_record() const;
  static Version from_record(const Value& record);
};

struct VersionedValue {
  std::string value;
  Version version;

  bool operator==(const VersionedValue&) const = default;
};

/// A key read during execution and the version it had. No version means the
/// key was absent, which is itself checked at validation.
struct ReadItem {
  StateKey key;
  std::optional<Version> version;

  bool operator==(const ReadItem&) const = default;
};

/// No value means delete.
struct WriteItem {
  StateKey key;
  std::optional<std::string> value;

  bool operator==(const WriteItem&) const = default;
};

enum class ValidityFlag { Valid, MvccConflict, BadEndorsement, DuplicateTxId, BadSignature };

std::string_view to_string(ValidityFlag flag);
std::optional<ValidityFlag> flag_from_string(std::string_view text);

struct TransactionEnvelope {
  std::string tx_id;
  std::string creator;
  std::string operation;
  Value args = Value::object();
  Value result = Value::object();
  std::vector<ReadItem> read_set;
  std::vector<WriteItem> write_set;
  std::vector<Signature> endorsements;
  Signature client_signature;

  /// Bytes every endorser signs: the proposal identity and its simulated
  /// effects.
  std::string endorsement_payload() const;
  /// Bytes the client signs: every field except client_signature.
  std::string body_bytes() const;

  Value to_record() const;
  static TransactionEnvelope from_record(const Value& record);
};

Value read_set_record(const std::vector<ReadItem>& reads);
Value write_set_record(const std::vector<WriteItem>& writes);

/// Canonical endorsement payload from its parts; used both when endorsing
/// and when validating.
std::string endorsement_payload(std::string_view tx_id, std::string_view creator,
                                std::string_view operation, const Value& args,
                                const Value& result, const std::vector<ReadItem>& reads,
                                const std::vector<WriteItem>& writes);

struct Block {
  std::uint64_t number = 0;
  Digest prev_hash{};
  Digest data_hash{};
  std::vector<TransactionEnvelope> envelopes;
  std::vector<ValidityFlag> validity_flags;

  Value to_record() const;
  static Block from_record(const Value& record);
  std::string serialize() const { return canonical(to_record()); }
};

Digest compute_data_hash(const std::vector<TransactionEnvelope>& envelopes);

/// Digest over the canonical header (number, prevHash, dataHash). Validity
/// flags are not covered.
Digest compute_block_hash(const Block& block);

/// Block 0: no envelopes, all-zero previous hash.
Block make_genesis_block();

/// A block ready to be committed on top of `prev`.
Block make_block(std::uint64_t number, const Digest& prev_hash,
                 std::vector<TransactionEnvelope> envelopes);

/// Transaction id from creator and client nonce.
std::string make_tx_id(std::string_view creator, std::string_view nonce);

struct EndorsementPolicy {
  std::size_t required_count = 1;
  std::vector<std::string> endorsers;

  Status check() const;
  Value to_record() const;
  static EndorsementPolicy from_record(const Value& record);
};

}  // namespace nftl::ledger
