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
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "nftl/common/canonical.hpp"
#include "nftl/common/error.hpp"

namespace nftl::membership {

enum class Role { Member, Auctioneer };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view text);

struct Identity {
  std::string identity_id;
  std::string display_name;
  Role role = Role::Member;
  std::string key_ref;
  std::uint64_t registered_at_seq = 0;

  Value to_record() const;
};

struct Signature {
  std::string signer_id;
  std::string bytes;  // lower-case hex

  Value to_record() const;
  static Signature from_record(const Value& record);
  bool operator==(const Signature&) const = default;
};

/// Pluggable sign/verify primitive. Key material is opaque to callers.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual std::string_view name() const = 0;
  virtual std::string derive_key(std::string_view master_seed, std::string_view signer_id) const = 0;
  virtual std::string key_ref(std::string_view key) const = 0;
  virtual std::string sign(std::string_view key, std::string_view payload) const = 0;
  virtual bool verify(std::string_view key, std::string_view payload,
                      std::string_view signature) const = 0;
};

/// Keyed-hash stand-in: HMAC-SHA-256 under a key derived from the registry
/// seed and the signer id. Deterministic per identity.
std::unique_ptr<SignatureScheme> make_hmac_scheme();

/// Platform-wide participant registry and key custodian.
///
/// Participants (members and auctioneers) carry a Role. Infrastructure nodes
/// (peers, orderer) also hold signing keys but have no Role and can never
/// satisfy require_role or be used as a chaincode caller.
///
/// Writes are serialized; reads and sign/verify may run concurrently.
class Registry {
 public:
  explicit Registry(std::string master_seed,
                    std::unique_ptr<SignatureScheme> scheme = make_hmac_scheme());

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  Result<Identity> register_identity(std::string_view display_name, Role role);
  Status register_node(std::string_view node_id);

  Result<Signature> sign_payload(std::string_view signer, std::string_view payload) const;
  bool verify_signature(std::string_view signer, std::string_view payload,
                        const Signature& sig) const;

  Status require_role(std::string_view caller, Role required) const;

  std::optional<Identity> find(std::string_view identity_id) const;
  std::optional<Identity> find_by_name(std::string_view display_name) const;
  bool is_node(std::string_view node_id) const;
  std::vector<Identity> identities() const;
  std::size_t size() const;

  /// Hex of the signing key, handed to a participant's own client so it can
  /// sign requests. Empty for unknown signers.
  std::optional<std::string> export_key_hex(std::string_view signer) const;

  /// Full registry including the seed; round-trips through load().
  Value to_record() const;
  static Result<std::unique_ptr<Registry>> load(const Value& record);

 private:
  std::optional<std::string> key_for(std::string_view signer) const;

  std::string master_seed_;
  std::unique_ptr<SignatureScheme> scheme_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, Identity, std::less<>> identities_;
  std::vector<std::string> order_;
  std::map<std::string, std::string, std::less<>> node_keys_;
  std::map<std::string, std::string, std::less<>> participant_keys_;
};

}  // namespace nftl::membership
