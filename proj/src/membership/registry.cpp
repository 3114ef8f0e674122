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

#include "nftl/membership/registry.hpp"

#include <mutex>
#include <stdexcept>

#include "nftl/common/digest.hpp"

namespace nftl::membership {

std::string_view to_string(Role role) {
  return role == Role::Auctioneer ? "AUCTIONEER" : "MEMBER";
}

std::optional<Role> role_from_string(std::string_view text) {
  if (text == "MEMBER") return Role::Member;
  if (text == "AUCTIONEER") return Role::Auctioneer;
  return std::nullopt;
}

Value Identity::to_record() const {
  return Value{{"identityId", identity_id},
               {"displayName", display_name},
               {"role", std::string(to_string(role))},
               {"keyRef", key_ref},
               {"registeredAtSeq", registered_at_seq}};
}

Value Signature::to_record() const { return Value{{"signerId", signer_id}, {"bytes", bytes}}; }

Signature Signature::from_record(const Value& record) {
  return Signature{field_string(record, "signerId"), field_string(record, "bytes")};
}

namespace {

class HmacScheme final : public SignatureScheme {
 public:
  std::string_view name() const override { return "hmac-sha256"; }

  std::string derive_key(std::string_view master_seed, std::string_view signer_id) const override {
    auto d = hmac_sha256(master_seed, "signing-key/" + std::string(signer_id));
    return std::string(d.begin(), d.end());
  }

  std::string key_ref(std::string_view key) const override {
    return "hmac-sha256:" + to_hex(sha256(key)).substr(0, 16);
  }

  std::string sign(std::string_view key, std::string_view payload) const override {
    return to_hex(hmac_sha256(key, payload));
  }

  bool verify(std::string_view key, std::string_view payload,
              std::string_view signature) const override {
    return constant_time_equal(sign(key, payload), signature);
  }
};

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::unique_ptr<SignatureScheme> make_hmac_scheme() { return std::make_unique<HmacScheme>(); }

Registry::Registry(std::string master_seed, std::unique_ptr<SignatureScheme> scheme)
    : master_seed_(std::move(master_seed)), scheme_(std::move(scheme)) {
  if (!scheme_) throw std::invalid_argument("Registry requires a signature scheme");
}

Result<Identity> Registry::register_identity(std::string_view display_name, Role role) {
  auto name = trim(display_name);
  if (name.empty()) return make_error(Errc::EMPTY_NAME, "display name is empty");

  std::unique_lock lock(mutex_);
  Identity identity;
  identity.display_name = name;
  identity.role = role;
  identity.registered_at_seq = order_.size() + 1;

  // Ids are derived, not random, so a replayed registration sequence yields
  // the same ids. The salt loop only matters on a prefix collision.
  for (std::uint64_t salt = 0;; ++salt) {
    auto material = master_seed_ + "/identity/" + std::to_string(identity.registered_at_seq) +
                    "/" + std::to_string(salt) + "/" + name;
    auto candidate = "id-" + to_hex(sha256(material)).substr(0, 16);
    if (!identities_.contains(candidate) && !node_keys_.contains(candidate)) {
      identity.identity_id = std::move(candidate);
      break;
    }
  }

  auto key = scheme_->derive_key(master_seed_, identity.identity_id);
  identity.key_ref = scheme_->key_ref(key);
  participant_keys_.emplace(identity.identity_id, std::move(key));
  order_.push_back(identity.identity_id);
  identities_.emplace(identity.identity_id, identity);
  return identity;
}

Status Registry::register_node(std::string_view node_id) {
  if (trim(node_id).empty()) return make_error(Errc::EMPTY_NAME, "node id is empty");
  std::unique_lock lock(mutex_);
  if (identities_.contains(node_id)) {
    return make_error(Errc::INVALID_CONFIG, "node id collides with a participant id");
  }
  if (!node_keys_.contains(node_id)) {
    node_keys_.emplace(std::string(node_id), scheme_->derive_key(master_seed_, node_id));
  }
  return ok_status();
}

std::optional<std::string> Registry::key_for(std::string_view signer) const {
  if (auto it = participant_keys_.find(signer); it != participant_keys_.end()) return it->second;
  if (auto it = node_keys_.find(signer); it != node_keys_.end()) return it->second;
  return std::nullopt;
}

Result<Signature> Registry::sign_payload(std::string_view signer, std::string_view payload) const {
  std::shared_lock lock(mutex_);
  auto key = key_for(signer);
  if (!key) return make_error(Errc::UNKNOWN_IDENTITY, std::string(signer));
  return Signature{std::string(signer), scheme_->sign(*key, payload)};
}

bool Registry::verify_signature(std::string_view signer, std::string_view payload,
                                const Signature& sig) const {
  if (sig.signer_id != signer) return false;
  std::shared_lock lock(mutex_);
  auto key = key_for(signer);
  if (!key) return false;
  return scheme_->verify(*key, payload, sig.bytes);
}

Status Registry::require_role(std::string_view caller, Role required) const {
  std::shared_lock lock(mutex_);
  auto it = identities_.find(caller);
  if (it == identities_.end()) {
    return make_error(Errc::UNKNOWN_IDENTITY, "caller=" + std::string(caller));
  }
  if (it->second.role != required) {
    return make_error(Errc::ROLE_MISMATCH, "caller=" + std::string(caller) +
                                               " required=" + std::string(to_string(required)));
  }
  return ok_status();
}

std::optional<Identity> Registry::find(std::string_view identity_id) const {
  std::shared_lock lock(mutex_);
  auto it = identities_.find(identity_id);
  if (it == identities_.end()) return std::nullopt;
  return it->second;
}

std::optional<Identity> Registry::find_by_name(std::string_view display_name) const {
  std::shared_lock lock(mutex_);
  for (const auto& id : order_) {
    const auto& identity = identities_.at(id);
    if (identity.display_name == display_name) return identity;
  }
  return std::nullopt;
}

bool Registry::is_node(std::string_view node_id) const {
  std::shared_lock lock(mutex_);
  return node_keys_.contains(node_id);
}

std::vector<Identity> Registry::identities() const {
  std::shared_lock lock(mutex_);
  std::vector<Identity> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(identities_.at(id));
  return out;
}

std::size_t Registry::size() const {
  std::shared_lock lock(mutex_);
  return order_.size();
}

std::optional<std::string> Registry::export_key_hex(std::string_view signer) const {
  std::shared_lock lock(mutex_);
  auto key = key_for(signer);
  if (!key) return std::nullopt;
  return to_hex(std::span(reinterpret_cast<const std::uint8_t*>(key->data()), key->size()));
}

Value Registry::to_record() const {
  std::shared_lock lock(mutex_);
  Value identities = Value::array();
  for (const auto& id : order_) identities.push_back(identities_.at(id).to_record());
  Value nodes = Value::array();
  for (const auto& [id, key] : node_keys_) nodes.push_back(id);
  return Value{{"scheme", std::string(scheme_->name())},
               {"seed", master_seed_},
               {"identities", std::move(identities)},
               {"nodes", std::move(nodes)}};
}

Result<std::unique_ptr<Registry>> Registry::load(const Value& record) {
  try {
    auto scheme = make_hmac_scheme();
    if (field_string(record, "scheme") != scheme->name()) {
      return make_error(Errc::INVALID_CONFIG, "unsupported signature scheme");
    }
    auto registry = std::make_unique<Registry>(field_string(record, "seed"), std::move(scheme));
    std::uint64_t expected_seq = 1;
    for (const auto& entry : field_array(record, "identities")) {
      auto role = role_from_string(field_string(entry, "role"));
      if (!role) return make_error(Errc::INVALID_CONFIG, "unknown role in registry");
      auto identity = registry->register_identity(field_string(entry, "displayName"), *role);
      if (!identity) return identity.error();
      if (identity->identity_id != field_string(entry, "identityId") ||
          identity->key_ref != field_string(entry, "keyRef") ||
          static_cast<std::int64_t>(expected_seq) != field_int(entry, "registeredAtSeq")) {
        return make_error(Errc::INVALID_CONFIG,
                          "registry entry " + std::to_string(expected_seq) + " does not replay");
      }
      ++expected_seq;
    }
    for (const auto& node : field_array(record, "nodes")) {
      if (!node.is_string()) return make_error(Errc::INVALID_CONFIG, "node id must be a string");
      auto st = registry->register_node(node.get<std::string>());
      if (!st) return st.error();
    }
    return registry;
  } catch (const std::invalid_argument& e) {
    return make_error(Errc::INVALID_CONFIG, e.what());
  }
}

}  // namespace nftl::membership
