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

#include "nftl/ledger/world_state.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace nftl::ledger {

std::optional<VersionedValue> WorldState::get(const StateKey& key) const {
  auto it = entries_.find(key.render());
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<StateKey, VersionedValue>> WorldState::scan(Namespace ns) const {
  std::string prefix(to_string(ns));
  prefix += '/';
  std::vector<std::pair<StateKey, VersionedValue>> out;
  for (auto it = entries_.lower_bound(prefix);
       it != entries_.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it) {
    out.emplace_back(*StateKey::parse(it->first), it->second);
  }
  return out;
}

void WorldState::apply(const WriteItem& write, Version version) {
  auto rendered = write.key.render();
  if (write.value) {
    entries_[rendered] = VersionedValue{*write.value, version};
  } else {
    entries_.erase(rendered);
  }
}

void WorldState::apply_all(const std::vector<WriteItem>& writes, Version version) {
  for (const auto& w : writes) apply(w, version);
}

std::string WorldState::content_bytes() const {
  Value out = Value::object();
  for (const auto& [key, entry] : entries_) out[key] = entry.value;
  return canonical(out);
}

Value WorldState::to_record() const {
  Value out = Value::object();
  for (const auto& [key, entry] : entries_) {
    out[key] = Value{{"value", entry.value}, {"version", entry.version.to_record()}};
  }
  return out;
}

WorldState WorldState::from_record(const Value& record) {
  if (!record.is_object()) throw std::invalid_argument("state snapshot must be a record");
  WorldState state;
  for (const auto& [key, entry] : record.items()) {
    auto parsed = StateKey::parse(key);
    if (!parsed) throw std::invalid_argument("malformed state key '" + key + "'");
    state.entries_[key] =
        VersionedValue{field_string(entry, "value"), Version::from_record(field(entry, "version"))};
  }
  return state;
}

namespace {

bool endorsements_satisfy(const TransactionEnvelope& env, const EndorsementPolicy& policy,
                          const membership::Registry& registry) {
  const auto payload = env.endorsement_payload();
  std::set<std::string, std::less<>> counted;
  for (const auto& sig : env.endorsements) {
    bool in_set = std::find(policy.endorsers.begin(), policy.endorsers.end(), sig.signer_id) !=
                  policy.endorsers.end();
    if (!in_set) return false;
    if (!registry.verify_signature(sig.signer_id, payload, sig)) return false;
    counted.insert(sig.signer_id);
  }
  return counted.size() >= policy.required_count;
}

}  // namespace

std::vector<ValidityFlag> validate_envelopes(
    const StateView& snapshot, std::uint64_t block_number,
    const std::vector<TransactionEnvelope>& envelopes, const EndorsementPolicy& policy,
    const membership::Registry& registry,
    const std::function<bool(std::string_view)>& tx_seen_in_chain) {
  std::vector<ValidityFlag> flags;
  flags.reserve(envelopes.size());

  // Versions written by earlier VALID envelopes of this block. nullopt marks
  // a delete.
  std::map<std::string, std::optional<Version>> block_writes;
  std::unordered_set<std::string> block_tx_ids;

  for (std::size_t i = 0; i < envelopes.size(); ++i) {
    const auto& env = envelopes[i];
    auto flag = ValidityFlag::Valid;

    if (!registry.verify_signature(env.creator, env.body_bytes(), env.client_signature)) {
      flag = ValidityFlag::BadSignature;
    } else if (!endorsements_satisfy(env, policy, registry)) {
      flag = ValidityFlag::BadEndorsement;
    } else if (block_tx_ids.contains(env.tx_id) || tx_seen_in_chain(env.tx_id)) {
      flag = ValidityFlag::DuplicateTxId;
    } else {
      for (const auto& read : env.read_set) {
        std::optional<Version> current;
        if (auto it = block_writes.find(read.key.render()); it != block_writes.end()) {
          current = it->second;
        } else if (auto committed = snapshot.get(read.key)) {
          current = committed->version;
        }
        if (current != read.version) {
          flag = ValidityFlag::MvccConflict;
          break;
        }
      }
    }

    // A txId is consumed by any envelope its creator actually signed, valid
    // or not; forged envelopes cannot burn someone else's txId.
    if (flag != ValidityFlag::BadSignature) block_tx_ids.insert(env.tx_id);
    if (flag == ValidityFlag::Valid) {
      for (const auto& w : env.write_set) {
        block_writes[w.key.render()] =
            w.value ? std::optional<Version>(Version{block_number, i}) : std::nullopt;
      }
    }
    flags.push_back(flag);
  }
  return flags;
}

}  // namespace nftl::ledger
