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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nftl/ledger/types.hpp"

namespace nftl::ledger {

/// Read access to a committed state snapshot.
class StateView {
 public:
  virtual ~StateView() = default;
  virtual std::optional<VersionedValue> get(const StateKey& key) const = 0;
  virtual std::vector<std::pair<StateKey, VersionedValue>> scan(Namespace ns) const = 0;
};

/// Key-versioned materialized state.
class WorldState final : public StateView {
 public:
  std::optional<VersionedValue> get(const StateKey& key) const override;
  std::vector<std::pair<StateKey, VersionedValue>> scan(Namespace ns) const override;

  void apply(const WriteItem& write, Version version);
  void apply_all(const std::vector<WriteItem>& writes, Version version);

  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, VersionedValue>& entries() const { return entries_; }

  /// Canonical {renderedKey: value} map. Versions are not included, so two
  /// states reached through different block layouts compare equal when their
  /// contents match.
  std::string content_bytes() const;

  /// Canonical record including versions (snapshot file form).
  Value to_record() const;
  static WorldState from_record(const Value& record);

  bool operator==(const WorldState& other) const { return entries_ == other.entries_; }

 private:
  std::map<std::string, VersionedValue> entries_;
};

struct HistoryEntry {
  Version version;
  std::optional<std::string> value;  // nullopt: tombstone
  std::string tx_id;

  bool operator==(const HistoryEntry&) const = default;
};

/// Commit-time validity of each envelope, in order. An envelope is VALID iff
/// its client signature verifies, its endorsements satisfy the policy and all
/// verify, its txId is new, and every read version still matches the
/// snapshot as updated by earlier VALID envelopes of the same block. The
/// first failing category wins, in that order.
std::vector<ValidityFlag> validate_envelopes(
    const StateView& snapshot, std::uint64_t block_number,
    const std::vector<TransactionEnvelope>& envelopes, const EndorsementPolicy& policy,
    const membership::Registry& registry,
    const std::function<bool(std::string_view)>& tx_seen_in_chain);

}  // namespace nftl::ledger
