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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "nftl/ledger/types.hpp"
#include "nftl/ledger/world_state.hpp"

namespace nftl::ledger {

inline constexpr std::string_view kBlockLogFile = "blocks.log";
inline constexpr std::string_view kSnapshotFile = "state.snapshot";

struct LedgerOptions {
  /// When unset the ledger lives in memory only.
  std::optional<std::filesystem::path> data_dir;
  /// Blocks between world-state snapshots; 0 disables snapshots.
  std::uint64_t snapshot_interval = 10;
};

struct TxLocation {
  Version position;
  ValidityFlag flag = ValidityFlag::Valid;
};

struct VerifyReport {
  enum class Problem { None, Structural, Linkage, DataHash, Flags, StateMismatch };

  bool ok = true;
  Problem problem = Problem::None;
  std::optional<std::uint64_t> first_bad_block;
  std::string detail;
  std::uint64_t blocks_checked = 0;

  Value to_record() const;
};

std::string_view to_string(VerifyReport::Problem problem);

/// Test hook called at fixed points of a commit; throwing from it simulates a
/// crash at that point.
enum class CommitStage { BeforeLogWrite, MidLogWrite };
using CommitFaultHook = std::function<void(CommitStage)>;

/// Append-only hash-chained block log plus the world state, history and
/// txId index derived from it.
///
/// One writer at a time; readers never observe a partially applied block.
/// With a data directory every committed block is appended to blocks.log as
/// one canonical line, and a world-state snapshot is rewritten periodically.
class Ledger {
 public:
  /// Opens (or creates, with a genesis block) a ledger. An existing log is
  /// fully re-verified and replayed; a torn final line left by a crash is
  /// dropped first. Any other corruption is refused with CORRUPT_LOG naming
  /// the block.
  static Result<std::unique_ptr<Ledger>> open(LedgerOptions options,
                                              const membership::Registry& registry,
                                              EndorsementPolicy policy);

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;
  ~Ledger();

  /// Validates and commits the next block. Incoming validity flags are
  /// ignored and recomputed. BAD_LINKAGE on number, prevHash or dataHash
  /// mismatch.
  Result<std::shared_ptr<const Block>> append_block(Block block);

  std::optional<VersionedValue> get_state(const StateKey& key) const;
  std::vector<HistoryEntry> get_history(const StateKey& key) const;
  std::shared_ptr<const WorldState> snapshot() const;

  std::shared_ptr<const Block> block(std::uint64_t number) const;
  std::shared_ptr<const Block> tip() const;
  Digest tip_hash() const;
  std::uint64_t height() const;

  std::optional<TxLocation> find_tx(std::string_view tx_id) const;

  /// Re-derives everything from the persisted log (or the in-memory blocks
  /// for an ephemeral ledger) and compares with the live state.
  VerifyReport verify_chain() const;

  const EndorsementPolicy& policy() const { return policy_; }
  const std::optional<std::filesystem::path>& data_dir() const { return options_.data_dir; }

  void set_commit_fault_hook(CommitFaultHook hook);

  struct Replay;

 private:
  Ledger(LedgerOptions options, const membership::Registry& registry, EndorsementPolicy policy);

  void write_log_line(const std::string& line);
  void write_snapshot(std::uint64_t block_number, const WorldState& state) const;

  LedgerOptions options_;
  const membership::Registry& registry_;
  EndorsementPolicy policy_;

  mutable std::mutex commit_mutex_;
  mutable std::shared_mutex mutex_;
  std::vector<std::shared_ptr<const Block>> blocks_;
  std::shared_ptr<const WorldState> state_;
  std::map<std::string, std::vector<HistoryEntry>> history_;
  std::unordered_map<std::string, TxLocation> tx_index_;

  int log_fd_ = -1;
  bool poisoned_ = false;
  CommitFaultHook fault_hook_;
};

/// Verifies a persisted block log byte-for-byte: canonical form of every
/// line, linkage, data hashes, recomputed validity flags, and (when given)
/// equality of the replayed state with `live`.
VerifyReport verify_log_file(const std::filesystem::path& log_path,
                             const membership::Registry& registry,
                             const EndorsementPolicy& policy,
                             const WorldState* live = nullptr);

/// Same check over log content already in memory.
VerifyReport verify_log_content(std::string_view content, const membership::Registry& registry,
                                const EndorsementPolicy& policy,
                                const WorldState* live = nullptr);

}  // namespace nftl::ledger
