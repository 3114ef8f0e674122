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

#include "nftl/ledger/ledger.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace nftl::ledger {

namespace fs = std::filesystem;

std::string_view to_string(VerifyReport::Problem problem) {
  switch (problem) {
    case VerifyReport::Problem::None: return "NONE";
    case VerifyReport::Problem::Structural: return "STRUCTURAL";
    case VerifyReport::Problem::Linkage: return "LINKAGE";
    case VerifyReport::Problem::DataHash: return "DATA_HASH";
    case VerifyReport::Problem::Flags: return "VALIDITY_FLAGS";
    case VerifyReport::Problem::StateMismatch: return "STATE_MISMATCH";
  }
  return "UNKNOWN";
}

Value VerifyReport::to_record() const {
  Value out{{"ok", ok}, {"blocksChecked", blocks_checked}};
  if (!ok) {
    out["problem"] = std::string(to_string(problem));
    out["detail"] = detail;
    out["firstBadBlock"] = first_bad_block ? Value(*first_bad_block) : Value(nullptr);
  }
  return out;
}

struct Ledger::Replay {
  std::vector<std::shared_ptr<const Block>> blocks;
  WorldState state;
  std::map<std::string, std::vector<HistoryEntry>> history;
  std::unordered_map<std::string, TxLocation> tx_index;
  std::optional<std::uint64_t> checkpoint;
  std::optional<WorldState> state_at_checkpoint;

  bool seen(std::string_view tx_id) const { return tx_index.contains(std::string(tx_id)); }

  // Block flags must already be assigned.
  void apply(std::shared_ptr<const Block> block) {
    for (std::size_t i = 0; i < block->envelopes.size(); ++i) {
      const auto& env = block->envelopes[i];
      auto flag = block->validity_flags[i];
      Version version{block->number, i};
      if (flag != ValidityFlag::BadSignature) tx_index.try_emplace(env.tx_id, TxLocation{version, flag});
      if (flag != ValidityFlag::Valid) continue;
      for (const auto& w : env.write_set) {
        state.apply(w, version);
        history[w.key.render()].push_back(HistoryEntry{version, w.value, env.tx_id});
      }
    }
    if (checkpoint && *checkpoint == block->number) state_at_checkpoint = state;
    blocks.push_back(std::move(block));
  }
};

namespace {

VerifyReport failure(VerifyReport::Problem problem, std::uint64_t block, std::string detail,
                     std::uint64_t checked) {
  VerifyReport r;
  r.ok = false;
  r.problem = problem;
  r.first_bad_block = block;
  r.detail = std::move(detail);
  r.blocks_checked = checked;
  return r;
}

VerifyReport replay_content(std::string_view content, const membership::Registry& registry,
                            const EndorsementPolicy& policy, Ledger::Replay& out) {
  std::uint64_t index = 0;
  std::size_t pos = 0;
  if (content.empty()) {
    return failure(VerifyReport::Problem::Structural, 0, "log is empty: no genesis block", 0);
  }
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) {
      return failure(VerifyReport::Problem::Structural, index,
                     "truncated record: final line has no terminator", index);
    }
    auto line = content.substr(pos, nl - pos);
    pos = nl + 1;

    auto parsed = parse_canonical(line);
    if (!parsed) {
      return failure(VerifyReport::Problem::Structural, index, parsed.error().message, index);
    }
    Block block;
    try {
      block = Block::from_record(*parsed);
    } catch (const std::exception& e) {
      return failure(VerifyReport::Problem::Structural, index, e.what(), index);
    }

    if (block.number != index) {
      return failure(VerifyReport::Problem::Linkage, index,
                     "block number " + std::to_string(block.number) + " at position " +
                         std::to_string(index),
                     index);
    }
    if (index == 0) {
      if (block.prev_hash != Digest{} || !block.envelopes.empty()) {
        return failure(VerifyReport::Problem::Linkage, 0, "genesis block is not canonical", 0);
      }
    } else if (block.prev_hash != compute_block_hash(*out.blocks.back())) {
      return failure(VerifyReport::Problem::Linkage, index,
                     "prevHash does not match hash of block " + std::to_string(index - 1), index);
    }
    if (block.data_hash != compute_data_hash(block.envelopes)) {
      return failure(VerifyReport::Problem::DataHash, index, "dataHash does not match envelopes",
                     index);
    }
    if (block.validity_flags.size() != block.envelopes.size()) {
      return failure(VerifyReport::Problem::Flags, index,
                     "validity flag count differs from envelope count", index);
    }
    auto expected = validate_envelopes(out.state, block.number, block.envelopes, policy, registry,
                                       [&](std::string_view tx) { return out.seen(tx); });
    if (expected != block.validity_flags) {
      return failure(VerifyReport::Problem::Flags, index,
                     "recorded validity flags differ from re-validation", index);
    }
    out.apply(std::make_shared<const Block>(std::move(block)));
    ++index;
  }
  VerifyReport ok;
  ok.blocks_checked = index;
  return ok;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_all(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    auto n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "write to block log");
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

void write_file_atomically(const fs::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

VerifyReport verify_log_content(std::string_view content, const membership::Registry& registry,
                                const EndorsementPolicy& policy, const WorldState* live) {
  Ledger::Replay replay;
  auto report = replay_content(content, registry, policy, replay);
  if (report.ok && live != nullptr && !(replay.state == *live)) {
    report = failure(VerifyReport::Problem::StateMismatch, replay.blocks.size() - 1,
                     "replayed world state differs from live state", report.blocks_checked);
  }
  return report;
}

VerifyReport verify_log_file(const fs::path& log_path, const membership::Registry& registry,
                             const EndorsementPolicy& policy, const WorldState* live) {
  std::string content;
  try {
    content = read_file(log_path);
  } catch (const std::exception& e) {
    return failure(VerifyReport::Problem::Structural, 0, e.what(), 0);
  }
  return verify_log_content(content, registry, policy, live);
}

Ledger::Ledger(LedgerOptions options, const membership::Registry& registry,
               EndorsementPolicy policy)
    : options_(std::move(options)), registry_(registry), policy_(std::move(policy)) {}

Ledger::~Ledger() {
  if (log_fd_ >= 0) ::close(log_fd_);
}

Result<std::unique_ptr<Ledger>> Ledger::open(LedgerOptions options,
                                             const membership::Registry& registry,
                                             EndorsementPolicy policy) {
  if (auto st = policy.check(); !st) return st.error();
  std::unique_ptr<Ledger> ledger(new Ledger(std::move(options), registry, std::move(policy)));
  Replay replay;

  try {
    if (ledger->options_.data_dir) {
      const auto& dir = *ledger->options_.data_dir;
      fs::create_directories(dir);
      auto log_path = dir / kBlockLogFile;
      auto snapshot_path = dir / kSnapshotFile;

      std::optional<Value> snapshot;
      if (fs::exists(snapshot_path)) {
        auto parsed = parse_record(read_file(snapshot_path));
        if (parsed && parsed->is_object() && parsed->contains("lastBlock") &&
            (*parsed)["lastBlock"].is_number_unsigned()) {
          snapshot = std::move(parsed).value();
          replay.checkpoint = static_cast<std::uint64_t>(field_int(*snapshot, "lastBlock"));
        }
      }

      std::string content = fs::exists(log_path) ? read_file(log_path) : std::string{};
      if (!content.empty() && content.back() != '\n') {
        auto keep = content.rfind('\n');
        keep = keep == std::string::npos ? 0 : keep + 1;
        // A crash leaves a strict prefix of a record. A whole record followed
        // by a stray byte means the terminator itself was altered.
        auto tail = std::string_view(content).substr(keep);
        if (parse_canonical(tail.substr(0, tail.size() - 1))) {
          auto n = static_cast<std::uint64_t>(std::count(content.begin(), content.end(), '\n'));
          return make_error(Errc::CORRUPT_LOG, "block " + std::to_string(n) +
                                                   ": STRUCTURAL: record terminator altered");
        }
        // Torn tail from an interrupted commit: never acknowledged, drop it.
        content.resize(keep);
        fs::resize_file(log_path, content.size());
      }

      ledger->log_fd_ = ::open(log_path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
      if (ledger->log_fd_ < 0) {
        return make_error(Errc::IO_ERROR, "cannot open " + log_path.string() + ": " +
                                              std::strerror(errno));
      }

      if (content.empty()) {
        auto genesis = make_genesis_block();
        ledger->write_log_line(genesis.serialize());
        replay.apply(std::make_shared<const Block>(std::move(genesis)));
      } else {
        auto report = replay_content(content, registry, ledger->policy_, replay);
        if (!report.ok) {
          return make_error(Errc::CORRUPT_LOG,
                            "block " + std::to_string(report.first_bad_block.value_or(0)) + ": " +
                                std::string(to_string(report.problem)) + ": " + report.detail);
        }
      }

      // The log is authoritative; a snapshot that disagrees with the replay
      // at its own block is rewritten.
      bool snapshot_good = false;
      if (snapshot && replay.state_at_checkpoint) {
        try {
          snapshot_good =
              WorldState::from_record(field(*snapshot, "state")) == *replay.state_at_checkpoint;
        } catch (const std::invalid_argument&) {
          snapshot_good = false;
        }
      }
      if (!snapshot_good && ledger->options_.snapshot_interval > 0) {
        ledger->write_snapshot(replay.blocks.back()->number, replay.state);
      }
    } else {
      replay.apply(std::make_shared<const Block>(make_genesis_block()));
    }
  } catch (const std::exception& e) {
    return make_error(Errc::IO_ERROR, e.what());
  }

  ledger->blocks_ = std::move(replay.blocks);
  ledger->state_ = std::make_shared<const WorldState>(std::move(replay.state));
  ledger->history_ = std::move(replay.history);
  ledger->tx_index_ = std::move(replay.tx_index);
  return ledger;
}

void Ledger::write_log_line(const std::string& line) {
  if (fault_hook_) fault_hook_(CommitStage::BeforeLogWrite);
  if (log_fd_ < 0) return;
  std::string record = line + '\n';
  auto half = record.size() / 2;
  try {
    write_all(log_fd_, std::string_view(record).substr(0, half));
    if (fault_hook_) fault_hook_(CommitStage::MidLogWrite);
    write_all(log_fd_, std::string_view(record).substr(half));
    ::fdatasync(log_fd_);
  } catch (...) {
    // Bytes of this block may be on disk. Only reopening (which drops the
    // torn tail) restores a consistent ledger.
    poisoned_ = true;
    throw;
  }
}

void Ledger::write_snapshot(std::uint64_t block_number, const WorldState& state) const {
  if (!options_.data_dir) return;
  Value record{{"lastBlock", block_number}, {"state", state.to_record()}};
  write_file_atomically(*options_.data_dir / kSnapshotFile, canonical(record));
}

Result<std::shared_ptr<const Block>> Ledger::append_block(Block block) {
  std::lock_guard commit(commit_mutex_);
  if (poisoned_) throw std::runtime_error("ledger is poisoned by an interrupted commit; reopen it");

  const auto& tip_block = *blocks_.back();
  if (block.number != tip_block.number + 1) {
    return make_error(Errc::BAD_LINKAGE, "expected block " + std::to_string(tip_block.number + 1) +
                                             ", got " + std::to_string(block.number));
  }
  if (block.prev_hash != compute_block_hash(tip_block)) {
    return make_error(Errc::BAD_LINKAGE,
                      "prevHash of block " + std::to_string(block.number) + " does not match tip");
  }
  if (block.data_hash != compute_data_hash(block.envelopes)) {
    return make_error(Errc::BAD_LINKAGE,
                      "dataHash of block " + std::to_string(block.number) + " does not match");
  }

  block.validity_flags = validate_envelopes(*state_, block.number, block.envelopes, policy_,
                                            registry_, [this](std::string_view tx) {
                                              return tx_index_.contains(std::string(tx));
                                            });

  // Stage everything off to the side; nothing visible changes until the log
  // line is durable.
  Replay staged;
  staged.state = *state_;
  auto committed = std::make_shared<const Block>(std::move(block));
  staged.apply(committed);

  write_log_line(committed->serialize());

  {
    std::unique_lock lock(mutex_);
    blocks_.push_back(committed);
    state_ = std::make_shared<const WorldState>(std::move(staged.state));
    for (auto& [key, entries] : staged.history) {
      auto& dst = history_[key];
      dst.insert(dst.end(), entries.begin(), entries.end());
    }
    for (auto& [tx, loc] : staged.tx_index) tx_index_.try_emplace(tx, loc);
  }

  if (options_.data_dir && options_.snapshot_interval > 0 &&
      committed->number % options_.snapshot_interval == 0) {
    write_snapshot(committed->number, *state_);
  }
  return committed;
}

std::optional<VersionedValue> Ledger::get_state(const StateKey& key) const {
  std::shared_lock lock(mutex_);
  return state_->get(key);
}

std::vector<HistoryEntry> Ledger::get_history(const StateKey& key) const {
  std::shared_lock lock(mutex_);
  auto it = history_.find(key.render());
  if (it == history_.end()) return {};
  return it->second;
}

std::shared_ptr<const WorldState> Ledger::snapshot() const {
  std::shared_lock lock(mutex_);
  return state_;
}

std::shared_ptr<const Block> Ledger::block(std::uint64_t number) const {
  std::shared_lock lock(mutex_);
  if (number >= blocks_.size()) return nullptr;
  return blocks_[number];
}

std::shared_ptr<const Block> Ledger::tip() const {
  std::shared_lock lock(mutex_);
  return blocks_.back();
}

Digest Ledger::tip_hash() const { return compute_block_hash(*tip()); }

std::uint64_t Ledger::height() const {
  std::shared_lock lock(mutex_);
  return blocks_.back()->number;
}

std::optional<TxLocation> Ledger::find_tx(std::string_view tx_id) const {
  std::shared_lock lock(mutex_);
  auto it = tx_index_.find(std::string(tx_id));
  if (it == tx_index_.end()) return std::nullopt;
  return it->second;
}

VerifyReport Ledger::verify_chain() const {
  // Hold off writers so the log is read at a block boundary.
  std::lock_guard commit(commit_mutex_);
  auto live = snapshot();
  if (options_.data_dir) {
    return verify_log_file(*options_.data_dir / kBlockLogFile, registry_, policy_, live.get());
  }
  std::string content;
  {
    std::shared_lock lock(mutex_);
    for (const auto& b : blocks_) {
      content += b->serialize();
      content += '\n';
    }
  }
  return verify_log_content(content, registry_, policy_, live.get());
}

void Ledger::set_commit_fault_hook(CommitFaultHook hook) {
  std::lock_guard commit(commit_mutex_);
  fault_hook_ = std::move(hook);
}

}  // namespace nftl::ledger
