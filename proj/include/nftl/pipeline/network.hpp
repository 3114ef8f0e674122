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
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nftl/chaincode/chaincode.hpp"
#include "nftl/ledger/ledger.hpp"
#include "nftl/pipeline/orderer.hpp"
#include "nftl/pipeline/proposal.hpp"

namespace nftl::pipeline {

struct NetworkConfig {
  std::size_t peers = 1;
  /// m of the m-of-n policy.
  std::size_t required_endorsements = 1;
  /// n: the first n peers endorse. 0 means every peer.
  std::size_t endorsers = 0;
  OrdererConfig orderer;
  /// Gossip latency from the anchor to the other peers.
  std::uint64_t gossip_latency_ticks = 1;

  Status check() const;
  std::vector<std::string> peer_ids() const;
  ledger::EndorsementPolicy policy() const;

  Value to_record() const;
  static NetworkConfig from_record(const Value& record);
};

/// Registers the network's peers as signing nodes if not yet known.
Status register_nodes(membership::Registry& registry, const NetworkConfig& config);

enum class FaultKind { Delay, Reorder, DropEndorsement };

std::string_view to_string(FaultKind kind);
std::optional<FaultKind> fault_from_string(std::string_view text);

/// A fault active on one peer for ticks [start, start + duration).
///  - Delay: messages to the peer wait until the window ends.
///  - Reorder: messages received in the window are delivered in reverse
///    order when it ends.
///  - DropEndorsement: the peer's endorsements are discarded.
struct Fault {
  FaultKind kind = FaultKind::Delay;
  std::string target;
  std::uint64_t start = 0;
  std::uint64_t duration = 1;
};

/// Append-only event trace: one canonical record per event.
class Trace {
 public:
  void emit(std::uint64_t tick, std::string_view kind, Value fields);
  const std::vector<Value>& records() const { return records_; }
  /// One canonical record per line, each terminated by '\n'.
  std::string render() const;
  void set_enabled(bool enabled) { enabled_ = enabled; }

 private:
  std::vector<Value> records_;
  bool enabled_ = true;
};

/// Read-only view of one peer's committed ledger for queries.
class LedgerQueryView final : public chaincode::QueryView {
 public:
  explicit LedgerQueryView(const ledger::Ledger& ledger)
      : ledger_(ledger), state_(ledger.snapshot()) {}

  const ledger::StateView& state() const override { return *state_; }
  std::optional<ledger::Version> tx_version(std::string_view tx_id) const override;

 private:
  const ledger::Ledger& ledger_;
  std::shared_ptr<const ledger::WorldState> state_;
};

/// Deterministic in-process simulation of the execute-order-validate flow.
///
/// Peers are named peer0..peerN-1; peer0 is the anchor. The first n peers
/// endorse. Blocks go from the orderer to the anchor, which commits and
/// then gossips them to the other peers. Nodes interact only through
/// mailboxes; time is a logical tick advanced by step(). Every random
/// choice comes from one generator seeded at construction.
///
/// Not thread-safe; callers serialize access.
class Network {
 public:
  struct Options {
    NetworkConfig config;
    std::uint64_t seed = 0;
    /// Persists the anchor peer's ledger here when set.
    std::optional<std::filesystem::path> anchor_data_dir;
    std::uint64_t snapshot_interval = 10;
    bool trace = true;
  };

  /// Called after the anchor commits a block.
  using CommitListener = std::function<void(const ledger::Block&)>;

  static Result<std::unique_ptr<Network>> create(Options options,
                                                 const membership::Registry& registry);
  ~Network();

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Verifies the client signature, collects endorsements from the policy's
  /// endorsers and forwards an agreed envelope to the orderer.
  SubmitResult submit(const Proposal& proposal);

  /// Answers a read-only operation from the anchor's committed state.
  Result<Value> query(std::string_view operation, const Value& args) const;

  void inject(Fault fault);

  /// Runs the orderer timeout and delivers every message due at the current
  /// tick, then advances the clock by one.
  void step();
  /// Steps until nothing is pending anywhere. Returns false if that did not
  /// happen within `max_ticks`.
  bool settle(std::uint64_t max_ticks = 10'000);
  bool quiescent() const;

  std::uint64_t now() const { return now_; }
  std::uint64_t next_random();

  const ledger::Ledger& anchor() const;
  const ledger::Ledger& peer_ledger(std::size_t index) const;
  std::size_t peer_count() const;
  const std::vector<std::string>& peer_ids() const { return peer_ids_; }
  const ledger::EndorsementPolicy& policy() const { return policy_; }
  const NetworkConfig& config() const { return options_.config; }

  /// True when every endorser has committed up to the anchor's height.
  bool endorsers_current() const;

  /// True when every peer holds a byte-identical chain and equal state.
  bool converged() const;

  Trace& trace() { return trace_; }
  const Trace& trace() const { return trace_; }
  void set_commit_listener(CommitListener listener) { listener_ = std::move(listener); }

  struct Peer;

 private:
  Network(Options options, const membership::Registry& registry);

  Endorsement endorse(Peer& peer, const Proposal& proposal);
  void dispatch(std::vector<ledger::Block> blocks);
  void deliver(Peer& peer);
  void receive(Peer& peer, const std::shared_ptr<const ledger::Block>& block);
  bool commit(Peer& peer, const std::shared_ptr<const ledger::Block>& block);
  void backfill(Peer& peer, std::uint64_t up_to);
  void gossip(const std::shared_ptr<const ledger::Block>& block);

  Options options_;
  const membership::Registry& registry_;
  ledger::EndorsementPolicy policy_;
  std::vector<std::string> peer_ids_;
  std::vector<std::unique_ptr<Peer>> peers_;
  std::unique_ptr<OrderingService> orderer_;
  std::mt19937_64 rng_;
  std::uint64_t now_ = 0;
  std::vector<Fault> faults_;
  Trace trace_;
  CommitListener listener_;
};

}  // namespace nftl::pipeline
