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
#include <vector>

#include "nftl/common/error.hpp"
#include "nftl/ledger/types.hpp"

namespace nftl::pipeline {

struct OrdererConfig {
  std::size_t max_batch_size = 10;
  std::uint64_t batch_timeout_ticks = 1;

  Status check() const;
};

/// Turns a stream of envelopes into a stream of numbered, hash-linked blocks.
class OrderingService {
 public:
  virtual ~OrderingService() = default;
  /// Accepts an envelope at logical time `now`; returns any block cut
  /// because the batch filled up.
  virtual std::vector<ledger::Block> submit(ledger::TransactionEnvelope envelope,
                                            std::uint64_t now) = 0;
  /// Advances logical time; returns a block cut by the batch timeout.
  virtual std::vector<ledger::Block> on_tick(std::uint64_t now) = 0;
  virtual std::size_t pending() const = 0;
};

/// Single deterministic orderer. FIFO batches; a block is cut at
/// max_batch_size envelopes or batch_timeout_ticks after the first pending
/// envelope arrived, whichever comes first.
class SoloOrderer final : public OrderingService {
 public:
  /// Continues a chain whose last block is `tip_number` with hash `tip_hash`.
  SoloOrderer(OrdererConfig config, std::uint64_t tip_number, const Digest& tip_hash);

  std::vector<ledger::Block> submit(ledger::TransactionEnvelope envelope,
                                    std::uint64_t now) override;
  std::vector<ledger::Block> on_tick(std::uint64_t now) override;
  std::size_t pending() const override { return pending_.size(); }

 private:
  ledger::Block cut();

  OrdererConfig config_;
  std::uint64_t next_number_;
  Digest prev_hash_;
  std::vector<ledger::TransactionEnvelope> pending_;
  std::uint64_t first_pending_tick_ = 0;
};

}  // namespace nftl::pipeline
