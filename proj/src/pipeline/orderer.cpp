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

#include "nftl/pipeline/orderer.hpp"

namespace nftl::pipeline {

Status OrdererConfig::check() const {
  if (max_batch_size < 1) return make_error(Errc::INVALID_CONFIG, "maxBatchSize must be >= 1");
  if (batch_timeout_ticks < 1) {
    return make_error(Errc::INVALID_CONFIG, "batchTimeoutTicks must be >= 1");
  }
  return ok_status();
}

SoloOrderer::SoloOrderer(OrdererConfig config, std::uint64_t tip_number, const Digest& tip_hash)
    : config_(config), next_number_(tip_number + 1), prev_hash_(tip_hash) {}

std::vector<ledger::Block> SoloOrderer::submit(ledger::TransactionEnvelope envelope,
                                               std::uint64_t now) {
  if (pending_.empty()) first_pending_tick_ = now;
  pending_.push_back(std::move(envelope));
  std::vector<ledger::Block> out;
  if (pending_.size() >= config_.max_batch_size) out.push_back(cut());
  return out;
}

std::vector<ledger::Block> SoloOrderer::on_tick(std::uint64_t now) {
  std::vector<ledger::Block> out;
  if (!pending_.empty() && now - first_pending_tick_ >= config_.batch_timeout_ticks) {
    out.push_back(cut());
  }
  return out;
}

ledger::Block SoloOrderer::cut() {
  auto block = ledger::make_block(next_number_++, prev_hash_, std::move(pending_));
  pending_.clear();
  prev_hash_ = ledger::compute_block_hash(block);
  return block;
}

}  // namespace nftl::pipeline
