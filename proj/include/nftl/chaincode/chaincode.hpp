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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nftl/chaincode/records.hpp"
#include "nftl/common/error.hpp"
#include "nftl/ledger/types.hpp"
#include "nftl/ledger/world_state.hpp"
#include "nftl/membership/registry.hpp"

namespace nftl::chaincode {

// Operation names are part of the wire format.
namespace op {
inline constexpr std::string_view kInitiateAuctionEnvironment = "initiate_auction_environment";
inline constexpr std::string_view kCreateCommodity = "create_commodity";
inline constexpr std::string_view kCreateCommodityListing = "create_commodity_listing";
inline constexpr std::string_view kMakeBid = "make_bid";
inline constexpr std::string_view kCloseBidding = "close_bidding";
inline constexpr std::string_view kTransferAssets = "transfer_assets";
inline constexpr std::string_view kAddRenovation = "add_renovation";
inline constexpr std::string_view kGetProvenance = "get_provenance";
inline constexpr std::string_view kCloseEnvironment = "close_environment";
}  // namespace op

inline constexpr std::string_view kTransferred = "TRANSFERRED";
inline constexpr std::string_view kNoChange = "NO_CHANGE";
inline constexpr std::string_view kGenesisMarker = "GENESIS";

bool is_known_operation(std::string_view operation);
/// Read-only operations are answered by a peer and never ordered.
bool is_query_operation(std::string_view operation);

struct Invocation {
  std::string caller;
  std::string tx_id;
  std::string operation;
  Value args = Value::object();
};

/// Outcome of simulating one invocation. On error both sets are empty.
struct Execution {
  Result<Value> result = Value::object();
  std::vector<ledger::ReadItem> read_set;
  std::vector<ledger::WriteItem> write_set;

  bool ok() const { return result.ok(); }
};

/// Simulates a mutating operation against a snapshot. A pure function of
/// (invocation, snapshot, registry): no side effects, identical output for
/// identical input. Fresh entity ids are derived from the txId.
Execution execute(const Invocation& invocation, const ledger::StateView& snapshot,
                  const membership::Registry& registry);

/// Committed-state access for queries, which may also need commit positions.
class QueryView {
 public:
  virtual ~QueryView() = default;
  virtual const ledger::StateView& state() const = 0;
  virtual std::optional<ledger::Version> tx_version(std::string_view tx_id) const = 0;
};

/// Answers a read-only operation.
Result<Value> query(std::string_view operation, const Value& args, const QueryView& view);

/// Entity id minted by the transaction `tx_id`.
std::string derive_entity_id(std::string_view prefix, std::string_view tx_id);

/// The primary id in an operation result (auctionId, commodityId, ...).
std::optional<std::string> primary_id(const Value& result);

}  // namespace nftl::chaincode
