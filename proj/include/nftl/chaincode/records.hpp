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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nftl/common/canonical.hpp"

namespace nftl::chaincode {

/// Prices and costs are integers in minor currency units.
using Amount = std::int64_t;

enum class ListingState { ForSale, Sold, ReserveNotMet };

std::string_view to_string(ListingState state);
std::optional<ListingState> listing_state_from_string(std::string_view text);

inline bool is_terminal(ListingState s) { return s != ListingState::ForSale; }

/// Stored ownership step. The commit version is not known while the
/// transaction executes, so the record keeps the txId and provenance queries
/// resolve it to a version.
struct OwnershipRecord {
  std::string owner;
  std::string tx_id;
  std::optional<std::string> via_listing_id;  // nullopt: GENESIS

  Value to_record() const;
  static OwnershipRecord from_record(const Value& record);
};

struct Commodity {
  std::string commodity_id;
  std::string description;
  Amount ideal_price = 0;
  std::string owner;
  std::vector<OwnershipRecord> ownership_history;
  std::vector<std::string> renovation_ids;
  bool track_renovations = false;
  /// Listing that currently holds the commodity: set while FOR_SALE and
  /// while SOLD but not yet transferred.
  std::optional<std::string> active_listing_id;

  Value to_record() const;
  static Commodity from_record(const Value& record);
};

struct Renovation {
  std::string renovation_id;
  std::string commodity_id;
  std::string date;  // YYYY-MM-DD
  Amount cost = 0;
  std::string renovating_owner;
  std::string description;
  std::string tx_id;

  Value to_record() const;
  static Renovation from_record(const Value& record);
};

struct MaxBid {
  std::string offer_id;
  Amount bid_price = 0;
};

struct CommodityListing {
  std::string listing_id;
  std::string exchange_name;
  std::string commodity_id;
  std::string seller_id;
  Amount reserve_price = 0;
  std::vector<std::string> offer_ids;
  std::optional<MaxBid> max_bid;
  ListingState state = ListingState::ForSale;
  std::optional<std::string> done_buyer;
  std::string auction_id;
  bool transferred = false;

  Value to_record() const;
  static CommodityListing from_record(const Value& record);
};

struct Offer {
  std::string offer_id;
  std::string listing_id;
  std::string member;
  Amount bid_price = 0;
  std::int64_t seq = 0;

  Value to_record() const;
  static Offer from_record(const Value& record);
};

struct AuctionEnvironment {
  std::string auction_id;
  std::vector<std::string> active_buyers;
  std::vector<std::string> active_sellers;
  std::string active_auctioneer;
  bool open = true;
  std::vector<std::string> listing_ids;

  Value to_record() const;
  static AuctionEnvironment from_record(const Value& record);
};

}  // namespace nftl::chaincode
