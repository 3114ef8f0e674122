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

#include "nftl/chaincode/records.hpp"

#include <stdexcept>

namespace nftl::chaincode {

namespace {

Value optional_string(const std::optional<std::string>& s) {
  return s ? Value(*s) : Value(nullptr);
}

std::optional<std::string> read_optional_string(const Value& obj, std::string_view key) {
  const auto& v = field(obj, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw std::invalid_argument("field '" + std::string(key) + "' must be a string or null");
  return v.get<std::string>();
}

std::vector<std::string> read_strings(const Value& obj, std::string_view key) {
  std::vector<std::string> out;
  for (const auto& v : field_array(obj, key)) {
    if (!v.is_string()) throw std::invalid_argument("field '" + std::string(key) + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string_view to_string(ListingState state) {
  switch (state) {
    case ListingState::ForSale: return "FOR_SALE";
    case ListingState::Sold: return "SOLD";
    case ListingState::ReserveNotMet: return "RESERVE_NOT_MET";
  }
  return "FOR_SALE";
}

std::optional<ListingState> listing_state_from_string(std::string_view text) {
  if (text == "FOR_SALE") return ListingState::ForSale;
  if (text == "SOLD") return ListingState::Sold;
  if (text == "RESERVE_NOT_MET") return ListingState::ReserveNotMet;
  return std::nullopt;
}

Value OwnershipRecord::to_record() const {
  return Value{{"owner", owner}, {"txId", tx_id}, {"viaListingId", optional_string(via_listing_id)}};
}

OwnershipRecord OwnershipRecord::from_record(const Value& record) {
  return OwnershipRecord{field_string(record, "owner"), field_string(record, "txId"),
                         read_optional_string(record, "viaListingId")};
}

Value Commodity::to_record() const {
  Value history = Value::array();
  for (const auto& r : ownership_history) history.push_back(r.to_record());
  return Value{{"commodityId", commodity_id},
               {"description", description},
               {"idealPrice", ideal_price},
               {"owner", owner},
               {"ownershipHistory", std::move(history)},
               {"renovationIds", renovation_ids},
               {"trackRenovations", track_renovations},
               {"activeListingId", optional_string(active_listing_id)}};
}

Commodity Commodity::from_record(const Value& record) {
  Commodity c;
  c.commodity_id = field_string(record, "commodityId");
  c.description = field_string(record, "description");
  c.ideal_price = field_int(record, "idealPrice");
  c.owner = field_string(record, "owner");
  for (const auto& r : field_array(record, "ownershipHistory")) {
    c.ownership_history.push_back(OwnershipRecord::from_record(r));
  }
  c.renovation_ids = read_strings(record, "renovationIds");
  c.track_renovations = field_bool(record, "trackRenovations");
  c.active_listing_id = read_optional_string(record, "activeListingId");
  return c;
}

Value Renovation::to_record() const {
  return Value{{"renovationId", renovation_id}, {"commodityId", commodity_id},
               {"date", date},                  {"cost", cost},
               {"renovatingOwner", renovating_owner}, {"description", description},
               {"txId", tx_id}};
}

Renovation Renovation::from_record(const Value& record) {
  Renovation r;
  r.renovation_id = field_string(record, "renovationId");
  r.commodity_id = field_string(record, "commodityId");
  r.date = field_string(record, "date");
  r.cost = field_int(record, "cost");
  r.renovating_owner = field_string(record, "renovatingOwner");
  r.description = field_string(record, "description");
  r.tx_id = field_string(record, "txId");
  return r;
}

Value CommodityListing::to_record() const {
  Value max = max_bid ? Value{{"offerId", max_bid->offer_id}, {"bidPrice", max_bid->bid_price}}
                      : Value(nullptr);
  return Value{{"listingId", listing_id},
               {"exchangeName", exchange_name},
               {"commodityId", commodity_id},
               {"sellerId", seller_id},
               {"reservePrice", reserve_price},
               {"offerIds", offer_ids},
               {"maxBid", std::move(max)},
               {"state", std::string(to_string(state))},
               {"doneBuyer", optional_string(done_buyer)},
               {"auctionId", auction_id},
               {"transferred", transferred}};
}

CommodityListing CommodityListing::from_record(const Value& record) {
  CommodityListing l;
  l.listing_id = field_string(record, "listingId");
  l.exchange_name = field_string(record, "exchangeName");
  l.commodity_id = field_string(record, "commodityId");
  l.seller_id = field_string(record, "sellerId");
  l.reserve_price = field_int(record, "reservePrice");
  l.offer_ids = read_strings(record, "offerIds");
  const auto& max = field(record, "maxBid");
  if (!max.is_null()) l.max_bid = MaxBid{field_string(max, "offerId"), field_int(max, "bidPrice")};
  auto state = listing_state_from_string(field_string(record, "state"));
  if (!state) throw std::invalid_argument("unknown listing state");
  l.state = *state;
  l.done_buyer = read_optional_string(record, "doneBuyer");
  l.auction_id = field_string(record, "auctionId");
  l.transferred = field_bool(record, "transferred");
  return l;
}

Value Offer::to_record() const {
  return Value{{"offerId", offer_id}, {"listingId", listing_id}, {"member", member},
               {"bidPrice", bid_price}, {"seq", seq}};
}

Offer Offer::from_record(const Value& record) {
  return Offer{field_string(record, "offerId"), field_string(record, "listingId"),
               field_string(record, "member"), field_int(record, "bidPrice"),
               field_int(record, "seq")};
}

Value AuctionEnvironment::to_record() const {
  return Value{{"auctionId", auction_id},       {"activeBuyers", active_buyers},
               {"activeSellers", active_sellers}, {"activeAuctioneer", active_auctioneer},
               {"open", open},                  {"listingIds", listing_ids}};
}

AuctionEnvironment AuctionEnvironment::from_record(const Value& record) {
  AuctionEnvironment e;
  e.auction_id = field_string(record, "auctionId");
  e.active_buyers = read_strings(record, "activeBuyers");
  e.active_sellers = read_strings(record, "activeSellers");
  e.active_auctioneer = field_string(record, "activeAuctioneer");
  e.open = field_bool(record, "open");
  e.listing_ids = read_strings(record, "listingIds");
  return e;
}

}  // namespace nftl::chaincode
