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

#include "nftl/chaincode/chaincode.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace nftl::chaincode {

using ledger::Namespace;
using ledger::ReadItem;
using ledger::StateKey;
using ledger::WriteItem;
using membership::Role;

namespace {

/// Thrown inside an operation to abort it; caught by the dispatcher.
struct Abort {
  Error error;
};

[[noreturn]] void fail(Errc code, std::string message = {}) {
  throw Abort{make_error(code, std::move(message))};
}

StateKey key(Namespace ns, std::string id) { return StateKey{ns, std::move(id)}; }

/// Read/write tracking for one simulated transaction. Reads always go to the
/// snapshot; writes are buffered and never visible to later reads of the
/// same transaction.
class TxContext {
 public:
  TxContext(const Invocation& inv, const ledger::StateView& snapshot,
            const membership::Registry& registry)
      : inv_(inv), snapshot_(snapshot), registry_(registry) {}

  const std::string& caller() const { return inv_.caller; }
  const std::string& tx_id() const { return inv_.tx_id; }
  const Value& args() const { return inv_.args; }
  const membership::Registry& registry() const { return registry_; }

  std::optional<Value> read(const StateKey& k) {
    auto entry = snapshot_.get(k);
    reads_.try_emplace(k.render(), ReadItem{k, entry ? std::optional(entry->version) : std::nullopt});
    if (!entry) return std::nullopt;
    auto parsed = parse_record(entry->value);
    if (!parsed) throw std::runtime_error("corrupt state record at " + k.render());
    return std::move(parsed).value();
  }

  template <typename T>
  std::optional<T> read_as(const StateKey& k) {
    auto v = read(k);
    if (!v) return std::nullopt;
    return T::from_record(*v);
  }

  void put(const StateKey& k, const Value& record) {
    writes_[k.render()] = WriteItem{k, canonical(record)};
  }

  std::string mint_id(std::string_view prefix) {
    auto id = derive_entity_id(prefix, inv_.tx_id);
    if (minted_++ > 0) id += "-" + std::to_string(minted_);
    return id;
  }

  std::vector<ReadItem> take_reads() {
    std::vector<ReadItem> out;
    for (auto& [k, r] : reads_) out.push_back(std::move(r));
    return out;
  }

  std::vector<WriteItem> take_writes() {
    std::vector<WriteItem> out;
    for (auto& [k, w] : writes_) out.push_back(std::move(w));
    return out;
  }

 private:
  const Invocation& inv_;
  const ledger::StateView& snapshot_;
  const membership::Registry& registry_;
  std::map<std::string, ReadItem> reads_;
  std::map<std::string, WriteItem> writes_;
  int minted_ = 0;
};

// ---- argument decoding ---------------------------------------------------

const Value& arg(const Value& args, std::string_view name) {
  if (!args.is_object()) fail(Errc::BAD_ARGS, "args must be a record");
  auto it = args.find(name);
  if (it == args.end()) fail(Errc::BAD_ARGS, "missing argument '" + std::string(name) + "'");
  return *it;
}

std::string arg_string(const Value& args, std::string_view name) {
  const auto& v = arg(args, name);
  if (!v.is_string()) fail(Errc::BAD_ARGS, "argument '" + std::string(name) + "' must be a string");
  return v.get<std::string>();
}

Amount arg_amount(const Value& args, std::string_view name) {
  const auto& v = arg(args, name);
  if (v.is_number_unsigned()) {
    if (v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      fail(Errc::BAD_ARGS, "argument '" + std::string(name) + "' is out of range");
    }
    return static_cast<Amount>(v.get<std::uint64_t>());
  }
  if (!v.is_number_integer()) {
    fail(Errc::BAD_ARGS, "argument '" + std::string(name) + "' must be an integer");
  }
  return v.get<Amount>();
}

std::vector<std::string> arg_id_list(const Value& args, std::string_view name) {
  const auto& v = arg(args, name);
  if (!v.is_array()) fail(Errc::BAD_ARGS, "argument '" + std::string(name) + "' must be a list");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) fail(Errc::BAD_ARGS, "argument '" + std::string(name) + "' must hold ids");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool is_calendar_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto num = [&](std::size_t pos, std::size_t len) {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (s[i] - '0');
    return v;
  };
  std::chrono::year_month_day ymd{std::chrono::year{num(0, 4)},
                                  std::chrono::month{static_cast<unsigned>(num(5, 2))},
                                  std::chrono::day{static_cast<unsigned>(num(8, 2))}};
  return ymd.ok();
}

bool contains(const std::vector<std::string>& v, std::string_view x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void require_registered(const TxContext& ctx, std::string_view id) {
  if (!ctx.registry().find(id)) fail(Errc::UNKNOWN_IDENTITY, std::string(id));
}

// ---- operations ----------------------------------------------------------

Value initiate_auction_environment(TxContext& ctx) {
  require_registered(ctx, ctx.caller());
  const auto& args = ctx.args();
  auto buyers = arg_id_list(args, "buyersLst");
  auto sellers = arg_id_list(args, "sellersLst");

  if (buyers.empty()) fail(Errc::EMPTY_BUYERS, "buyersLst is empty");
  if (sellers.empty()) fail(Errc::EMPTY_SELLERS, "sellersLst is empty");
  auto auctioneer_it = args.find("auctioneer");
  if (auctioneer_it == args.end() || auctioneer_it->is_null() ||
      (auctioneer_it->is_string() && auctioneer_it->get<std::string>().empty())) {
    fail(Errc::NULL_AUCTIONEER, "auctioneer is null");
  }
  auto auctioneer = arg_string(args, "auctioneer");

  for (const auto* list : {&buyers, &sellers}) {
    std::set<std::string> distinct(list->begin(), list->end());
    if (distinct.size() != list->size()) {
      fail(Errc::DUPLICATE_PARTICIPANT, "participant lists must be duplicate-free");
    }
    for (const auto& id : *list) {
      if (auto st = ctx.registry().require_role(id, Role::Member); !st) throw Abort{st.error()};
    }
  }
  if (auto st = ctx.registry().require_role(auctioneer, Role::Auctioneer); !st) {
    throw Abort{st.error()};
  }

  AuctionEnvironment env;
  env.auction_id = ctx.mint_id("auction");
  auto k = key(Namespace::Environment, env.auction_id);
  if (ctx.read(k)) fail(Errc::BAD_ARGS, "auction id already in use");
  env.active_buyers = std::move(buyers);
  env.active_sellers = std::move(sellers);
  env.active_auctioneer = std::move(auctioneer);
  env.open = true;
  ctx.put(k, env.to_record());
  return Value{{"auctionId", env.auction_id}};
}

Value create_commodity(TxContext& ctx) {
  require_registered(ctx, ctx.caller());
  const auto& args = ctx.args();
  auto description = arg_string(args, "description");
  auto ideal_price = arg_amount(args, "idealPrice");

  std::optional<bool> track;
  if (auto it = args.find("trackRenovations"); it != args.end()) {
    if (!it->is_boolean()) fail(Errc::BAD_ARGS, "trackRenovations must be a boolean");
    track = it->get<bool>();
  }
  if (auto it = args.find("profile"); it != args.end()) {
    if (!it->is_string()) fail(Errc::BAD_ARGS, "profile must be a string");
    bool from_profile;
    if (*it == "art") {
      from_profile = false;
    } else if (*it == "real-estate") {
      from_profile = true;
    } else {
      fail(Errc::BAD_ARGS, "profile must be \"art\" or \"real-estate\"");
    }
    if (track && *track != from_profile) {
      fail(Errc::BAD_ARGS, "profile and trackRenovations disagree");
    }
    track = from_profile;
  }
  if (ideal_price < 0) fail(Errc::NEGATIVE_PRICE, "idealPrice must be >= 0");

  Commodity c;
  c.commodity_id = ctx.mint_id("commodity");
  auto k = key(Namespace::Commodity, c.commodity_id);
  // Absence is part of the read set: two creations of one id cannot both commit.
  if (ctx.read(k)) fail(Errc::BAD_ARGS, "commodity id already in use");
  c.description = std::move(description);
  c.ideal_price = ideal_price;
  c.owner = ctx.caller();
  c.ownership_history.push_back(OwnershipRecord{ctx.caller(), ctx.tx_id(), std::nullopt});
  c.track_renovations = track.value_or(false);
  ctx.put(k, c.to_record());
  return Value{{"commodityId", c.commodity_id}};
}

Value create_commodity_listing(TxContext& ctx) {
  require_registered(ctx, ctx.caller());
  const auto& args = ctx.args();
  auto exchange = trim(arg_string(args, "exchangeName"));
  auto commodity_id = arg_string(args, "commodityId");
  auto seller_id = arg_string(args, "sellerId");
  auto reserve = arg_amount(args, "reservePrice");
  auto auction_id = arg_string(args, "auctionId");

  if (exchange.empty()) fail(Errc::UNKNOWN_EXCHANGE, "exchangeName is empty");
  if (reserve < 0) fail(Errc::NEGATIVE_RESERVE, "reservePrice must be >= 0");
  if (seller_id != ctx.caller()) fail(Errc::CALLER_MISMATCH, "sellerId must be the caller");

  auto env_key = key(Namespace::Environment, auction_id);
  auto env = ctx.read_as<AuctionEnvironment>(env_key);
  if (!env) fail(Errc::UNKNOWN_AUCTION, auction_id);
  if (!env->open) fail(Errc::ENV_CLOSED, auction_id);

  auto commodity_key = key(Namespace::Commodity, commodity_id);
  auto commodity = ctx.read_as<Commodity>(commodity_key);
  if (!commodity) fail(Errc::UNKNOWN_COMMODITY, commodity_id);
  if (commodity->owner != seller_id) fail(Errc::NOT_OWNER, commodity_id);
  if (!contains(env->active_sellers, seller_id)) fail(Errc::NOT_ACTIVE_SELLER, seller_id);
  if (commodity->active_listing_id) fail(Errc::ALREADY_LISTED, *commodity->active_listing_id);

  CommodityListing listing;
  listing.listing_id = ctx.mint_id("listing");
  auto listing_key = key(Namespace::Listing, listing.listing_id);
  if (ctx.read(listing_key)) fail(Errc::BAD_ARGS, "listing id already in use");
  listing.exchange_name = exchange;
  listing.commodity_id = commodity_id;
  listing.seller_id = seller_id;
  listing.reserve_price = reserve;
  listing.state = ListingState::ForSale;
  listing.auction_id = auction_id;

  commodity->active_listing_id = listing.listing_id;
  env->listing_ids.push_back(listing.listing_id);

  ctx.put(listing_key, listing.to_record());
  ctx.put(commodity_key, commodity->to_record());
  ctx.put(env_key, env->to_record());
  return Value{{"listingId", listing.listing_id}};
}

Value make_bid(TxContext& ctx) {
  const auto& args = ctx.args();
  auto listing_id = arg_string(args, "listingId");
  auto buyer = arg_string(args, "potentialBuyer");
  auto price = arg_amount(args, "bidPrice");

  auto listing_key = key(Namespace::Listing, listing_id);
  auto listing = ctx.read_as<CommodityListing>(listing_key);
  if (!listing) fail(Errc::UNKNOWN_LISTING, listing_id);
  if (!ctx.registry().find(buyer)) fail(Errc::UNKNOWN_BUYER, buyer);
  if (buyer != ctx.caller()) fail(Errc::CALLER_MISMATCH, "potentialBuyer must be the caller");
  if (listing->state != ListingState::ForSale) fail(Errc::LISTING_NOT_OPEN, listing_id);
  if (buyer == listing->seller_id) fail(Errc::SELF_BID, "seller cannot bid on own listing");

  auto env = ctx.read_as<AuctionEnvironment>(key(Namespace::Environment, listing->auction_id));
  if (!env) fail(Errc::UNKNOWN_AUCTION, listing->auction_id);
  if (!contains(env->active_buyers, buyer)) fail(Errc::NOT_ACTIVE_BUYER, buyer);

  // Strictly above the current maximum; the first bid must be positive.
  Amount floor = listing->max_bid ? listing->max_bid->bid_price : 0;
  if (price <= floor) {
    fail(Errc::BID_TOO_LOW, "bidPrice " + std::to_string(price) + " must exceed " +
                                std::to_string(floor));
  }

  Offer offer;
  offer.offer_id = ctx.mint_id("offer");
  auto offer_key = key(Namespace::Offer, offer.offer_id);
  if (ctx.read(offer_key)) fail(Errc::BAD_ARGS, "offer id already in use");
  offer.listing_id = listing_id;
  offer.member = buyer;
  offer.bid_price = price;
  offer.seq = static_cast<std::int64_t>(listing->offer_ids.size()) + 1;

  listing->offer_ids.push_back(offer.offer_id);
  listing->max_bid = MaxBid{offer.offer_id, price};

  ctx.put(offer_key, offer.to_record());
  ctx.put(listing_key, listing->to_record());
  return Value{{"offerId", offer.offer_id}};
}

Value close_bidding(TxContext& ctx) {
  auto listing_id = arg_string(ctx.args(), "listingId");
  auto listing_key = key(Namespace::Listing, listing_id);
  auto listing = ctx.read_as<CommodityListing>(listing_key);
  if (!listing) fail(Errc::UNKNOWN_LISTING, listing_id);

  auto env = ctx.read_as<AuctionEnvironment>(key(Namespace::Environment, listing->auction_id));
  if (!env) fail(Errc::UNKNOWN_AUCTION, listing->auction_id);
  if (!ctx.registry().require_role(ctx.caller(), Role::Auctioneer) ||
      ctx.caller() != env->active_auctioneer) {
    fail(Errc::NOT_AUCTIONEER, "caller " + ctx.caller() + " is not the auctioneer of " +
                                   listing->auction_id);
  }
  if (listing->state != ListingState::ForSale) fail(Errc::ALREADY_CLOSED, listing_id);

  if (listing->max_bid && listing->max_bid->bid_price >= listing->reserve_price) {
    auto offer = ctx.read_as<Offer>(key(Namespace::Offer, listing->max_bid->offer_id));
    if (!offer) throw std::runtime_error("listing references a missing offer");
    listing->state = ListingState::Sold;
    listing->done_buyer = offer->member;
  } else {
    listing->state = ListingState::ReserveNotMet;
    // Release the commodity so it can be renovated or listed again.
    auto commodity_key = key(Namespace::Commodity, listing->commodity_id);
    auto commodity = ctx.read_as<Commodity>(commodity_key);
    if (commodity && commodity->active_listing_id == listing_id) {
      commodity->active_listing_id.reset();
      ctx.put(commodity_key, commodity->to_record());
    }
  }
  ctx.put(listing_key, listing->to_record());
  return Value{{"state", std::string(to_string(listing->state))}};
}

Value transfer_assets(TxContext& ctx) {
  require_registered(ctx, ctx.caller());
  auto listing_id = arg_string(ctx.args(), "listingId");
  auto new_owner = arg_string(ctx.args(), "proposedNewOwner");

  auto listing_key = key(Namespace::Listing, listing_id);
  auto listing = ctx.read_as<CommodityListing>(listing_key);
  if (!listing) fail(Errc::UNKNOWN_LISTING, listing_id);
  if (!ctx.registry().find(new_owner)) fail(Errc::UNKNOWN_IDENTITY, new_owner);

  Value no_change{{"outcome", std::string(kNoChange)}};
  if (listing->state != ListingState::Sold || listing->transferred ||
      listing->done_buyer != new_owner) {
    return no_change;
  }

  auto commodity_key = key(Namespace::Commodity, listing->commodity_id);
  auto commodity = ctx.read_as<Commodity>(commodity_key);
  if (!commodity || commodity->owner != listing->seller_id ||
      commodity->active_listing_id != listing_id) {
    return no_change;
  }

  commodity->owner = new_owner;
  commodity->ownership_history.push_back(OwnershipRecord{new_owner, ctx.tx_id(), listing_id});
  commodity->active_listing_id.reset();
  listing->transferred = true;

  ctx.put(commodity_key, commodity->to_record());
  ctx.put(listing_key, listing->to_record());
  return Value{{"outcome", std::string(kTransferred)}};
}

Value add_renovation(TxContext& ctx) {
  const auto& args = ctx.args();
  auto commodity_id = arg_string(args, "commodityId");
  auto date = arg_string(args, "date");
  auto cost = arg_amount(args, "cost");
  auto description = arg_string(args, "description");

  auto commodity_key = key(Namespace::Commodity, commodity_id);
  auto commodity = ctx.read_as<Commodity>(commodity_key);
  if (!commodity) fail(Errc::UNKNOWN_COMMODITY, commodity_id);
  if (!commodity->track_renovations) fail(Errc::RENOVATIONS_DISABLED, commodity_id);
  if (commodity->owner != ctx.caller()) fail(Errc::NOT_OWNER, commodity_id);
  if (commodity->active_listing_id) {
    fail(Errc::LISTED_COMMODITY_FROZEN, "held by listing " + *commodity->active_listing_id);
  }
  if (cost < 0) fail(Errc::NEGATIVE_COST, "cost must be >= 0");
  if (!is_calendar_date(date)) fail(Errc::BAD_ARGS, "date must be a YYYY-MM-DD calendar date");

  Renovation r;
  r.renovation_id = ctx.mint_id("renovation");
  auto renovation_key = key(Namespace::Renovation, r.renovation_id);
  if (ctx.read(renovation_key)) fail(Errc::BAD_ARGS, "renovation id already in use");
  r.commodity_id = commodity_id;
  r.date = date;
  r.cost = cost;
  r.renovating_owner = ctx.caller();
  r.description = description;
  r.tx_id = ctx.tx_id();

  commodity->renovation_ids.push_back(r.renovation_id);
  ctx.put(renovation_key, r.to_record());
  ctx.put(commodity_key, commodity->to_record());
  return Value{{"renovationId", r.renovation_id}};
}

Value close_environment(TxContext& ctx) {
  auto auction_id = arg_string(ctx.args(), "auctionId");
  auto env_key = key(Namespace::Environment, auction_id);
  auto env = ctx.read_as<AuctionEnvironment>(env_key);
  if (!env) fail(Errc::UNKNOWN_AUCTION, auction_id);
  if (ctx.caller() != env->active_auctioneer) {
    fail(Errc::NOT_AUCTIONEER, "caller " + ctx.caller() + " is not the auctioneer of " + auction_id);
  }
  if (!env->open) fail(Errc::ENV_CLOSED, auction_id);
  for (const auto& listing_id : env->listing_ids) {
    auto listing = ctx.read_as<CommodityListing>(key(Namespace::Listing, listing_id));
    if (listing && !is_terminal(listing->state)) fail(Errc::OPEN_LISTINGS_REMAIN, listing_id);
  }
  env->open = false;
  ctx.put(env_key, env->to_record());
  return Value{{"auctionId", auction_id}, {"open", false}};
}

using Handler = Value (*)(TxContext&);

const std::map<std::string_view, Handler>& handlers() {
  static const std::map<std::string_view, Handler> table{
      {op::kInitiateAuctionEnvironment, &initiate_auction_environment},
      {op::kCreateCommodity, &create_commodity},
      {op::kCreateCommodityListing, &create_commodity_listing},
      {op::kMakeBid, &make_bid},
      {op::kCloseBidding, &close_bidding},
      {op::kTransferAssets, &transfer_assets},
      {op::kAddRenovation, &add_renovation},
      {op::kCloseEnvironment, &close_environment},
  };
  return table;
}

}  // namespace

bool is_known_operation(std::string_view operation) {
  return handlers().contains(operation) || is_query_operation(operation);
}

bool is_query_operation(std::string_view operation) { return operation == op::kGetProvenance; }

std::string derive_entity_id(std::string_view prefix, std::string_view tx_id) {
  return std::string(prefix) + "-" + std::string(tx_id.substr(0, 16));
}

std::optional<std::string> primary_id(const Value& result) {
  if (!result.is_object()) return std::nullopt;
  for (const char* name : {"auctionId", "commodityId", "listingId", "offerId", "renovationId"}) {
    if (auto it = result.find(name); it != result.end() && it->is_string()) {
      return it->get<std::string>();
    }
  }
  return std::nullopt;
}

Execution execute(const Invocation& invocation, const ledger::StateView& snapshot,
                  const membership::Registry& registry) {
  Execution out;
  auto it = handlers().find(invocation.operation);
  if (it == handlers().end()) {
    out.result = make_error(is_query_operation(invocation.operation) ? Errc::BAD_ARGS
                                                                     : Errc::UNKNOWN_OPERATION,
                            "not a mutating operation: " + invocation.operation);
    return out;
  }
  TxContext ctx(invocation, snapshot, registry);
  try {
    out.result = it->second(ctx);
    out.read_set = ctx.take_reads();
    out.write_set = ctx.take_writes();
  } catch (const Abort& abort) {
    out.result = abort.error;
  } catch (const std::invalid_argument& e) {
    // Malformed record in state; surfaced as an argument error so the
    // transaction aborts deterministically on every endorser.
    out.result = make_error(Errc::BAD_ARGS, e.what());
  }
  return out;
}

Result<Value> query(std::string_view operation, const Value& args, const QueryView& view) {
  if (operation != op::kGetProvenance) {
    return make_error(Errc::UNKNOWN_OPERATION, "not a query: " + std::string(operation));
  }
  try {
    if (!args.is_object() || !args.contains("commodityId") || !args["commodityId"].is_string()) {
      return make_error(Errc::BAD_ARGS, "commodityId must be a string");
    }
    auto commodity_id = args["commodityId"].get<std::string>();
    auto raw = view.state().get(key(Namespace::Commodity, commodity_id));
    if (!raw) return make_error(Errc::UNKNOWN_COMMODITY, commodity_id);
    auto commodity = Commodity::from_record(parse_record(raw->value).value());

    auto version_record = [&](std::string_view tx) {
      auto v = view.tx_version(tx);
      return v ? v->to_record() : Value(nullptr);
    };

    // (version, insertion index) keeps the timeline in commit order.
    std::vector<std::pair<std::pair<ledger::Version, std::size_t>, Value>> timeline;
    Value history = Value::array();
    for (const auto& rec : commodity.ownership_history) {
      Value entry{{"owner", rec.owner},
                  {"acquiredAtVersion", version_record(rec.tx_id)},
                  {"viaListingId", rec.via_listing_id ? *rec.via_listing_id
                                                      : std::string(kGenesisMarker)},
                  {"txId", rec.tx_id}};
      history.push_back(entry);
      entry["kind"] = "OWNERSHIP";
      timeline.push_back({{view.tx_version(rec.tx_id).value_or(ledger::Version{}), timeline.size()},
                          std::move(entry)});
    }
    Value renovations = Value::array();
    std::vector<std::pair<ledger::Version, Value>> ordered_renovations;
    for (const auto& rid : commodity.renovation_ids) {
      auto rraw = view.state().get(key(Namespace::Renovation, rid));
      if (!rraw) continue;
      auto r = Renovation::from_record(parse_record(rraw->value).value());
      auto entry = r.to_record();
      entry["version"] = version_record(r.tx_id);
      ordered_renovations.emplace_back(view.tx_version(r.tx_id).value_or(ledger::Version{}), entry);
    }
    std::stable_sort(ordered_renovations.begin(), ordered_renovations.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [version, entry] : ordered_renovations) {
      renovations.push_back(entry);
      entry["kind"] = "RENOVATION";
      timeline.push_back({{version, timeline.size()}, std::move(entry)});
    }
    std::stable_sort(timeline.begin(), timeline.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    Value timeline_records = Value::array();
    for (auto& [order, entry] : timeline) timeline_records.push_back(std::move(entry));

    return Value{{"commodityId", commodity.commodity_id},
                 {"description", commodity.description},
                 {"owner", commodity.owner},
                 {"trackRenovations", commodity.track_renovations},
                 {"ownershipHistory", std::move(history)},
                 {"renovations", std::move(renovations)},
                 {"timeline", std::move(timeline_records)}};
  } catch (const std::exception& e) {
    return make_error(Errc::BAD_ARGS, e.what());
  }
}

}  // namespace nftl::chaincode
