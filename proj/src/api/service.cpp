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

#include "nftl/api/service.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <random>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "nftl/chaincode/chaincode.hpp"

namespace nftl::api {

using chaincode::op::kAddRenovation;
using chaincode::op::kCloseBidding;
using chaincode::op::kCloseEnvironment;
using chaincode::op::kCreateCommodity;
using chaincode::op::kCreateCommodityListing;
using chaincode::op::kInitiateAuctionEnvironment;
using chaincode::op::kMakeBid;
using chaincode::op::kTransferAssets;
using ledger::Namespace;
using ledger::ValidityFlag;

namespace {

HttpResponse json_response(int status, const Value& body) {
  return HttpResponse{status, canonical(body), "application/json"};
}

HttpResponse error_response(int status, Errc code, std::string message) {
  return json_response(status, Value{{"error", std::string(to_string(code))},
                                     {"message", std::move(message)}});
}

HttpResponse not_found(std::string what) {
  return error_response(404, Errc::NOT_FOUND, std::move(what));
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) parts.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

std::string random_hex(std::size_t bytes) {
  std::random_device rd;
  std::string raw;
  for (std::size_t i = 0; i < bytes; ++i) raw.push_back(static_cast<char>(rd() & 0xff));
  return to_hex(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
}

Value arg_or_null(const Value& args, const char* name) {
  auto it = args.find(name);
  return it == args.end() ? Value(nullptr) : *it;
}

/// Decoded value of the first write to namespace `ns`, or null.
Value written_record(const ledger::TransactionEnvelope& env, Namespace ns) {
  for (const auto& w : env.write_set) {
    if (w.key.ns == ns && w.value) {
      auto parsed = parse_record(*w.value);
      if (parsed) return std::move(parsed).value();
    }
  }
  return Value(nullptr);
}

}  // namespace

// ---- events ----------------------------------------------------------------

Value EventRecord::to_record() const {
  return Value{{"eventSeq", event_seq}, {"kind", kind}, {"payload", payload}};
}

std::string EventRecord::line() const {
  return std::to_string(event_seq) + " " + canonical(to_record()) + "\n";
}

std::vector<EventRecord> events_for_block(const ledger::Block& block, std::uint64_t first_seq) {
  std::vector<EventRecord> out;
  auto emit = [&](std::string kind, Value payload) {
    out.push_back(EventRecord{first_seq + out.size(), std::move(kind), std::move(payload)});
  };
  for (std::size_t i = 0; i < block.envelopes.size(); ++i) {
    const auto& env = block.envelopes[i];
    const auto flag = block.validity_flags.at(i);
    Value base{{"txId", env.tx_id}, {"block", block.number}, {"tx", i}};
    auto with = [&](Value extra) {
      Value v = base;
      v.update(extra);
      return v;
    };

    if (env.operation == kMakeBid) {
      Value fields{{"listingId", arg_or_null(env.args, "listingId")},
                   {"member", arg_or_null(env.args, "potentialBuyer")},
                   {"bidPrice", arg_or_null(env.args, "bidPrice")}};
      if (flag == ValidityFlag::Valid) {
        fields["offerId"] = arg_or_null(env.result, "offerId");
        emit("BID_ACCEPTED", with(fields));
      } else {
        fields["flag"] = std::string(ledger::to_string(flag));
        emit("BID_REJECTED", with(fields));
      }
      continue;
    }
    if (flag != ValidityFlag::Valid) continue;

    if (env.operation == kCreateCommodityListing) {
      emit("LISTING_CREATED", with(Value{{"listingId", arg_or_null(env.result, "listingId")},
                                         {"commodityId", arg_or_null(env.args, "commodityId")},
                                         {"sellerId", arg_or_null(env.args, "sellerId")},
                                         {"reservePrice", arg_or_null(env.args, "reservePrice")},
                                         {"auctionId", arg_or_null(env.args, "auctionId")}}));
    } else if (env.operation == kCloseBidding) {
      auto listing = written_record(env, Namespace::Listing);
      emit("BIDDING_CLOSED",
           with(Value{{"listingId", arg_or_null(env.args, "listingId")},
                      {"state", arg_or_null(env.result, "state")},
                      {"doneBuyer", listing.is_object() ? arg_or_null(listing, "doneBuyer")
                                                        : Value(nullptr)},
                      {"maxBid", listing.is_object() ? arg_or_null(listing, "maxBid")
                                                     : Value(nullptr)}}));
    } else if (env.operation == kTransferAssets &&
               arg_or_null(env.result, "outcome") == chaincode::kTransferred) {
      auto commodity = written_record(env, Namespace::Commodity);
      emit("ASSET_TRANSFERRED",
           with(Value{{"listingId", arg_or_null(env.args, "listingId")},
                      {"newOwner", arg_or_null(env.args, "proposedNewOwner")},
                      {"commodityId", commodity.is_object() ? arg_or_null(commodity, "commodityId")
                                                            : Value(nullptr)}}));
    }
  }
  Value flags = Value::array();
  for (auto f : block.validity_flags) flags.push_back(std::string(ledger::to_string(f)));
  emit("BLOCK_COMMITTED", Value{{"block", block.number},
                                {"hash", to_hex(ledger::compute_block_hash(block))},
                                {"txCount", block.envelopes.size()},
                                {"flags", std::move(flags)}});
  return out;
}

// ---- lifecycle -------------------------------------------------------------

struct ApiService::Server {
  httplib::Server http;
};

ApiService::ApiService(ServiceConfig config) : config_(std::move(config)) {}

ApiService::~ApiService() { stop(); }

Result<std::unique_ptr<ApiService>> ApiService::create(ServiceConfig config) {
  std::unique_ptr<ApiService> svc(new ApiService(std::move(config)));
  auto& cfg = svc->config_;
  if (cfg.registry_seed.empty()) cfg.registry_seed = random_hex(32);

  if (cfg.data_dir) {
    auto store = pipeline::open_store(*cfg.data_dir, cfg.network, cfg.registry_seed);
    if (!store) return store.error();
    svc->store_ = std::move(store).value();
  } else {
    if (auto st = cfg.network.check(); !st) return st.error();
    svc->store_.config = cfg.network;
    svc->store_.registry = std::make_unique<membership::Registry>(cfg.registry_seed);
    svc->store_.created = true;
    if (auto st = pipeline::register_nodes(*svc->store_.registry, cfg.network); !st) {
      return st.error();
    }
  }

  pipeline::Network::Options opts;
  opts.config = svc->store_.config;
  opts.seed = cfg.seed;
  opts.anchor_data_dir = cfg.data_dir;
  opts.trace = false;
  auto net = pipeline::Network::create(opts, *svc->store_.registry);
  if (!net) return net.error();
  svc->network_ = std::move(net).value();

  // Replay history so event sequence numbers survive restarts.
  const auto& anchor = svc->network_->anchor();
  for (std::uint64_t n = 1; n <= anchor.height(); ++n) {
    auto evs = events_for_block(*anchor.block(n), svc->events_.size() + 1);
    svc->events_.insert(svc->events_.end(), evs.begin(), evs.end());
  }
  svc->network_->set_commit_listener([s = svc.get()](const ledger::Block& b) { s->on_commit(b); });
  svc->nonce_prefix_ = random_hex(8);

  if (cfg.tick_interval_ms > 0) svc->ticker_ = std::thread([s = svc.get()] { s->tick_loop(); });
  return svc;
}

void ApiService::tick_loop() {
  const auto interval = std::chrono::milliseconds(config_.tick_interval_ms);
  while (!stopping_) {
    std::this_thread::sleep_for(interval);
    std::lock_guard lock(network_mutex_);
    network_->step();
  }
}

void ApiService::settle() {
  std::lock_guard lock(network_mutex_);
  network_->settle();
}

void ApiService::on_commit(const ledger::Block& block) {
  for (const auto& env : block.envelopes) pending_.erase(env.tx_id);
  {
    std::lock_guard lock(events_mutex_);
    auto evs = events_for_block(block, events_.size() + 1);
    events_.insert(events_.end(), evs.begin(), evs.end());
  }
  events_cv_.notify_all();
}

std::vector<EventRecord> ApiService::events_since(std::uint64_t since) const {
  std::lock_guard lock(events_mutex_);
  if (since >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(since), events_.end()};
}

bool ApiService::wait_for_event(std::uint64_t since, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(events_mutex_);
  return events_cv_.wait_for(lock, timeout,
                             [&] { return events_.size() > since || stopping_.load(); }) &&
         events_.size() > since;
}

std::string ApiService::fresh_nonce() {
  return "api-" + nonce_prefix_ + "-" + std::to_string(++nonce_counter_);
}

Result<int> ApiService::start(const std::string& host, int port) {
  server_ = std::make_unique<Server>();
  auto& http = server_->http;

  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    for (const auto& [k, v] : req.headers) {
      std::string name = k;
      std::transform(name.begin(), name.end(), name.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      r.headers[name] = v;
    }
    r.body = req.body;

    if (r.method == "GET" && r.path == "/events" && r.query.contains("follow") &&
        r.query["follow"] != "0") {
      std::uint64_t since = 0;
      try {
        since = r.query.contains("since") ? std::stoull(r.query["since"]) : 0;
      } catch (const std::exception&) {
        auto bad = error_response(422, Errc::MALFORMED_REQUEST, "since must be an integer");
        res.status = bad.status;
        res.set_content(bad.body, bad.content_type);
        return;
      }
      auto cursor = std::make_shared<std::uint64_t>(since);
      res.set_chunked_content_provider(
          "text/plain", [this, cursor](std::size_t, httplib::DataSink& sink) {
            if (stopping_) {
              sink.done();
              return true;
            }
            wait_for_event(*cursor, std::chrono::milliseconds(250));
            for (const auto& ev : events_since(*cursor)) {
              auto line = ev.line();
              if (!sink.write(line.data(), line.size())) return false;
              *cursor = ev.event_seq;
            }
            return true;
          });
      return;
    }
    auto out = handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Headers", "Content-Type, X-Identity, X-Signature"},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  http.Get(".*", forward);
  http.Post(".*", forward);
  http.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  int bound = port == 0 ? http.bind_to_any_port(host) : (http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    return make_error(Errc::IO_ERROR, "cannot bind " + host + ":" + std::to_string(port));
  }
  server_thread_ = std::thread([this] { server_->http.listen_after_bind(); });
  server_->http.wait_until_ready();
  return bound;
}

void ApiService::wait() {
  if (server_thread_.joinable()) server_thread_.join();
}

void ApiService::stop() {
  if (stopping_.exchange(true)) return;
  events_cv_.notify_all();
  if (server_) server_->http.stop();
  if (server_thread_.joinable()) server_thread_.join();
  if (ticker_.joinable()) ticker_.join();
}

// ---- routing ---------------------------------------------------------------

HttpResponse ApiService::handle(const HttpRequest& request) {
  try {
    auto parts = split_path(request.path);
    if (request.method == "OPTIONS") return HttpResponse{204, "", "text/plain"};
    if (request.method == "POST") return route_post(request, parts);
    if (request.method == "GET") return route_get(request, parts);
    return error_response(405, Errc::MALFORMED_REQUEST, "method not allowed");
  } catch (const std::exception& e) {
    spdlog::error("request {} {} failed: {}", request.method, request.path, e.what());
    return json_response(500, Value{{"error", "INTERNAL"}, {"message", e.what()}});
  }
}

HttpResponse ApiService::route_post(const HttpRequest& req, const std::vector<std::string>& p) {
  if (p.size() == 1 && p[0] == "identities") return post_identity(req);

  Value body = Value::object();
  if (!req.body.empty()) {
    auto parsed = parse_record(req.body);
    if (!parsed || !parsed->is_object()) {
      return error_response(422, Errc::MALFORMED_REQUEST, "body must be a record");
    }
    body = std::move(parsed).value();
  }
  auto header = [&](std::string_view name) -> std::string {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto it = req.headers.find(key);
    return it == req.headers.end() ? std::string() : it->second;
  };

  // Route first so unknown paths are 404 regardless of auth.
  std::string operation;
  std::optional<Errc> path_id_error;
  Value args = body;
  const std::size_t n = p.size();
  if (n == 1 && p[0] == "auctions") {
    operation = kInitiateAuctionEnvironment;
  } else if (n == 3 && p[0] == "auctions" && p[2] == "close") {
    operation = kCloseEnvironment;
    args["auctionId"] = p[1];
    path_id_error = Errc::UNKNOWN_AUCTION;
  } else if (n == 1 && p[0] == "commodities") {
    operation = kCreateCommodity;
  } else if (n == 3 && p[0] == "commodities" && p[2] == "renovations") {
    operation = kAddRenovation;
    args["commodityId"] = p[1];
    path_id_error = Errc::UNKNOWN_COMMODITY;
  } else if (n == 1 && p[0] == "listings") {
    operation = kCreateCommodityListing;
  } else if (n == 3 && p[0] == "listings" && (p[2] == "bids" || p[2] == "close" || p[2] == "transfer")) {
    operation = p[2] == "bids" ? kMakeBid : p[2] == "close" ? kCloseBidding : kTransferAssets;
    args["listingId"] = p[1];
    path_id_error = Errc::UNKNOWN_LISTING;
  } else {
    return not_found("no route for POST " + req.path);
  }

  auto caller = header(kIdentityHeader);
  auto signature = header(kSignatureHeader);
  if (caller.empty() || signature.empty()) {
    return error_response(401, Errc::BAD_SIGNATURE, "missing identity or signature header");
  }
  if (!store_.registry->find(caller) ||
      !store_.registry->verify_signature(caller, req.body, membership::Signature{caller, signature})) {
    return error_response(401, Errc::BAD_SIGNATURE, "signature does not verify for " + caller);
  }

  if (operation == kCreateCommodityListing && !args.contains("sellerId")) args["sellerId"] = caller;
  if (operation == kMakeBid && !args.contains("potentialBuyer")) args["potentialBuyer"] = caller;
  return mutate(req, operation, std::move(args), path_id_error);
}

HttpResponse ApiService::post_identity(const HttpRequest& req) {
  auto parsed = parse_record(req.body.empty() ? std::string_view("{}") : req.body);
  if (!parsed || !parsed->is_object()) {
    return error_response(422, Errc::MALFORMED_REQUEST, "body must be a record");
  }
  const auto& body = *parsed;
  auto name = body.find("name");
  auto role_field = body.find("role");
  if (name == body.end() || !name->is_string() || role_field == body.end() ||
      !role_field->is_string()) {
    return error_response(422, Errc::MALFORMED_REQUEST, "name and role are required strings");
  }
  auto role = membership::role_from_string(role_field->get<std::string>());
  if (!role) return error_response(422, Errc::MALFORMED_REQUEST, "role must be MEMBER or AUCTIONEER");

  std::lock_guard lock(registry_write_mutex_);
  auto identity = store_.registry->register_identity(name->get<std::string>(), *role);
  if (!identity) return error_response(422, identity.error().code, identity.error().message);
  if (config_.data_dir) {
    if (auto st = pipeline::save_registry(*config_.data_dir, *store_.registry); !st) {
      return error_response(500, st.error().code, st.error().message);
    }
  }
  return json_response(201, Value{{"identity", identity->to_record()},
                                  {"secretKey", *store_.registry->export_key_hex(
                                                    identity->identity_id)}});
}

HttpResponse ApiService::mutate(const HttpRequest& req, std::string_view operation, Value args,
                                std::optional<Errc> path_not_found) {
  std::lock_guard lock(network_mutex_);
  // Endorse against current state: let lagging endorsers receive blocks the
  // anchor already committed.
  for (int i = 0; i < 64 && !network_->endorsers_current(); ++i) network_->step();

  auto caller = req.headers.at(std::string("x-identity"));
  auto proposal = pipeline::sign_proposal(*store_.registry, caller, std::string(operation),
                                          std::move(args), fresh_nonce());
  if (!proposal) return error_response(422, proposal.error().code, proposal.error().message);
  auto result = network_->submit(*proposal);
  if (result.ordered()) {
    pending_.insert(result.tx_id);
    return json_response(202, Value{{"txId", result.tx_id},
                                    {"status", "PENDING"},
                                    {"result", result.result}});
  }

  auto code = *result.client_code();
  std::string message = result.error ? result.error->message : std::string();
  Value body{{"error", std::string(to_string(code))},
             {"message", message},
             {"txId", result.tx_id}};
  int status = 409;
  switch (result.rejection) {
    case pipeline::Rejection::BadSignature: status = 401; break;
    case pipeline::Rejection::EndorsementShortfall: status = 503; break;
    default:
      if (path_not_found && code == *path_not_found) {
        status = 404;
      } else if (code == Errc::BAD_ARGS || code == Errc::UNSUPPORTED_VALUE) {
        status = 422;
      }
  }
  return json_response(status, body);
}

HttpResponse ApiService::route_get(const HttpRequest& req, const std::vector<std::string>& p) {
  const std::size_t n = p.size();
  const auto& ledger = network_->anchor();

  if (n == 0) {
    return json_response(200, Value{{"service", "nftl"}, {"height", ledger.height()}});
  }
  if (p[0] == "events" && n == 1) return get_events(req);
  if (p[0] == "identities" && n == 1) {
    Value out = Value::array();
    for (const auto& id : store_.registry->identities()) out.push_back(id.to_record());
    return json_response(200, out);
  }
  if (p[0] == "listings" && n == 1) {
    Value out = Value::array();
    for (const auto& [key, vv] : ledger.snapshot()->scan(Namespace::Listing)) {
      out.push_back(parse_record(vv.value).value());
    }
    return json_response(200, out);
  }
  if ((p[0] == "listings" || p[0] == "commodities") && n == 2) {
    auto ns = p[0] == "listings" ? Namespace::Listing : Namespace::Commodity;
    auto vv = ledger.get_state(ledger::StateKey{ns, p[1]});
    if (!vv) return not_found(p[0] + " " + p[1]);
    return json_response(200, parse_record(vv->value).value());
  }
  if (p[0] == "commodities" && n == 3 && p[2] == "provenance") {
    pipeline::LedgerQueryView view(ledger);
    auto prov = chaincode::query(chaincode::op::kGetProvenance, Value{{"commodityId", p[1]}}, view);
    if (!prov) {
      if (prov.error().code == Errc::UNKNOWN_COMMODITY) return not_found("commodity " + p[1]);
      return error_response(422, prov.error().code, prov.error().message);
    }
    return json_response(200, *prov);
  }
  if (p[0] == "blocks" && n == 2) {
    const auto& text = p[1];
    if (text.empty() || text.size() > 19 ||
        !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
      return not_found("block " + text);
    }
    auto block = ledger.block(std::stoull(text));
    if (!block) return not_found("block " + text);
    return json_response(200, block->to_record());
  }
  if (p[0] == "chain" && n == 2 && p[1] == "verify") {
    return json_response(200, ledger.verify_chain().to_record());
  }
  if (p[0] == "transactions" && n == 2) return get_transaction(p[1]);
  return not_found("no route for GET " + req.path);
}

HttpResponse ApiService::get_transaction(const std::string& tx_id) {
  const auto& ledger = network_->anchor();
  if (auto loc = ledger.find_tx(tx_id)) {
    auto block = ledger.block(loc->position.block);
    const auto& env = block->envelopes.at(loc->position.tx);
    return json_response(200, Value{{"txId", tx_id},
                                    {"status", std::string(ledger::to_string(loc->flag))},
                                    {"block", loc->position.block},
                                    {"tx", loc->position.tx},
                                    {"operation", env.operation},
                                    {"result", env.result}});
  }
  {
    std::lock_guard lock(network_mutex_);
    if (pending_.contains(tx_id)) {
      return json_response(200, Value{{"txId", tx_id}, {"status", "PENDING"}});
    }
  }
  return not_found("transaction " + tx_id);
}

HttpResponse ApiService::get_events(const HttpRequest& req) {
  std::uint64_t since = 0;
  if (auto it = req.query.find("since"); it != req.query.end()) {
    try {
      std::size_t used = 0;
      since = std::stoull(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      return error_response(422, Errc::MALFORMED_REQUEST, "since must be a non-negative integer");
    }
  }
  std::string out;
  for (const auto& ev : events_since(since)) out += ev.line();
  return HttpResponse{200, std::move(out), "text/plain"};
}

}  // namespace nftl::api
