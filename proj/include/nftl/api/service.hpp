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

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "nftl/pipeline/network.hpp"
#include "nftl/pipeline/store.hpp"

namespace nftl::api {

inline constexpr std::string_view kIdentityHeader = "X-Identity";
inline constexpr std::string_view kSignatureHeader = "X-Signature";

struct ServiceConfig {
  /// Store location; in-memory when unset.
  std::optional<std::filesystem::path> data_dir;
  /// Used for a new store only.
  pipeline::NetworkConfig network;
  /// Registry seed for a new store; random when empty.
  std::string registry_seed;
  /// Scheduler seed (gossip order).
  std::uint64_t seed = 0;
  /// Wall-clock length of one logical tick for the background ticker;
  /// 0 disables the ticker and time advances only through settle().
  std::uint64_t tick_interval_ms = 20;
};

struct HttpRequest {
  std::string method;
  std::string path;  // without query string
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // names lower-cased
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct EventRecord {
  std::uint64_t event_seq = 0;
  std::string kind;
  Value payload;

  Value to_record() const;
  /// "<eventSeq> <canonical record>\n"
  std::string line() const;
};

/// Events produced by one committed block, in envelope order, followed by
/// BLOCK_COMMITTED. `first_seq` numbers the first one.
std::vector<EventRecord> events_for_block(const ledger::Block& block, std::uint64_t first_seq);

/// HTTP front end over a simulated network whose anchor ledger is the
/// persisted store.
///
/// Requests may arrive concurrently. Mutations and clock ticks serialize on
/// one lock around the network; queries read the anchor's committed state.
class ApiService {
 public:
  static Result<std::unique_ptr<ApiService>> create(ServiceConfig config);
  ~ApiService();

  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  /// Routes one request. Used by the HTTP server and directly by tests.
  HttpResponse handle(const HttpRequest& request);

  /// Binds and serves on a background thread. Returns the bound port.
  Result<int> start(const std::string& host, int port);
  /// Blocks until stop() is called from elsewhere.
  void wait();
  void stop();

  /// Advances logical time until the network is idle.
  void settle();

  std::vector<EventRecord> events_since(std::uint64_t since) const;
  /// Waits up to `timeout` for an event newer than `since`.
  bool wait_for_event(std::uint64_t since, std::chrono::milliseconds timeout) const;

  const membership::Registry& registry() const { return *store_.registry; }
  const ledger::Ledger& anchor() const { return network_->anchor(); }
  const pipeline::NetworkConfig& network_config() const { return store_.config; }

 private:
  explicit ApiService(ServiceConfig config);

  HttpResponse post_identity(const HttpRequest& req);
  HttpResponse mutate(const HttpRequest& req, std::string_view operation, Value args,
                      std::optional<Errc> path_not_found);
  HttpResponse route_post(const HttpRequest& req, const std::vector<std::string>& parts);
  HttpResponse route_get(const HttpRequest& req, const std::vector<std::string>& parts);
  HttpResponse get_transaction(const std::string& tx_id);
  HttpResponse get_events(const HttpRequest& req);

  void on_commit(const ledger::Block& block);
  void tick_loop();
  std::string fresh_nonce();

  ServiceConfig config_;
  pipeline::Store store_;
  std::unique_ptr<pipeline::Network> network_;
  std::mutex network_mutex_;
  std::set<std::string> pending_;  // ordered, not yet committed

  mutable std::mutex events_mutex_;
  mutable std::condition_variable events_cv_;
  std::vector<EventRecord> events_;

  std::mutex registry_write_mutex_;

  struct Server;
  std::unique_ptr<Server> server_;
  std::thread server_thread_;
  std::thread ticker_;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> nonce_counter_{0};
  std::string nonce_prefix_;
};

}  // namespace nftl::api
