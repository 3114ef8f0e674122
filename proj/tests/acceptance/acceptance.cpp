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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "conformance.hpp"
#include "generator.hpp"
#include "oracle.hpp"
#include "nftl/pipeline/network.hpp"
#include "nftl/pipeline/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace nftl;
using pipeline::Scenario;
using pipeline::ScenarioStep;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("nftl-acceptance-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(p);
  return p;
}

ScenarioStep invoke(std::uint64_t tick, std::string actor, std::string operation, Value args,
                    std::optional<std::string> bind = std::nullopt) {
  static std::uint64_t counter = 0;
  ScenarioStep s;
  s.tick = tick;
  s.actor = std::move(actor);
  s.operation = std::move(operation);
  s.args = std::move(args);
  s.bind = std::move(bind);
  s.nonce = "acc-" + std::to_string(++counter);
  return s;
}

// ---------------------------------------------------------------------------

Verdict conformance() {
  auto cases = testing::conformance_cases();
  int failed = 0;
  std::string first;
  for (const auto& c : cases) {
    testing::Fixture f;
    if (auto failure = c.check(f)) {
      if (failed++ == 0) first = c.name + ": " + *failure;
    }
  }
  return {failed == 0, std::to_string(cases.size() - failed) + "/" + std::to_string(cases.size()) +
                           " rules hold" + (first.empty() ? "" : "; first failure: " + first)};
}

/// Shared by the oracle-equivalence and authorization criteria.
struct FuzzTally {
  int scenarios = 0;
  int identical = 0;
  std::string first_mismatch;
  int unauthorized_closes = 0;
  int self_bids = 0;
  int authorization_leaks = 0;
};

void tally_authorization(const pipeline::RunReport& report, const testing::OracleRun& oracle,
                         FuzzTally& t) {
  for (const auto& out : report.outcomes) {
    auto it = oracle.facts.find(out.step_index);
    if (it == oracle.facts.end()) continue;
    const auto& facts = it->second;
    if (!facts.unauthorized_close && !facts.self_bid) continue;
    t.unauthorized_closes += facts.unauthorized_close;
    t.self_bids += facts.self_bid;
    if (out.submit.ordered() || out.submit.rejection != pipeline::Rejection::ChaincodeError) {
      ++t.authorization_leaks;
    }
  }
}

FuzzTally g_fuzz;

Verdict oracle_equivalence() {
  auto& t = g_fuzz;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    testing::GeneratorOptions opts;
    opts.max_ops = 50;
    auto s = testing::generate_scenario(seed, opts);
    auto report = pipeline::run_network(s, seed);
    auto oracle = testing::run_oracle(s, seed);
    ++t.scenarios;
    if (report && report->world_state->content_bytes() == oracle.content) {
      ++t.identical;
    } else if (t.first_mismatch.empty()) {
      t.first_mismatch = "seed " + std::to_string(seed);
    }
    if (report) tally_authorization(*report, oracle, t);
  }
  return {t.identical == 1000, std::to_string(t.identical) + "/1000 byte-identical" +
                                   (t.first_mismatch.empty() ? "" : "; first mismatch " + t.first_mismatch)};
}

Verdict contention() {
  int ok = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    testing::Rng rng(seed * 7919);
    membership::Registry registry("race-" + std::to_string(seed));
    auto id = [&](const char* n, membership::Role r) { return registry.register_identity(n, r)->identity_id; };
    auto seller = id("seller", membership::Role::Member);
    auto b1 = id("b1", membership::Role::Member);
    auto b2 = id("b2", membership::Role::Member);
    auto auct = id("auct", membership::Role::Auctioneer);

    pipeline::NetworkConfig cfg;
    cfg.peers = static_cast<std::size_t>(rng.range(1, 3));
    cfg.required_endorsements = static_cast<std::size_t>(rng.range(1, static_cast<std::int64_t>(cfg.peers)));
    cfg.orderer.max_batch_size = static_cast<std::size_t>(rng.range(2, 5));
    (void)pipeline::register_nodes(registry, cfg);
    pipeline::Network::Options o;
    o.config = cfg;
    o.seed = seed;
    o.trace = false;
    auto net = pipeline::Network::create(o, registry).value();

    int n = 0;
    auto submit = [&](const std::string& who, const char* op, Value args) {
      auto p = pipeline::sign_proposal(registry, who, op, std::move(args), "r" + std::to_string(n++));
      return net->submit(p.value());
    };
    auto flag = [&](const std::string& tx) -> std::string {
      auto loc = net->anchor().find_tx(tx);
      return loc ? std::string(ledger::to_string(loc->flag)) : "NOT_COMMITTED";
    };

    auto c = submit(seller, "create_commodity", Value{{"description", "lot"}, {"idealPrice", 100}});
    auto a = submit(auct, "initiate_auction_environment",
                    Value{{"buyersLst", {b1, b2}}, {"sellersLst", {seller}}, {"auctioneer", auct}});
    net->settle();
    auto l = submit(seller, "create_commodity_listing",
                    Value{{"exchangeName", "X"}, {"commodityId", c.result["commodityId"]}, {"sellerId", seller},
                          {"reservePrice", 10}, {"auctionId", a.result["auctionId"]}});
    net->settle();
    auto lid = l.result["listingId"];
    auto price = rng.range(1, 1000);
    auto p1 = price + (rng.chance(50) ? 0 : rng.range(0, 50));
    auto p2 = price + (rng.chance(50) ? 0 : rng.range(0, 50));
    bool b1_first = rng.chance(50);
    auto bid = [&](const std::string& who, std::int64_t p) {
      return submit(who, "make_bid", Value{{"listingId", lid}, {"potentialBuyer", who}, {"bidPrice", p}});
    };
    auto r1 = b1_first ? bid(b1, p1) : bid(b2, p2);
    auto r2 = b1_first ? bid(b2, p2) : bid(b1, p1);
    net->settle();
    auto f1 = flag(r1.tx_id), f2 = flag(r2.tx_id);
    bool one_each = (f1 == "VALID" && f2 == "MVCC_CONFLICT") || (f1 == "MVCC_CONFLICT" && f2 == "VALID");
    bool retry_ok = false;
    if (one_each) {
      const auto& loser = f1 == "VALID" ? (b1_first ? b2 : b1) : (b1_first ? b1 : b2);
      auto winning = f1 == "VALID" ? (b1_first ? p1 : p2) : (b1_first ? p2 : p1);
      auto retry = bid(loser, winning + rng.range(1, 100));
      net->settle();
      retry_ok = retry.ordered() && flag(retry.tx_id) == "VALID" && net->converged();
    }
    if (one_each && retry_ok) {
      ++ok;
    } else if (first.empty()) {
      first = "seed " + std::to_string(seed) + ": " + f1 + "/" + f2;
    }
  }
  return {ok == 200, std::to_string(ok) + "/200 races resolved" + (first.empty() ? "" : "; first failure " + first)};
}

Scenario convergence_scenario(std::size_t peers, std::uint64_t seed, std::size_t blocks) {
  testing::Rng rng(seed);
  Scenario s;
  s.network.peers = peers;
  s.network.required_endorsements = (peers + 1) / 2;
  s.network.orderer.max_batch_size = 1;
  s.network.gossip_latency_ticks = static_cast<std::uint64_t>(rng.range(1, 3));
  s.identities = {{"alice", membership::Role::Member},
                  {"bob", membership::Role::Member},
                  {"dave", membership::Role::Auctioneer}};
  std::uint64_t tick = 0;
  for (std::size_t i = 0; i < blocks; ++i) {
    if (peers > 1 && rng.chance(25)) {
      ScenarioStep f;
      f.tick = tick;
      pipeline::Fault fault;
      fault.kind = rng.chance(50) ? pipeline::FaultKind::Delay : pipeline::FaultKind::Reorder;
      // the anchor can be faulted too; endorsement still needs a majority
      fault.target = "peer" + std::to_string(rng.range(1, static_cast<std::int64_t>(peers) - 1));
      fault.start = tick;
      fault.duration = static_cast<std::uint64_t>(rng.range(2, 8));
      f.fault = fault;
      s.steps.push_back(f);
    }
    s.steps.push_back(invoke(tick, rng.chance(50) ? "alice" : "bob", "create_commodity",
                             Value{{"description", "item " + std::to_string(i)}, {"idealPrice", rng.range(0, 999)}}));
    tick += static_cast<std::uint64_t>(rng.range(1, 2));
  }
  return s;
}

Verdict convergence() {
  std::vector<std::string> parts;
  bool all = true;
  for (std::size_t peers : {1, 3, 5}) {
    int ok = 0;
    std::size_t min_blocks = SIZE_MAX;
    int gaps = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto s = convergence_scenario(peers, seed * 31 + peers, 110);
      auto report = pipeline::run_network(s, seed);
      if (!report) continue;
      bool identical = true;
      for (const auto& chain : report->chains) identical &= chain == report->chains.front();
      std::size_t blocks = report->chains.front().size() - 1;
      min_blocks = std::min(min_blocks, blocks);
      for (const auto& r : report->trace.records()) gaps += r["kind"] == "gap" || r["kind"] == "fault";
      if (report->converged && identical && blocks >= 100) ++ok;
    }
    all &= ok == 3;
    parts.push_back(std::to_string(peers) + " peers: " + std::to_string(ok) + "/3 converged (min " +
                    std::to_string(min_blocks) + " blocks, " + std::to_string(gaps) + " fault/gap events)");
  }
  std::string detail;
  for (const auto& p : parts) detail += (detail.empty() ? "" : "; ") + p;
  return {all, detail};
}

Verdict tamper() {
  auto dir = scratch("tamper");
  Scenario s;
  s.network.orderer.max_batch_size = 1;
  s.identities = {{"alice", membership::Role::Member}};
  for (int i = 0; i < 50; ++i) {
    s.steps.push_back(invoke(static_cast<std::uint64_t>(i) * 2, "alice", "create_commodity",
                             Value{{"description", "piece " + std::to_string(i)}, {"idealPrice", i}}));
  }
  pipeline::RunOptions ro;
  ro.data_dir = dir;
  auto report = pipeline::run_network(s, 1, ro);
  auto registry = pipeline::make_scenario_registry(s, 1);
  if (!report || !registry) return {false, "could not build the log"};
  ledger::LedgerOptions lo;
  lo.data_dir = dir;
  auto led = ledger::Ledger::open(lo, **registry, s.network.policy());
  if (!led || (*led)->height() != 50) return {false, "persisted log does not hold 50 blocks"};
  auto& ledger = **led;
  if (!ledger.verify_chain().ok) return {false, "untouched log fails verification"};

  const auto log = dir / ledger::kBlockLogFile;
  const auto size = fs::file_size(log);
  int fd = ::open(log.c_str(), O_RDWR);
  testing::Rng rng(2026);
  int caught = 0;
  for (int i = 0; i < 500; ++i) {
    auto pos = static_cast<off_t>(rng.range(0, static_cast<std::int64_t>(size) - 1));
    unsigned char orig = 0;
    if (::pread(fd, &orig, 1, pos) != 1) break;
    auto mutated = static_cast<unsigned char>(orig ^ static_cast<unsigned char>(rng.range(1, 255)));
    bool written = ::pwrite(fd, &mutated, 1, pos) == 1;
    if (written && !ledger.verify_chain().ok) ++caught;
    if (::pwrite(fd, &orig, 1, pos) != 1) break;
  }
  ::close(fd);
  bool clean = ledger.verify_chain().ok;
  fs::remove_all(dir);
  return {caught == 500 && clean, std::to_string(caught) + "/500 mutations caught over " +
                                      std::to_string(size) + " bytes"};
}

Verdict provenance_check(bool real_estate) {
  auto dir = scratch(real_estate ? "prov-re" : "prov-art");
  Scenario s;
  s.profile = real_estate ? "real-estate" : "art";
  s.network.peers = 3;
  s.network.required_endorsements = 2;
  s.identities = {{"o0", membership::Role::Member}, {"o1", membership::Role::Member},
                  {"o2", membership::Role::Member}, {"o3", membership::Role::Member},
                  {"o4", membership::Role::Member}, {"o5", membership::Role::Member},
                  {"house", membership::Role::Auctioneer}};
  std::uint64_t t = 0;
  auto next = [&] { return t += 3; };
  s.steps.push_back(invoke(t, "o0", "create_commodity", Value{{"description", "subject"}, {"idealPrice", 100}}, "item"));
  // o0, o2 and o4 renovate before selling
  std::map<int, std::string> renovate_after{{0, "r0"}, {2, "r1"}, {4, "r2"}};
  for (int k = 0; k < 5; ++k) {
    std::string seller = "o" + std::to_string(k), buyer = "o" + std::to_string(k + 1);
    std::string env = "env" + std::to_string(k), lot = "lot" + std::to_string(k);
    if (real_estate && renovate_after.contains(k)) {
      s.steps.push_back(invoke(next(), seller, "add_renovation",
                               Value{{"commodityId", "$item"}, {"date", "202" + std::to_string(k) + "-03-01"},
                                     {"cost", 100 * (k + 1)}, {"description", "work " + std::to_string(k)}},
                               renovate_after[k]));
    }
    s.steps.push_back(invoke(next(), "house", "initiate_auction_environment",
                             Value{{"buyersLst", {"@" + buyer}}, {"sellersLst", {"@" + seller}}, {"auctioneer", "@house"}},
                             env));
    s.steps.push_back(invoke(next(), seller, "create_commodity_listing",
                             Value{{"exchangeName", "X"}, {"commodityId", "$item"}, {"sellerId", "@" + seller},
                                   {"reservePrice", 50}, {"auctionId", "$" + env}},
                             lot));
    s.steps.push_back(invoke(next(), buyer, "make_bid",
                             Value{{"listingId", "$" + lot}, {"potentialBuyer", "@" + buyer}, {"bidPrice", 60 + k}}));
    s.steps.push_back(invoke(next(), "house", "close_bidding", Value{{"listingId", "$" + lot}}));
    s.steps.push_back(invoke(next(), "house", "transfer_assets",
                             Value{{"listingId", "$" + lot}, {"proposedNewOwner", "@" + buyer}}));
  }
  pipeline::RunOptions ro;
  ro.data_dir = dir;
  auto report = pipeline::run_network(s, 5, ro);
  auto registry = pipeline::make_scenario_registry(s, 5);
  if (!report || !registry) return {false, "scenario did not run"};
  ledger::LedgerOptions lo;
  lo.data_dir = dir;
  auto led = ledger::Ledger::open(lo, **registry, s.network.policy());
  if (!led) return {false, led.error().describe()};
  pipeline::LedgerQueryView view(**led);
  auto prov = chaincode::query("get_provenance", Value{{"commodityId", report->bindings.at("item")}}, view);
  fs::remove_all(dir);
  if (!prov) return {false, prov.error().describe()};

  // expected versions straight from the ledger index of each step's tx
  auto version_of = [&](std::size_t step) {
    auto loc = (*led)->find_tx(report->outcomes.at(step).tx_id);
    return loc ? loc->position.to_record() : Value(nullptr);
  };
  std::map<std::string, std::size_t> step_of_bind;
  std::vector<std::size_t> transfer_steps;
  for (std::size_t i = 0; i < report->outcomes.size(); ++i) {
    const auto& st = s.steps[report->outcomes[i].step_index];
    if (st.bind) step_of_bind[*st.bind] = i;
    if (st.operation == "transfer_assets") transfer_steps.push_back(i);
  }

  const auto& hist = (*prov)["ownershipHistory"];
  bool ok = hist.size() == 6 && hist[0]["viaListingId"] == "GENESIS" &&
            hist[0]["owner"] == report->identities.at("o0");
  for (std::size_t k = 0; ok && k < 5 && k + 1 < hist.size(); ++k) {
    ok &= hist[k + 1]["viaListingId"] == report->bindings.at("lot" + std::to_string(k));
    ok &= hist[k + 1]["owner"] == report->identities.at("o" + std::to_string(k + 1));
    ok &= hist[k + 1]["acquiredAtVersion"] == version_of(transfer_steps.at(k));
  }
  std::string detail = "history length " + std::to_string(hist.size());
  if (real_estate) {
    const auto& ren = (*prov)["renovations"];
    ok &= ren.size() == 3;
    for (std::size_t i = 0; ok && i < ren.size(); ++i) {
      ok &= ren[i]["version"] == version_of(step_of_bind.at("r" + std::to_string(i)));
    }
    std::vector<std::string> kinds;
    for (const auto& e : (*prov)["timeline"]) kinds.push_back(e["kind"]);
    std::vector<std::string> expected{"OWNERSHIP", "RENOVATION", "OWNERSHIP", "OWNERSHIP", "RENOVATION",
                                      "OWNERSHIP", "OWNERSHIP", "RENOVATION", "OWNERSHIP"};
    ok &= kinds == expected;
    detail += ", " + std::to_string(ren.size()) + " renovations interleaved";
  }
  return {ok, detail};
}

Verdict provenance() {
  auto art = provenance_check(false);
  auto re = provenance_check(true);
  return {art.pass && re.pass, "art: " + art.detail + "; real-estate: " + re.detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Verdict determinism() {
  auto dir = scratch("determinism");
  fs::create_directories(dir);
  int identical = 0, total = 0;
  for (auto name : {"art_auction.json", "real_estate.json", "contention.json"}) {
    std::string reference;
    for (int run = 0; run < 5; ++run) {
      auto trace = dir / (std::string(name) + "." + std::to_string(run));
      auto cmd = std::string(NFTL_BIN) + " scenario --scenario " + NFTL_SOURCE_DIR + "/scenarios/" + name +
                 " --seed 13 --trace " + trace.string() + " > /dev/null 2>&1";
      int status = std::system(cmd.c_str());
      auto bytes = slurp(trace);
      if (run == 0) reference = bytes;
      ++total;
      identical += status == 0 && !bytes.empty() && bytes == reference;
    }
  }
  fs::remove_all(dir);
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " runs byte-identical to the first run of their scenario"};
}

Verdict authorization() {
  // Fault-injected multi-peer fuzz runs on top of the sequential suite.
  for (std::uint64_t seed = 5001; seed <= 5100; ++seed) {
    testing::GeneratorOptions opts;
    opts.network.peers = 3;
    opts.network.required_endorsements = 2;
    opts.fault_percent = 15;
    auto s = testing::generate_scenario(seed, opts);
    auto report = pipeline::run_network(s, seed);
    if (report) tally_authorization(*report, testing::run_oracle(s, seed), g_fuzz);
  }
  const auto& t = g_fuzz;
  return {t.authorization_leaks == 0 && t.unauthorized_closes > 0 && t.self_bids > 0,
          std::to_string(t.unauthorized_closes) + " unauthorized closes and " +
              std::to_string(t.self_bids) + " self-bids, " + std::to_string(t.authorization_leaks) +
              " reached the orderer"};
}

struct Criterion {
  const char* name;
  std::function<Verdict()> run;
  double budget_seconds;  // 0: no time bound
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"operation-conformance", conformance, 10},
      {"oracle-equivalence", oracle_equivalence, 120},
      {"contention", contention, 0},
      {"convergence", convergence, 0},
      {"tamper-detection", tamper, 0},
      {"provenance", provenance, 0},
      {"determinism", determinism, 0},
      {"authorization", authorization, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    bool in_time = c.budget_seconds == 0 || secs < c.budget_seconds;
    if (!in_time) v.detail += "; over the time budget";
    bool pass = v.pass && in_time;
    failures += !pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << v.detail << " (" << timing;
    if (c.budget_seconds > 0) std::cout << ", limit " << c.budget_seconds << "s";
    std::cout << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
