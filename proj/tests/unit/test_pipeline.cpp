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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "generator.hpp"
#include "oracle.hpp"
#include "nftl/pipeline/network.hpp"
#include "nftl/pipeline/scenario.hpp"
#include "nftl/pipeline/store.hpp"

namespace nftl::pipeline {
namespace {

namespace fs = std::filesystem;
using ledger::ValidityFlag;

fs::path source_path(const std::string& rel) { return fs::path(NFTL_SOURCE_DIR) / rel; }

ledger::TransactionEnvelope dummy_envelope(int i) {
  ledger::TransactionEnvelope e;
  e.tx_id = "tx" + std::to_string(i);
  e.creator = "c";
  e.operation = "create_commodity";
  return e;
}

TEST(Orderer, CutsFullBatchesImmediatelyAndTheRestOnTimeout) {
  auto genesis = ledger::make_genesis_block();
  SoloOrderer o({2, 1}, 0, ledger::compute_block_hash(genesis));
  std::vector<ledger::Block> blocks;
  for (int i = 0; i < 5; ++i) {
    for (auto& b : o.submit(dummy_envelope(i), 0)) blocks.push_back(std::move(b));
  }
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(o.pending(), 1u);
  EXPECT_TRUE(o.on_tick(0).empty());
  for (auto& b : o.on_tick(1)) blocks.push_back(std::move(b));
  ASSERT_EQ(blocks.size(), 3u);
  EXPECT_EQ(blocks[0].envelopes.size(), 2u);
  EXPECT_EQ(blocks[1].envelopes.size(), 2u);
  EXPECT_EQ(blocks[2].envelopes.size(), 1u);
  auto prev = ledger::compute_block_hash(genesis);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    EXPECT_EQ(blocks[i].number, i + 1);
    EXPECT_EQ(blocks[i].prev_hash, prev);
    EXPECT_EQ(blocks[i].data_hash, ledger::compute_data_hash(blocks[i].envelopes));
    prev = ledger::compute_block_hash(blocks[i]);
  }
  EXPECT_EQ(blocks[2].envelopes[0].tx_id, "tx4");
}

TEST(Orderer, WaitsForTheTimeout) {
  SoloOrderer o({10, 3}, 0, Digest{});
  EXPECT_TRUE(o.submit(dummy_envelope(0), 5).empty());
  EXPECT_TRUE(o.on_tick(6).empty());
  EXPECT_TRUE(o.on_tick(7).empty());
  EXPECT_EQ(o.on_tick(8).size(), 1u);
  EXPECT_TRUE(o.on_tick(20).empty());
}

TEST(Orderer, RejectsBadConfig) {
  EXPECT_EQ((OrdererConfig{0, 1}).check().error().code, Errc::INVALID_CONFIG);
  EXPECT_EQ((OrdererConfig{1, 0}).check().error().code, Errc::INVALID_CONFIG);
}

TEST(NetworkConfigTest, RecordRoundTripAndChecks) {
  NetworkConfig c;
  c.peers = 3;
  c.required_endorsements = 2;
  c.endorsers = 3;
  c.orderer.max_batch_size = 4;
  auto back = NetworkConfig::from_record(c.to_record());
  EXPECT_EQ(back.to_record(), c.to_record());
  EXPECT_EQ(c.policy().endorsers, (std::vector<std::string>{"peer0", "peer1", "peer2"}));
  NetworkConfig bad = c;
  bad.required_endorsements = 4;
  EXPECT_EQ(bad.check().error().code, Errc::INVALID_CONFIG);
  bad = c;
  bad.endorsers = 5;
  EXPECT_EQ(bad.check().error().code, Errc::INVALID_CONFIG);
  bad = c;
  bad.peers = 0;
  EXPECT_EQ(bad.check().error().code, Errc::INVALID_CONFIG);
}

class NetworkTest : public ::testing::Test {
 protected:
  NetworkTest() : registry("network-test") {
    alice = registry.register_identity("alice", membership::Role::Member)->identity_id;
    bob = registry.register_identity("bob", membership::Role::Member)->identity_id;
    carol = registry.register_identity("carol", membership::Role::Member)->identity_id;
    dave = registry.register_identity("dave", membership::Role::Auctioneer)->identity_id;
  }

  std::unique_ptr<Network> make(std::size_t peers, std::size_t m, std::size_t n = 0,
                                OrdererConfig orderer = {}) {
    NetworkConfig c;
    c.peers = peers;
    c.required_endorsements = m;
    c.endorsers = n;
    c.orderer = orderer;
    EXPECT_TRUE(register_nodes(registry, c).ok());
    Network::Options o;
    o.config = c;
    o.seed = 11;
    auto net = Network::create(o, registry);
    EXPECT_TRUE(net.ok()) << (net.ok() ? "" : net.error().describe());
    return std::move(net).value();
  }

  SubmitResult submit(Network& net, const std::string& who, std::string op, Value args) {
    auto p = sign_proposal(registry, who, std::move(op), std::move(args),
                           "nonce-" + std::to_string(++nonce));
    EXPECT_TRUE(p.ok());
    return net.submit(*p);
  }

  std::string create(Network& net, const std::string& owner, const std::string& profile = "art") {
    auto r = submit(net, owner, "create_commodity",
                    Value{{"description", "x"}, {"idealPrice", 10}, {"profile", profile}});
    EXPECT_TRUE(r.ordered());
    return r.result.value("commodityId", "");
  }

  static std::optional<ValidityFlag> flag(const Network& net, const std::string& tx) {
    auto loc = net.anchor().find_tx(tx);
    if (!loc) return std::nullopt;
    return loc->flag;
  }

  membership::Registry registry;
  std::string alice, bob, carol, dave;
  int nonce = 0;
};

TEST_F(NetworkTest, OrderedProposalCommitsEverywhere) {
  auto net = make(3, 2);
  auto r = submit(*net, alice, "create_commodity", Value{{"description", "d"}, {"idealPrice", 1}});
  ASSERT_TRUE(r.ordered());
  EXPECT_EQ(r.endorser_outcomes.size(), 3u);
  ASSERT_TRUE(net->settle());
  EXPECT_EQ(flag(*net, r.tx_id), ValidityFlag::Valid);
  EXPECT_TRUE(net->converged());
  for (std::size_t i = 0; i < net->peer_count(); ++i) EXPECT_EQ(net->peer_ledger(i).height(), 1u);
  auto prov = net->query("get_provenance", Value{{"commodityId", r.result["commodityId"]}});
  ASSERT_TRUE(prov.ok());
  EXPECT_EQ((*prov)["owner"], alice);
}

TEST_F(NetworkTest, BadClientSignatureIsRejectedBeforeEndorsement) {
  auto net = make(1, 1);
  auto p = sign_proposal(registry, alice, "create_commodity",
                         Value{{"description", "d"}, {"idealPrice", 1}}, "n").value();
  p.args["idealPrice"] = 2;
  auto r = net->submit(p);
  EXPECT_EQ(r.rejection, Rejection::BadSignature);
  EXPECT_EQ(r.client_code(), Errc::BAD_SIGNATURE);
  EXPECT_TRUE(r.endorser_outcomes.empty());
  net->settle();
  EXPECT_EQ(net->anchor().height(), 0u);

  auto q = sign_proposal(registry, alice, "create_commodity",
                         Value{{"description", "d"}, {"idealPrice", 1}}, "n").value();
  q.creator = bob;
  EXPECT_EQ(net->submit(q).rejection, Rejection::BadSignature);
}

TEST_F(NetworkTest, ChaincodeErrorNeverReachesTheOrderer) {
  auto net = make(3, 2);
  auto c = create(*net, alice);
  auto a = submit(*net, dave, "initiate_auction_environment",
                  Value{{"buyersLst", {bob, carol}}, {"sellersLst", {alice}}, {"auctioneer", dave}});
  net->settle();
  auto l = submit(*net, alice, "create_commodity_listing",
                  Value{{"exchangeName", "X"}, {"commodityId", c}, {"sellerId", alice},
                        {"reservePrice", 10}, {"auctionId", a.result["auctionId"]}});
  net->settle();
  auto lid = l.result["listingId"];
  ASSERT_TRUE(submit(*net, bob, "make_bid",
                     Value{{"listingId", lid}, {"potentialBuyer", bob}, {"bidPrice", 50}}).ordered());
  net->settle();
  auto height = net->anchor().height();
  auto low = submit(*net, carol, "make_bid",
                    Value{{"listingId", lid}, {"potentialBuyer", carol}, {"bidPrice", 50}});
  EXPECT_EQ(low.rejection, Rejection::ChaincodeError);
  EXPECT_EQ(low.client_code(), Errc::BID_TOO_LOW);
  for (const auto& [peer, outcome] : low.endorser_outcomes) EXPECT_EQ(outcome, "BID_TOO_LOW");
  net->settle();
  EXPECT_EQ(net->anchor().height(), height);
  EXPECT_FALSE(net->anchor().find_tx(low.tx_id).has_value());
}

TEST_F(NetworkTest, DroppedEndorsementsCauseShortfall) {
  auto net = make(3, 2);
  net->inject(Fault{FaultKind::DropEndorsement, "peer1", net->now(), 5});
  net->inject(Fault{FaultKind::DropEndorsement, "peer2", net->now(), 5});
  auto r = submit(*net, alice, "create_commodity", Value{{"description", "d"}, {"idealPrice", 1}});
  EXPECT_EQ(r.rejection, Rejection::EndorsementShortfall);
  EXPECT_EQ(r.client_code(), Errc::ENDORSEMENT_SHORTFALL);
  EXPECT_EQ(r.endorser_outcomes[1].second, "DROPPED");
  EXPECT_EQ(r.endorser_outcomes[2].second, "DROPPED");
  for (int i = 0; i < 5; ++i) net->step();
  EXPECT_TRUE(submit(*net, alice, "create_commodity", Value{{"description", "d"}, {"idealPrice", 1}})
                  .ordered());
}

TEST_F(NetworkTest, StaleEndorserIsOutvoted) {
  auto net = make(3, 2);
  auto c = create(*net, alice, "real-estate");
  net->inject(Fault{FaultKind::Delay, "peer2", net->now(), 50});
  for (int i = 0; i < 5; ++i) net->step();
  ASSERT_EQ(net->peer_ledger(1).height(), 1u);
  ASSERT_EQ(net->peer_ledger(2).height(), 0u);
  auto r = submit(*net, alice, "add_renovation",
                  Value{{"commodityId", c}, {"date", "2024-01-01"}, {"cost", 1}, {"description", "x"}});
  ASSERT_TRUE(r.ordered());
  EXPECT_EQ(r.endorser_outcomes[2].second, "UNKNOWN_COMMODITY");
  ASSERT_TRUE(net->settle());
  EXPECT_EQ(flag(*net, r.tx_id), ValidityFlag::Valid);
  EXPECT_TRUE(net->converged());
}

TEST_F(NetworkTest, StaleEndorserBlocksUnanimousPolicy) {
  auto net = make(3, 3);
  auto c = create(*net, alice, "real-estate");
  net->inject(Fault{FaultKind::Delay, "peer2", net->now(), 50});
  for (int i = 0; i < 5; ++i) net->step();
  auto r = submit(*net, alice, "add_renovation",
                  Value{{"commodityId", c}, {"date", "2024-01-01"}, {"cost", 1}, {"description", "x"}});
  EXPECT_EQ(r.rejection, Rejection::EndorsementShortfall);
}

TEST_F(NetworkTest, ReorderedDeliveryIsRepairedByBackfill) {
  auto net = make(2, 1, 0, OrdererConfig{1, 1});
  net->inject(Fault{FaultKind::Reorder, "peer1", 0, 8});
  for (int i = 0; i < 3; ++i) {
    create(*net, alice);
    net->step();
    net->step();
  }
  ASSERT_TRUE(net->settle());
  bool gap = false, backfill = false;
  for (const auto& r : net->trace().records()) {
    if (r["kind"] == "gap") {
      gap = true;
      EXPECT_EQ(r["error"], "GAP_DETECTED");
    }
    if (r["kind"] == "backfill") backfill = true;
  }
  EXPECT_TRUE(gap);
  EXPECT_TRUE(backfill);
  EXPECT_TRUE(net->converged());
  EXPECT_EQ(net->peer_ledger(1).height(), 3u);
}

TEST_F(NetworkTest, DelayedPeerCatchesUp) {
  auto net = make(3, 1, 1);
  net->inject(Fault{FaultKind::Delay, "peer2", 0, 20});
  for (int i = 0; i < 4; ++i) {
    create(*net, alice);
    net->step();
  }
  EXPECT_LT(net->peer_ledger(2).height(), net->anchor().height());
  ASSERT_TRUE(net->settle());
  EXPECT_TRUE(net->converged());
}

TEST_F(NetworkTest, ConflictingBidsInOneBlock) {
  auto net = make(1, 1, 0, OrdererConfig{2, 1});
  auto c = create(*net, alice);
  auto a = submit(*net, dave, "initiate_auction_environment",
                  Value{{"buyersLst", {bob, carol}}, {"sellersLst", {alice}}, {"auctioneer", dave}});
  net->settle();
  auto l = submit(*net, alice, "create_commodity_listing",
                  Value{{"exchangeName", "X"}, {"commodityId", c}, {"sellerId", alice},
                        {"reservePrice", 10}, {"auctionId", a.result["auctionId"]}});
  net->settle();
  auto lid = l.result["listingId"];
  auto b1 = submit(*net, bob, "make_bid", Value{{"listingId", lid}, {"potentialBuyer", bob}, {"bidPrice", 70}});
  auto b2 = submit(*net, carol, "make_bid", Value{{"listingId", lid}, {"potentialBuyer", carol}, {"bidPrice", 70}});
  ASSERT_TRUE(b1.ordered());
  ASSERT_TRUE(b2.ordered());
  net->settle();
  EXPECT_EQ(flag(*net, b1.tx_id), ValidityFlag::Valid);
  EXPECT_EQ(flag(*net, b2.tx_id), ValidityFlag::MvccConflict);
  auto b3 = submit(*net, carol, "make_bid", Value{{"listingId", lid}, {"potentialBuyer", carol}, {"bidPrice", 75}});
  net->settle();
  EXPECT_EQ(flag(*net, b3.tx_id), ValidityFlag::Valid);
}

TEST_F(NetworkTest, PersistedAnchorRecoversAndFollowersBackfill) {
  auto dir = fs::temp_directory_path() / ("nftl-net-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  NetworkConfig c;
  c.peers = 2;
  c.orderer.max_batch_size = 1;
  ASSERT_TRUE(register_nodes(registry, c).ok());
  {
    Network::Options o;
    o.config = c;
    o.anchor_data_dir = dir;
    auto net = Network::create(o, registry).value();
    create(*net, alice);
    create(*net, bob);
    net->settle();
  }
  Network::Options o;
  o.config = c;
  o.anchor_data_dir = dir;
  auto net = Network::create(o, registry).value();
  EXPECT_EQ(net->anchor().height(), 2u);
  EXPECT_EQ(net->peer_ledger(1).height(), 2u);
  EXPECT_TRUE(net->converged());
  create(*net, carol);
  net->settle();
  EXPECT_EQ(net->anchor().height(), 3u);
  fs::remove_all(dir);
}

// ---- scenarios ----

TEST(ScenarioParse, SyntaxErrorNamesLineAndColumn) {
  auto r = parse_scenario("{\n  \"identities\": [\n    {\"name\": }\n  ]\n}");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, Errc::SCENARIO_PARSE_ERROR);
  EXPECT_EQ(r.error().message.rfind("line 3, column 14", 0), 0u) << r.error().message;
}

TEST(ScenarioParse, StructuralErrorNamesThePath) {
  auto r = parse_scenario(R"({"identities": [{"name": "a", "role": "MEMBER"}],
    "steps": [{"tick": 0, "actor": "a", "operation": "create_commodity"},
              {"tick": 1, "actor": "a", "operation": "create_commodity"},
              {"tick": 2, "actor": "a", "operation": "mint_money"}]})");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().message.rfind("$.steps[2].operation: ", 0), 0u) << r.error().message;

  auto unknown_actor = parse_scenario(R"({"identities": [], "steps": [{"tick": 0, "actor": "x", "operation": "make_bid"}]})");
  EXPECT_EQ(unknown_actor.error().message.rfind("$.steps[0].actor", 0), 0u);

  auto bad_role = parse_scenario(R"({"identities": [{"name": "a", "role": "KING"}], "steps": []})");
  EXPECT_EQ(bad_role.error().message.rfind("$.identities[0].role", 0), 0u);

  auto bad_policy = parse_scenario(R"({"network": {"peers": 2, "policy": {"required": 3}}, "identities": [], "steps": []})");
  EXPECT_EQ(bad_policy.error().message.rfind("$.network", 0), 0u);

  auto bad_fault = parse_scenario(R"({"identities": [], "steps": [{"tick": 0, "fault": "delay", "target": "peer9"}]})");
  EXPECT_EQ(bad_fault.error().message.rfind("$.steps[0].target", 0), 0u);

  auto query_step = parse_scenario(R"({"identities": [{"name": "a", "role": "MEMBER"}], "steps": [{"tick": 0, "actor": "a", "operation": "get_provenance"}]})");
  EXPECT_EQ(query_step.error().code, Errc::SCENARIO_PARSE_ERROR);

  auto extra = parse_scenario(R"({"identities": [], "steps": [], "bogus": 1})");
  EXPECT_EQ(extra.error().message.rfind("$.bogus", 0), 0u);
}

TEST(ScenarioParse, BundledScenariosLoad) {
  for (auto name : {"art_auction.json", "real_estate.json", "contention.json"}) {
    auto s = load_scenario(source_path(std::string("scenarios/") + name));
    ASSERT_TRUE(s.ok()) << name << ": " << s.error().describe();
    EXPECT_FALSE(s->steps.empty());
  }
  EXPECT_EQ(load_scenario("/nonexistent/x.json").error().code, Errc::IO_ERROR);
}

TEST(ScenarioReferences, Resolve) {
  std::map<std::string, std::string> ids{{"alice", "id-1"}};
  std::map<std::string, std::string> binds{{"c", "commodity-9"}};
  auto r = resolve_references(Value{{"x", "@alice"}, {"y", {"$c", 5, "plain"}}}, ids, binds);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(*r, (Value{{"x", "id-1"}, {"y", {"commodity-9", 5, "plain"}}}));
  EXPECT_EQ(resolve_references(Value("$missing"), ids, binds).error().code, Errc::BAD_ARGS);
}

TEST(ScenarioRun, BundledScenariosPass) {
  for (auto name : {"art_auction.json", "real_estate.json", "contention.json"}) {
    auto s = load_scenario(source_path(std::string("scenarios/") + name)).value();
    auto report = run_network(s, 7);
    ASSERT_TRUE(report.ok()) << name;
    EXPECT_TRUE(report->converged) << name;
    for (const auto& d : report->diffs) ADD_FAILURE() << name << ": " << d.describe();
  }
}

TEST(ScenarioRun, SameSeedSameTrace) {
  auto s = load_scenario(source_path("scenarios/art_auction.json")).value();
  auto a = run_network(s, 42).value();
  auto b = run_network(s, 42).value();
  EXPECT_EQ(a.trace.render(), b.trace.render());
  EXPECT_EQ(a.chains, b.chains);
}

TEST(ScenarioRun, WrongWinnerExpectationIsReported) {
  auto s = load_scenario(source_path("tests/data/wrong_winner.json")).value();
  auto report = run_network(s, 7).value();
  ASSERT_EQ(report.diffs.size(), 1u);
  EXPECT_EQ(report.diffs[0].field, "doneBuyer");
  EXPECT_EQ(report.diffs[0].expected, report.identities.at("carol"));
  EXPECT_EQ(report.diffs[0].actual, report.identities.at("bob"));
  EXPECT_NE(report.diffs[0].describe().find("doneBuyer"), std::string::npos);
  EXPECT_FALSE(report.passed());
}

TEST(ScenarioRun, StepExpectationMismatchIsReported) {
  auto s = load_scenario(source_path("scenarios/art_auction.json")).value();
  s.steps[5].expect_error = "SELF_BID";  // actually BID_TOO_LOW
  auto report = run_network(s, 7).value();
  ASSERT_EQ(report.diffs.size(), 1u);
  EXPECT_EQ(report.diffs[0].subject, "step 5");
  EXPECT_EQ(report.diffs[0].expected, "SELF_BID");
  EXPECT_EQ(report.diffs[0].actual, "BID_TOO_LOW");
}

TEST(ScenarioRun, TraceLinesAreCanonical) {
  auto s = load_scenario(source_path("scenarios/contention.json")).value();
  auto report = run_network(s, 3).value();
  std::istringstream lines(report.trace.render());
  std::string line;
  std::uint64_t seq = 0;
  while (std::getline(lines, line)) {
    auto rec = parse_canonical(line);
    ASSERT_TRUE(rec.ok()) << line;
    EXPECT_EQ((*rec)["seq"], seq++);
  }
  EXPECT_GT(seq, 10u);
}

TEST(ScenarioRun, GeneratedWorkloadsMatchTheOracle) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    testing::GeneratorOptions opts;
    opts.max_ops = 30;
    auto s = testing::generate_scenario(seed, opts);
    auto report = run_network(s, seed).value();
    auto oracle = testing::run_oracle(s, seed);
    EXPECT_EQ(report.world_state->content_bytes(), oracle.content) << "seed " << seed;
    EXPECT_EQ(report.bindings, oracle.bindings) << "seed " << seed;
  }
}

TEST(ScenarioRun, FaultyMultiPeerWorkloadsConverge) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    testing::GeneratorOptions opts;
    opts.max_ops = 30;
    opts.network.peers = 3;
    opts.network.required_endorsements = 2;
    opts.fault_percent = 20;
    auto s = testing::generate_scenario(seed, opts);
    auto report = run_network(s, seed).value();
    EXPECT_TRUE(report.converged) << "seed " << seed;
  }
}

TEST(Store, CreatesThenReloads) {
  auto dir = fs::temp_directory_path() / ("nftl-store-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  NetworkConfig c;
  c.peers = 2;
  {
    auto s = open_store(dir, c, "seed-x");
    ASSERT_TRUE(s.ok());
    EXPECT_TRUE(s->created);
    ASSERT_TRUE(s->registry->register_identity("a", membership::Role::Member).ok());
    ASSERT_TRUE(save_registry(dir, *s->registry).ok());
  }
  NetworkConfig other;
  other.peers = 5;
  auto s = open_store(dir, other, "seed-y");
  ASSERT_TRUE(s.ok());
  EXPECT_FALSE(s->created);
  EXPECT_EQ(s->config.peers, 2u);
  EXPECT_EQ(s->registry->size(), 1u);
  EXPECT_TRUE(s->registry->is_node("peer1"));
  auto loaded = load_store(dir);
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ(loaded->registry->to_record(), s->registry->to_record());
  EXPECT_FALSE(load_store(dir / "missing").ok());
  fs::remove_all(dir);
}

}  // namespace
}  // namespace nftl::pipeline
