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

#include <atomic>
#include <thread>
#include <vector>

#include "nftl/common/digest.hpp"
#include "nftl/membership/registry.hpp"

namespace nftl::membership {
namespace {

TEST(Registry, IdentityIdsAndKeysFollowTheSeed) {
  // Values computed with Python hashlib/hmac from seed "s".
  Registry r("s");
  auto alice = r.register_identity("alice", Role::Member);
  ASSERT_TRUE(alice.ok());
  EXPECT_EQ(alice->identity_id, "id-5660d85ab7273326");
  EXPECT_EQ(r.export_key_hex(alice->identity_id),
            "5e7b994650b69546b59598e67843771a45e9607a6d0c3d12e917f7c265fa1a2d");
  auto sig = r.sign_payload(alice->identity_id, "payload");
  ASSERT_TRUE(sig.ok());
  EXPECT_EQ(sig->bytes, "b835ad8833696345b9af7d091b3f37ce504d17a294a1ff1a6f8fc502f4503015");
}

TEST(Registry, ReplayedRegistrationYieldsSameIds) {
  Registry a("seed"), b("seed"), c("other");
  auto x = a.register_identity("bob", Role::Member)->identity_id;
  EXPECT_EQ(b.register_identity("bob", Role::Member)->identity_id, x);
  EXPECT_NE(c.register_identity("bob", Role::Member)->identity_id, x);
}

TEST(Registry, SameDisplayNameGetsDistinctIds) {
  Registry r("seed");
  auto a = r.register_identity("sam", Role::Member)->identity_id;
  auto b = r.register_identity("sam", Role::Member)->identity_id;
  EXPECT_NE(a, b);
  EXPECT_EQ(r.size(), 2u);
}

TEST(Registry, EmptyNameRejected) {
  Registry r("seed");
  auto res = r.register_identity("   ", Role::Member);
  ASSERT_FALSE(res.ok());
  EXPECT_EQ(res.error().code, Errc::EMPTY_NAME);
  EXPECT_EQ(r.size(), 0u);
}

TEST(Registry, NameIsTrimmed) {
  Registry r("seed");
  auto id = r.register_identity("  carol ", Role::Member)->identity_id;
  EXPECT_EQ(r.find(id)->display_name, "carol");
  EXPECT_EQ(r.find_by_name("carol")->identity_id, id);
}

TEST(Registry, RequireRole) {
  Registry r("seed");
  auto m = r.register_identity("m", Role::Member)->identity_id;
  auto a = r.register_identity("a", Role::Auctioneer)->identity_id;
  EXPECT_TRUE(r.require_role(m, Role::Member).ok());
  EXPECT_TRUE(r.require_role(a, Role::Auctioneer).ok());
  auto mismatch = r.require_role(m, Role::Auctioneer);
  ASSERT_FALSE(mismatch.ok());
  EXPECT_EQ(mismatch.error().code, Errc::ROLE_MISMATCH);
  auto unknown = r.require_role("id-0000000000000000", Role::Member);
  ASSERT_FALSE(unknown.ok());
  EXPECT_EQ(unknown.error().code, Errc::UNKNOWN_IDENTITY);
}

TEST(Registry, NodesSignButHoldNoRole) {
  Registry r("seed");
  ASSERT_TRUE(r.register_node("peer0").ok());
  EXPECT_TRUE(r.is_node("peer0"));
  auto sig = r.sign_payload("peer0", "block");
  ASSERT_TRUE(sig.ok());
  EXPECT_TRUE(r.verify_signature("peer0", "block", *sig));
  EXPECT_FALSE(r.find("peer0").has_value());
  EXPECT_EQ(r.require_role("peer0", Role::Member).error().code, Errc::UNKNOWN_IDENTITY);
  EXPECT_EQ(r.register_node("").error().code, Errc::EMPTY_NAME);
}

TEST(Registry, SignatureChecks) {
  Registry r("seed");
  auto a = r.register_identity("a", Role::Member)->identity_id;
  auto b = r.register_identity("b", Role::Member)->identity_id;
  auto sig = r.sign_payload(a, "hello").value();
  EXPECT_TRUE(r.verify_signature(a, "hello", sig));
  EXPECT_FALSE(r.verify_signature(a, "hello!", sig));
  EXPECT_FALSE(r.verify_signature(b, "hello", sig));
  auto relabeled = sig;
  relabeled.signer_id = b;
  EXPECT_FALSE(r.verify_signature(b, "hello", relabeled));
  auto flipped = sig;
  flipped.bytes[0] = flipped.bytes[0] == '0' ? '1' : '0';
  EXPECT_FALSE(r.verify_signature(a, "hello", flipped));
  EXPECT_EQ(r.sign_payload("id-unknown", "x").error().code, Errc::UNKNOWN_IDENTITY);
}

TEST(Registry, ExportedKeyLetsClientsSign) {
  Registry r("seed");
  auto a = r.register_identity("a", Role::Member)->identity_id;
  auto key = from_hex(*r.export_key_hex(a));
  ASSERT_TRUE(key.has_value());
  Signature client{a, to_hex(hmac_sha256(*key, "body"))};
  EXPECT_TRUE(r.verify_signature(a, "body", client));
  EXPECT_FALSE(r.export_key_hex("nobody").has_value());
}

TEST(Registry, RecordRoundTrip) {
  Registry r("seed");
  auto a = r.register_identity("a", Role::Auctioneer)->identity_id;
  ASSERT_TRUE(r.register_node("peer0").ok());
  auto loaded = Registry::load(r.to_record());
  ASSERT_TRUE(loaded.ok());
  EXPECT_EQ((*loaded)->to_record(), r.to_record());
  EXPECT_EQ((*loaded)->find(a)->role, Role::Auctioneer);
  auto sig = r.sign_payload(a, "x").value();
  EXPECT_TRUE((*loaded)->verify_signature(a, "x", sig));
  EXPECT_TRUE((*loaded)->is_node("peer0"));

  Value bad = r.to_record();
  bad["scheme"] = "rot13";
  EXPECT_EQ(Registry::load(bad).error().code, Errc::INVALID_CONFIG);
}

TEST(Registry, ConcurrentRegistrationAndVerification) {
  Registry r("seed");
  auto base = r.register_identity("base", Role::Member)->identity_id;
  auto sig = r.sign_payload(base, "p").value();
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) {
        if (!r.register_identity("u" + std::to_string(t) + "-" + std::to_string(i), Role::Member))
          ++failures;
        if (!r.verify_signature(base, "p", sig)) ++failures;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(r.size(), 201u);
}

TEST(Roles, TextRoundTrip) {
  EXPECT_EQ(to_string(Role::Auctioneer), "AUCTIONEER");
  EXPECT_EQ(role_from_string("MEMBER"), Role::Member);
  EXPECT_FALSE(role_from_string("ADMIN").has_value());
}

}  // namespace
}  // namespace nftl::membership
