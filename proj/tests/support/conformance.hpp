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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oracle.hpp"

namespace nftl::testing {

/// Fresh registry (three members, two auctioneers) and an empty state.
struct Fixture {
  Fixture();

  Result<Value> run(const std::string& caller, std::string_view operation, Value args);

  std::string commodity(const std::string& owner, const std::string& profile = "art");
  std::string auction(const std::vector<std::string>& buyers,
                      const std::vector<std::string>& sellers, const std::string& auctioneer);
  std::string listing(const std::string& seller, const std::string& commodity_id,
                      const std::string& auction_id, std::int64_t reserve);
  Result<Value> bid(const std::string& buyer, const std::string& listing_id, std::int64_t price);

  Value listing_record(const std::string& id) const;
  Value commodity_record(const std::string& id) const;

  membership::Registry registry;
  DirectApplyOracle state;
  std::string alice, bob, carol, dave, erin;  // dave and erin are auctioneers
  std::uint64_t counter = 0;
};

/// One checked rule of an operation. Returns a failure description, or
/// nothing when the rule holds.
struct ConformanceCase {
  std::string name;
  std::function<std::optional<std::string>(Fixture&)> check;
};

std::vector<ConformanceCase> conformance_cases();

}  // namespace nftl::testing
