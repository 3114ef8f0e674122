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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nftl/pipeline/network.hpp"

namespace nftl::pipeline {

struct IdentitySpec {
  std::string name;
  membership::Role role = membership::Role::Member;
};

/// One scheduled action. Invocation steps run `operation` as `actor`;
/// fault steps start a fault window on `target`.
///
/// In args and expectations, "@name" stands for the id of identity `name`
/// and "$name" for the primary id returned by the step bound as `name`.
struct ScenarioStep {
  std::uint64_t tick = 0;
  std::optional<Fault> fault;

  std::string actor;
  std::string operation;
  Value args = Value::object();
  std::optional<std::string> bind;
  std::optional<std::string> nonce;
  /// Expected rejection code at submission (e.g. BID_TOO_LOW).
  std::optional<std::string> expect_error;
  /// Expected validity flag once committed (e.g. MVCC_CONFLICT).
  std::optional<std::string> expect_flag;
};

/// Expected final fields of one listing or commodity.
struct Expectation {
  std::string entity;  // "listing" or "commodity"
  std::string ref;     // "$name" or a literal id
  /// Field name to expected value. Besides stored fields, commodities accept
  /// historyLength and renovations (counts).
  std::map<std::string, Value> fields;
};

struct Scenario {
  std::string profile = "art";
  NetworkConfig network;
  std::vector<IdentitySpec> identities;
  std::vector<ScenarioStep> steps;
  std::vector<Expectation> expectations;
};

/// Parses scenario text. Errors are SCENARIO_PARSE_ERROR; syntax errors
/// carry "line L, column C", structural ones the path of the bad field.
Result<Scenario> parse_scenario(std::string_view text);
Result<Scenario> load_scenario(const std::filesystem::path& path);

struct StepOutcome {
  std::size_t step_index = 0;
  std::string tx_id;
  SubmitResult submit;
  std::optional<ledger::ValidityFlag> flag;  // once committed
};

struct ExpectationDiff {
  std::string subject;  // e.g. "listing $l1"
  std::string field;
  Value expected;
  Value actual;

  std::string describe() const;
};

struct RunOptions {
  std::optional<std::filesystem::path> data_dir;
  std::uint64_t max_settle_ticks = 100'000;
};

struct RunReport {
  Trace trace;
  /// Every peer's chain, serialized block by block.
  std::vector<std::vector<std::string>> chains;
  std::shared_ptr<const ledger::WorldState> world_state;
  std::vector<StepOutcome> outcomes;
  std::map<std::string, std::string> bindings;
  std::map<std::string, std::string> identities;  // name -> id
  std::vector<ExpectationDiff> diffs;
  bool converged = false;

  bool passed() const { return diffs.empty(); }
};

/// Registry seed used for a run; identity ids depend only on it and on the
/// scenario's identity list.
std::string scenario_registry_seed(std::uint64_t seed);

/// Runs every step under the logical-tick scheduler seeded by `seed`, lets
/// the network settle, then checks step and final-state expectations.
Result<RunReport> run_network(const Scenario& scenario, std::uint64_t seed,
                              const RunOptions& options = {});

/// Registry for a scenario: same seed, identities registered in order,
/// peers registered as nodes.
Result<std::unique_ptr<membership::Registry>> make_scenario_registry(const Scenario& scenario,
                                                                     std::uint64_t seed);

/// Replaces "@name" and "$name" references in `value`.
Result<Value> resolve_references(const Value& value,
                                 const std::map<std::string, std::string>& identities,
                                 const std::map<std::string, std::string>& bindings);

}  // namespace nftl::pipeline
