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

#include "nftl/pipeline/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "nftl/chaincode/records.hpp"

namespace nftl::pipeline {

namespace {

struct ParseFailure {
  std::string path;
  std::string message;
};

[[noreturn]] void bad(std::string path, std::string message) {
  throw ParseFailure{std::move(path), std::move(message)};
}

const Value& member(const Value& obj, const std::string& path, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(path, "missing field '" + std::string(key) + "'");
  return *it;
}

std::string as_string(const Value& v, const std::string& path) {
  if (!v.is_string() || v.get<std::string>().empty()) bad(path, "expected a non-empty string");
  return v.get<std::string>();
}

std::uint64_t as_count(const Value& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  bad(path, "expected a non-negative integer");
}

void require_object(const Value& v, const std::string& path) {
  if (!v.is_object()) bad(path, "expected a record");
}

void check_keys(const Value& obj, const std::string& path, std::set<std::string> allowed) {
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.contains(k)) bad(path + "." + k, "unknown field");
  }
}

NetworkConfig parse_network(const Value& v, const std::string& path) {
  require_object(v, path);
  check_keys(v, path,
             {"peers", "policy", "maxBatchSize", "batchTimeoutTicks", "gossipLatencyTicks"});
  NetworkConfig c;
  if (v.contains("peers")) c.peers = as_count(v["peers"], path + ".peers");
  if (v.contains("maxBatchSize")) {
    c.orderer.max_batch_size = as_count(v["maxBatchSize"], path + ".maxBatchSize");
  }
  if (v.contains("batchTimeoutTicks")) {
    c.orderer.batch_timeout_ticks = as_count(v["batchTimeoutTicks"], path + ".batchTimeoutTicks");
  }
  if (v.contains("gossipLatencyTicks")) {
    c.gossip_latency_ticks = as_count(v["gossipLatencyTicks"], path + ".gossipLatencyTicks");
  }
  if (v.contains("policy")) {
    const auto& p = v["policy"];
    const auto ppath = path + ".policy";
    require_object(p, ppath);
    check_keys(p, ppath, {"required", "endorsers"});
    if (p.contains("required")) c.required_endorsements = as_count(p["required"], ppath + ".required");
    if (p.contains("endorsers")) c.endorsers = as_count(p["endorsers"], ppath + ".endorsers");
  }
  if (auto st = c.check(); !st) bad(path, st.error().message);
  return c;
}

ScenarioStep parse_step(const Value& v, const std::string& path,
                        const std::set<std::string>& names, std::size_t peers) {
  require_object(v, path);
  ScenarioStep step;
  step.tick = as_count(member(v, path, "tick"), path + ".tick");

  if (v.contains("fault")) {
    check_keys(v, path, {"tick", "fault", "target", "ticks"});
    auto kind = fault_from_string(as_string(v["fault"], path + ".fault"));
    if (!kind) bad(path + ".fault", "expected delay, reorder or drop-endorsement");
    Fault f;
    f.kind = *kind;
    f.target = as_string(member(v, path, "target"), path + ".target");
    bool known_peer = false;
    for (std::size_t i = 0; i < peers; ++i) known_peer |= f.target == "peer" + std::to_string(i);
    if (!known_peer) bad(path + ".target", "unknown peer '" + f.target + "'");
    f.start = step.tick;
    if (v.contains("ticks")) f.duration = as_count(v["ticks"], path + ".ticks");
    if (f.duration < 1) bad(path + ".ticks", "fault duration must be >= 1");
    step.fault = std::move(f);
    return step;
  }

  check_keys(v, path, {"tick", "actor", "operation", "args", "bind", "nonce", "expect"});
  step.actor = as_string(member(v, path, "actor"), path + ".actor");
  if (!names.contains(step.actor)) bad(path + ".actor", "unknown identity '" + step.actor + "'");
  step.operation = as_string(member(v, path, "operation"), path + ".operation");
  if (!chaincode::is_known_operation(step.operation)) {
    bad(path + ".operation", "unknown operation '" + step.operation + "'");
  }
  if (chaincode::is_query_operation(step.operation)) {
    bad(path + ".operation", "queries are not ordered and cannot be scheduled");
  }
  if (v.contains("args")) {
    require_object(v["args"], path + ".args");
    if (!is_canonical_safe(v["args"])) bad(path + ".args", "floating point values are not allowed");
    step.args = v["args"];
  }
  if (v.contains("bind")) step.bind = as_string(v["bind"], path + ".bind");
  if (v.contains("nonce")) step.nonce = as_string(v["nonce"], path + ".nonce");
  if (v.contains("expect")) {
    const auto& e = v["expect"];
    const auto epath = path + ".expect";
    require_object(e, epath);
    check_keys(e, epath, {"error", "flag"});
    if (e.contains("error")) {
      step.expect_error = as_string(e["error"], epath + ".error");
      if (!errc_from_string(*step.expect_error)) bad(epath + ".error", "unknown error code");
    }
    if (e.contains("flag")) {
      step.expect_flag = as_string(e["flag"], epath + ".flag");
      if (!ledger::flag_from_string(*step.expect_flag)) bad(epath + ".flag", "unknown validity flag");
    }
  }
  return step;
}

Expectation parse_expectation(const Value& v, const std::string& path) {
  require_object(v, path);
  Expectation e;
  for (const char* entity : {"listing", "commodity"}) {
    if (v.contains(entity)) {
      if (!e.entity.empty()) bad(path, "name exactly one of listing or commodity");
      e.entity = entity;
      e.ref = as_string(v[entity], path + "." + entity);
    }
  }
  if (e.entity.empty()) bad(path, "missing field 'listing' or 'commodity'");
  for (const auto& [k, value] : v.items()) {
    if (k == e.entity) continue;
    e.fields[k] = value;
  }
  if (e.fields.empty()) bad(path, "no fields to check");
  return e;
}

Scenario parse_document(const Value& doc) {
  require_object(doc, "$");
  check_keys(doc, "$", {"profile", "network", "identities", "steps", "expect"});
  Scenario s;
  if (doc.contains("profile")) {
    s.profile = as_string(doc["profile"], "$.profile");
    if (s.profile != "art" && s.profile != "real-estate") {
      bad("$.profile", "expected \"art\" or \"real-estate\"");
    }
  }
  if (doc.contains("network")) s.network = parse_network(doc["network"], "$.network");

  std::set<std::string> names;
  const auto& ids = member(doc, "$", "identities");
  if (!ids.is_array()) bad("$.identities", "expected a list");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto path = "$.identities[" + std::to_string(i) + "]";
    require_object(ids[i], path);
    check_keys(ids[i], path, {"name", "role"});
    IdentitySpec spec;
    spec.name = as_string(member(ids[i], path, "name"), path + ".name");
    auto role = membership::role_from_string(as_string(member(ids[i], path, "role"), path + ".role"));
    if (!role) bad(path + ".role", "expected MEMBER or AUCTIONEER");
    spec.role = *role;
    if (!names.insert(spec.name).second) bad(path + ".name", "duplicate identity name");
    s.identities.push_back(std::move(spec));
  }

  const auto& steps = member(doc, "$", "steps");
  if (!steps.is_array()) bad("$.steps", "expected a list");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    s.steps.push_back(
        parse_step(steps[i], "$.steps[" + std::to_string(i) + "]", names, s.network.peers));
  }

  if (doc.contains("expect")) {
    const auto& ex = doc["expect"];
    if (!ex.is_array()) bad("$.expect", "expected a list");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      s.expectations.push_back(parse_expectation(ex[i], "$.expect[" + std::to_string(i) + "]"));
    }
  }
  return s;
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Result<Scenario> parse_scenario(std::string_view text) {
  Value doc;
  try {
    doc = Value::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_and_column(text, e.byte);
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    return make_error(Errc::SCENARIO_PARSE_ERROR, "line " + std::to_string(line) + ", column " +
                                                      std::to_string(col) + ": " + what);
  }
  try {
    return parse_document(doc);
  } catch (const ParseFailure& f) {
    return make_error(Errc::SCENARIO_PARSE_ERROR, f.path + ": " + f.message);
  }
}

Result<Scenario> load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(Errc::IO_ERROR, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string ExpectationDiff::describe() const {
  return subject + ": " + field + " expected " + expected.dump() + ", got " + actual.dump();
}

std::string scenario_registry_seed(std::uint64_t seed) {
  return "nftl-scenario-" + std::to_string(seed);
}

Result<std::unique_ptr<membership::Registry>> make_scenario_registry(const Scenario& scenario,
                                                                     std::uint64_t seed) {
  auto registry = std::make_unique<membership::Registry>(scenario_registry_seed(seed));
  for (const auto& spec : scenario.identities) {
    auto id = registry->register_identity(spec.name, spec.role);
    if (!id) return id.error();
  }
  if (auto st = register_nodes(*registry, scenario.network); !st) return st.error();
  return registry;
}

Result<Value> resolve_references(const Value& value,
                                 const std::map<std::string, std::string>& identities,
                                 const std::map<std::string, std::string>& bindings) {
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (s.size() > 1 && (s[0] == '@' || s[0] == '$')) {
      const auto& table = s[0] == '@' ? identities : bindings;
      auto it = table.find(s.substr(1));
      if (it == table.end()) return make_error(Errc::BAD_ARGS, "unresolved reference " + s);
      return Value(it->second);
    }
    return value;
  }
  if (value.is_array() || value.is_object()) {
    Value out = value;
    for (auto it = out.begin(); it != out.end(); ++it) {
      auto resolved = resolve_references(*it, identities, bindings);
      if (!resolved) return resolved.error();
      *it = std::move(resolved).value();
    }
    return out;
  }
  return value;
}

Result<RunReport> run_network(const Scenario& scenario, std::uint64_t seed,
                              const RunOptions& options) {
  auto registry_or = make_scenario_registry(scenario, seed);
  if (!registry_or) return registry_or.error();
  auto registry = std::move(registry_or).value();

  Network::Options net_opts;
  net_opts.config = scenario.network;
  net_opts.seed = seed;
  net_opts.anchor_data_dir = options.data_dir;
  auto net_or = Network::create(net_opts, *registry);
  if (!net_or) return net_or.error();
  auto& net = *net_or.value();

  RunReport report;
  for (const auto& spec : scenario.identities) {
    report.identities[spec.name] = registry->find_by_name(spec.name)->identity_id;
  }

  std::vector<std::size_t> order(scenario.steps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scenario.steps[a].tick < scenario.steps[b].tick;
  });

  auto step_subject = [](std::size_t i) { return "step " + std::to_string(i); };
  std::size_t next = 0;
  while (next < order.size()) {
    const auto tick = net.now();
    for (; next < order.size() && scenario.steps[order[next]].tick <= tick; ++next) {
      const auto index = order[next];
      const auto& step = scenario.steps[index];
      if (step.fault) {
        auto fault = *step.fault;
        fault.start = tick;
        net.inject(std::move(fault));
        continue;
      }
      auto args = resolve_references(step.args, report.identities, report.bindings);
      if (!args) {
        report.diffs.push_back({step_subject(index), "args", Value("resolvable"),
                                Value(args.error().message)});
        continue;
      }
      Value call_args = std::move(args).value();
      if (step.operation == chaincode::op::kCreateCommodity && !call_args.contains("profile") &&
          !call_args.contains("trackRenovations")) {
        call_args["profile"] = scenario.profile;
      }
      std::string nonce;
      if (step.nonce) {
        nonce = *step.nonce;
      } else {
        nonce = to_hex(sha256(std::to_string(net.next_random())));
      }
      auto proposal = sign_proposal(*registry, report.identities.at(step.actor), step.operation,
                                    std::move(call_args), nonce);
      if (!proposal) return proposal.error();
      StepOutcome outcome;
      outcome.step_index = index;
      outcome.tx_id = proposal->tx_id();
      outcome.submit = net.submit(*proposal);
      if (step.bind && outcome.submit.ordered()) {
        if (auto id = chaincode::primary_id(outcome.submit.result)) {
          report.bindings[*step.bind] = *id;
        }
      }
      report.outcomes.push_back(std::move(outcome));
    }
    net.step();
  }
  bool settled = net.settle(options.max_settle_ticks);

  const auto& anchor = net.anchor();
  for (auto& outcome : report.outcomes) {
    if (!outcome.submit.ordered()) continue;
    if (auto loc = anchor.find_tx(outcome.tx_id)) outcome.flag = loc->flag;
  }

  // Per-step expectations.
  for (const auto& outcome : report.outcomes) {
    const auto& step = scenario.steps[outcome.step_index];
    const auto subject = step_subject(outcome.step_index);
    if (step.expect_error) {
      auto code = outcome.submit.client_code();
      Value actual = code ? Value(std::string(to_string(*code))) : Value("ORDERED");
      if (actual != *step.expect_error) {
        report.diffs.push_back({subject, "error", Value(*step.expect_error), actual});
      }
    }
    if (step.expect_flag) {
      Value actual = outcome.flag ? Value(std::string(ledger::to_string(*outcome.flag)))
                                  : Value("NOT_COMMITTED");
      if (actual != *step.expect_flag) {
        report.diffs.push_back({subject, "flag", Value(*step.expect_flag), actual});
      }
    }
  }

  // Final-state expectations against the anchor's committed state.
  auto state = anchor.snapshot();
  for (const auto& ex : scenario.expectations) {
    const auto subject = ex.entity + " " + ex.ref;
    auto ref = resolve_references(Value(ex.ref), report.identities, report.bindings);
    if (!ref) {
      report.diffs.push_back({subject, "exists", Value(true), Value(false)});
      continue;
    }
    ledger::StateKey key{ex.entity == "listing" ? ledger::Namespace::Listing
                                                : ledger::Namespace::Commodity,
                         ref->get<std::string>()};
    auto raw = state->get(key);
    if (!raw) {
      report.diffs.push_back({subject, "exists", Value(true), Value(false)});
      continue;
    }
    auto record = parse_record(raw->value).value();
    for (const auto& [field, expected_raw] : ex.fields) {
      auto expected = resolve_references(expected_raw, report.identities, report.bindings);
      Value want = expected ? std::move(expected).value() : expected_raw;
      Value actual;
      if (ex.entity == "commodity" && field == "historyLength") {
        actual = record["ownershipHistory"].size();
      } else if (ex.entity == "commodity" && field == "renovations") {
        actual = record["renovationIds"].size();
      } else if (record.contains(field)) {
        actual = record[field];
      } else {
        actual = Value("<absent>");
      }
      if (actual != want) report.diffs.push_back({subject, field, want, actual});
    }
  }

  report.converged = settled && net.converged();
  if (!report.converged) {
    report.diffs.push_back({"network", "converged", Value(true), Value(false)});
  }
  for (std::size_t p = 0; p < net.peer_count(); ++p) {
    const auto& l = net.peer_ledger(p);
    std::vector<std::string> chain;
    for (std::uint64_t n = 0; n <= l.height(); ++n) chain.push_back(l.block(n)->serialize());
    report.chains.push_back(std::move(chain));
  }
  report.world_state = state;
  report.trace = net.trace();
  return report;
}

}  // namespace nftl::pipeline
