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

#include "nftl/ledger/types.hpp"

#include <array>
#include <set>
#include <stdexcept>

namespace nftl::ledger {

namespace {

constexpr std::array<std::pair<Namespace, std::string_view>, 6> kNamespaces{{
    {Namespace::Commodity, "commodity"},
    {Namespace::Listing, "listing"},
    {Namespace::Offer, "offer"},
    {Namespace::Renovation, "renovation"},
    {Namespace::Environment, "environment"},
    {Namespace::Identity, "identity"},
}};

constexpr std::array<std::pair<ValidityFlag, std::string_view>, 5> kFlags{{
    {ValidityFlag::Valid, "VALID"},
    {ValidityFlag::MvccConflict, "MVCC_CONFLICT"},
    {ValidityFlag::BadEndorsement, "BAD_ENDORSEMENT"},
    {ValidityFlag::DuplicateTxId, "DUPLICATE_TXID"},
    {ValidityFlag::BadSignature, "BAD_SIGNATURE"},
}};

StateKey key_from_record(const Value& v) {
  if (!v.is_string()) throw std::invalid_argument("state key must be a string");
  auto key = StateKey::parse(v.get_ref<const std::string&>());
  if (!key) throw std::invalid_argument("malformed state key '" + v.get<std::string>() + "'");
  return *key;
}

}  // namespace

std::string_view to_string(Namespace ns) {
  for (const auto& [value, name] : kNamespaces) {
    if (value == ns) return name;
  }
  throw std::logic_error("unknown namespace");
}

std::optional<Namespace> namespace_from_string(std::string_view text) {
  for (const auto& [value, name] : kNamespaces) {
    if (name == text) return value;
  }
  return std::nullopt;
}

std::string StateKey::render() const {
  std::string out(to_string(ns));
  out += '/';
  out += entity_id;
  return out;
}

std::optional<StateKey> StateKey::parse(std::string_view rendered) {
  auto slash = rendered.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto ns = namespace_from_string(rendered.substr(0, slash));
  if (!ns) return std::nullopt;
  auto id = rendered.substr(slash + 1);
  if (id.empty()) return std::nullopt;
  return StateKey{*ns, std::string(id)};
}

Value Version::to_record() const { return Value{{"block", block}, {"tx", tx}}; }

Version Version::from_record(const Value& record) {
  auto block = field_int(record, "block");
  auto tx = field_int(record, "tx");
  if (block < 0 || tx < 0) throw std::invalid_argument("version components must be non-negative");
  return Version{static_cast<std::uint64_t>(block), static_cast<std::uint64_t>(tx)};
}

std::string_view to_string(ValidityFlag flag) {
  for (const auto& [value, name] : kFlags) {
    if (value == flag) return name;
  }
  throw std::logic_error("unknown validity flag");
}

std::optional<ValidityFlag> flag_from_string(std::string_view text) {
  for (const auto& [value, name] : kFlags) {
    if (name == text) return value;
  }
  return std::nullopt;
}

Value read_set_record(const std::vector<ReadItem>& reads) {
  Value out = Value::array();
  for (const auto& r : reads) {
    out.push_back(Value{{"key", r.key.render()},
                        {"version", r.version ? r.version->to_record() : Value(nullptr)}});
  }
  return out;
}

Value write_set_record(const std::vector<WriteItem>& writes) {
  Value out = Value::array();
  for (const auto& w : writes) {
    out.push_back(Value{{"key", w.key.render()}, {"value", w.value ? Value(*w.value) : Value(nullptr)}});
  }
  return out;
}

std::string endorsement_payload(std::string_view tx_id, std::string_view creator,
                                std::string_view operation, const Value& args,
                                const Value& result, const std::vector<ReadItem>& reads,
                                const std::vector<WriteItem>& writes) {
  return canonical(Value{{"txId", tx_id},
                         {"creator", creator},
                         {"operation", operation},
                         {"args", args},
                         {"result", result},
                         {"readSet", read_set_record(reads)},
                         {"writeSet", write_set_record(writes)}});
}

std::string TransactionEnvelope::endorsement_payload() const {
  return ledger::endorsement_payload(tx_id, creator, operation, args, result, read_set, write_set);
}

std::string TransactionEnvelope::body_bytes() const {
  auto record = to_record();
  record.erase("clientSignature");
  return canonical(record);
}

Value TransactionEnvelope::to_record() const {
  Value endorsement_records = Value::array();
  for (const auto& e : endorsements) endorsement_records.push_back(e.to_record());
  return Value{{"txId", tx_id},
               {"creator", creator},
               {"operation", operation},
               {"args", args},
               {"result", result},
               {"readSet", read_set_record(read_set)},
               {"writeSet", write_set_record(write_set)},
               {"endorsements", std::move(endorsement_records)},
               {"clientSignature", client_signature.to_record()}};
}

TransactionEnvelope TransactionEnvelope::from_record(const Value& record) {
  TransactionEnvelope env;
  env.tx_id = field_string(record, "txId");
  env.creator = field_string(record, "creator");
  env.operation = field_string(record, "operation");
  env.args = field(record, "args");
  env.result = field(record, "result");

  std::set<std::string> seen;
  for (const auto& r : field_array(record, "readSet")) {
    ReadItem item{key_from_record(field(r, "key")), std::nullopt};
    const auto& v = field(r, "version");
    if (!v.is_null()) item.version = Version::from_record(v);
    if (!seen.insert(item.key.render()).second) throw std::invalid_argument("duplicate read key");
    env.read_set.push_back(std::move(item));
  }
  seen.clear();
  for (const auto& w : field_array(record, "writeSet")) {
    WriteItem item{key_from_record(field(w, "key")), std::nullopt};
    const auto& v = field(w, "value");
    if (v.is_string()) {
      item.value = v.get<std::string>();
    } else if (!v.is_null()) {
      throw std::invalid_argument("write value must be a string or null");
    }
    if (!seen.insert(item.key.render()).second) throw std::invalid_argument("duplicate write key");
    env.write_set.push_back(std::move(item));
  }
  for (const auto& e : field_array(record, "endorsements")) {
    env.endorsements.push_back(Signature::from_record(e));
  }
  env.client_signature = Signature::from_record(field(record, "clientSignature"));
  return env;
}

Value Block::to_record() const {
  Value envs = Value::array();
  for (const auto& e : envelopes) envs.push_back(e.to_record());
  Value flags = Value::array();
  for (auto f : validity_flags) flags.push_back(std::string(to_string(f)));
  return Value{{"number", number},
               {"prevHash", to_hex(prev_hash)},
               {"dataHash", to_hex(data_hash)},
               {"envelopes", std::move(envs)},
               {"validityFlags", std::move(flags)}};
}

Block Block::from_record(const Value& record) {
  Block block;
  auto number = field_int(record, "number");
  if (number < 0) throw std::invalid_argument("block number must be non-negative");
  block.number = static_cast<std::uint64_t>(number);
  auto prev = digest_from_hex(field_string(record, "prevHash"));
  auto data = digest_from_hex(field_string(record, "dataHash"));
  if (!prev || !data) throw std::invalid_argument("malformed digest");
  block.prev_hash = *prev;
  block.data_hash = *data;
  for (const auto& e : field_array(record, "envelopes")) {
    block.envelopes.push_back(TransactionEnvelope::from_record(e));
  }
  for (const auto& f : field_array(record, "validityFlags")) {
    if (!f.is_string()) throw std::invalid_argument("validity flag must be a string");
    auto flag = flag_from_string(f.get_ref<const std::string&>());
    if (!flag) throw std::invalid_argument("unknown validity flag");
    block.validity_flags.push_back(*flag);
  }
  return block;
}

Digest compute_data_hash(const std::vector<TransactionEnvelope>& envelopes) {
  Value envs = Value::array();
  for (const auto& e : envelopes) envs.push_back(e.to_record());
  return sha256(canonical(envs));
}

Digest compute_block_hash(const Block& block) {
  return sha256(canonical(Value{{"number", block.number},
                                {"prevHash", to_hex(block.prev_hash)},
                                {"dataHash", to_hex(block.data_hash)}}));
}

Block make_genesis_block() { return make_block(0, Digest{}, {}); }

Block make_block(std::uint64_t number, const Digest& prev_hash,
                 std::vector<TransactionEnvelope> envelopes) {
  Block block;
  block.number = number;
  block.prev_hash = prev_hash;
  block.data_hash = compute_data_hash(envelopes);
  block.envelopes = std::move(envelopes);
  return block;
}

std::string make_tx_id(std::string_view creator, std::string_view nonce) {
  return to_hex(sha256(canonical(Value{{"creator", creator}, {"nonce", nonce}})));
}

Status EndorsementPolicy::check() const {
  if (endorsers.empty()) return make_error(Errc::INVALID_CONFIG, "endorser set is empty");
  if (required_count < 1 || required_count > endorsers.size()) {
    return make_error(Errc::INVALID_CONFIG, "policy requires 1 <= m <= n, got m=" +
                                                std::to_string(required_count) +
                                                " n=" + std::to_string(endorsers.size()));
  }
  std::set<std::string> distinct(endorsers.begin(), endorsers.end());
  if (distinct.size() != endorsers.size()) {
    return make_error(Errc::INVALID_CONFIG, "endorser set contains duplicates");
  }
  return ok_status();
}

Value EndorsementPolicy::to_record() const {
  return Value{{"requiredCount", required_count}, {"endorsers", endorsers}};
}

EndorsementPolicy EndorsementPolicy::from_record(const Value& record) {
  EndorsementPolicy policy;
  auto m = field_int(record, "requiredCount");
  if (m < 0) throw std::invalid_argument("requiredCount must be non-negative");
  policy.required_count = static_cast<std::size_t>(m);
  for (const auto& e : field_array(record, "endorsers")) {
    if (!e.is_string()) throw std::invalid_argument("endorser id must be a string");
    policy.endorsers.push_back(e.get<std::string>());
  }
  return policy;
}

}  // namespace nftl::ledger
