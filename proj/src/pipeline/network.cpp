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

#include "nftl/pipeline/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace nftl::pipeline {

using ledger::Block;
using BlockPtr = std::shared_ptr<const Block>;

// ---- config ----------------------------------------------------------------

Status NetworkConfig::check() const {
  if (peers < 1) return make_error(Errc::INVALID_CONFIG, "a network needs at least one peer");
  if (endorsers > peers) {
    return make_error(Errc::INVALID_CONFIG, "more endorsers than peers");
  }
  if (auto st = orderer.check(); !st) return st;
  return policy().check();
}

std::vector<std::string> NetworkConfig::peer_ids() const {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < peers; ++i) ids.push_back("peer" + std::to_string(i));
  return ids;
}

ledger::EndorsementPolicy NetworkConfig::policy() const {
  auto ids = peer_ids();
  ids.resize(endorsers == 0 ? peers : std::min(endorsers, peers));
  return ledger::EndorsementPolicy{required_endorsements, std::move(ids)};
}

Value NetworkConfig::to_record() const {
  return Value{{"peers", peers},
               {"requiredEndorsements", required_endorsements},
               {"endorsers", endorsers},
               {"maxBatchSize", orderer.max_batch_size},
               {"batchTimeoutTicks", orderer.batch_timeout_ticks},
               {"gossipLatencyTicks", gossip_latency_ticks}};
}

NetworkConfig NetworkConfig::from_record(const Value& record) {
  auto count = [&](std::string_view key) {
    auto v = field_int(record, key);
    if (v < 0) throw std::invalid_argument("field '" + std::string(key) + "' must be >= 0");
    return static_cast<std::uint64_t>(v);
  };
  NetworkConfig c;
  c.peers = count("peers");
  c.required_endorsements = count("requiredEndorsements");
  c.endorsers = count("endorsers");
  c.orderer.max_batch_size = count("maxBatchSize");
  c.orderer.batch_timeout_ticks = count("batchTimeoutTicks");
  c.gossip_latency_ticks = count("gossipLatencyTicks");
  return c;
}

std::string_view to_string(FaultKind kind) {
  switch (kind) {
    case FaultKind::Delay: return "delay";
    case FaultKind::Reorder: return "reorder";
    case FaultKind::DropEndorsement: return "drop-endorsement";
  }
  return "delay";
}

std::optional<FaultKind> fault_from_string(std::string_view text) {
  if (text == "delay") return FaultKind::Delay;
  if (text == "reorder") return FaultKind::Reorder;
  if (text == "drop-endorsement") return FaultKind::DropEndorsement;
  return std::nullopt;
}

Status register_nodes(membership::Registry& registry, const NetworkConfig& config) {
  for (const auto& id : config.peer_ids()) {
    if (registry.is_node(id)) continue;
    if (auto st = registry.register_node(id); !st) return st;
  }
  return ok_status();
}

// ---- trace -----------------------------------------------------------------

void Trace::emit(std::uint64_t tick, std::string_view kind, Value fields) {
  if (!enabled_) return;
  fields["seq"] = records_.size();
  fields["tick"] = tick;
  fields["kind"] = kind;
  records_.push_back(std::move(fields));
}

std::string Trace::render() const {
  std::string out;
  for (const auto& r : records_) {
    out += canonical(r);
    out += '\n';
  }
  return out;
}

std::optional<ledger::Version> LedgerQueryView::tx_version(std::string_view tx_id) const {
  auto loc = ledger_.find_tx(tx_id);
  if (!loc || loc->flag != ledger::ValidityFlag::Valid) return std::nullopt;
  return loc->position;
}

// ---- peers -----------------------------------------------------------------

struct Network::Peer {
  struct Message {
    std::uint64_t deliver_at = 0;
    BlockPtr block;
  };

  std::string id;
  bool anchor = false;
  std::unique_ptr<ledger::Ledger> ledger;
  std::deque<Message> mailbox;
  std::vector<BlockPtr> reorder_buffer;
  std::map<std::uint64_t, BlockPtr> held;
};

namespace {

bool in_window(const std::vector<Fault>& faults, std::string_view peer, FaultKind kind,
               std::uint64_t now) {
  return std::any_of(faults.begin(), faults.end(), [&](const Fault& f) {
    return f.kind == kind && f.target == peer && now >= f.start && now < f.start + f.duration;
  });
}

Value merged(Value base, const Value& extra) {
  base.update(extra);
  return base;
}

Value block_ref(const Block& block) {
  return Value{{"block", block.number}, {"hash", to_hex(ledger::compute_block_hash(block))}};
}

}  // namespace

Network::Network(Options options, const membership::Registry& registry)
    : options_(std::move(options)),
      registry_(registry),
      policy_(options_.config.policy()),
      peer_ids_(options_.config.peer_ids()),
      rng_(options_.seed) {
  trace_.set_enabled(options_.trace);
}

Network::~Network() = default;

Result<std::unique_ptr<Network>> Network::create(Options options,
                                                 const membership::Registry& registry) {
  if (auto st = options.config.check(); !st) return st.error();
  std::unique_ptr<Network> net(new Network(std::move(options), registry));
  for (const auto& id : net->peer_ids_) {
    if (!registry.is_node(id)) {
      return make_error(Errc::INVALID_CONFIG, "peer " + id + " is not a registered node");
    }
  }
  for (std::size_t i = 0; i < net->peer_ids_.size(); ++i) {
    ledger::LedgerOptions lopts;
    lopts.snapshot_interval = net->options_.snapshot_interval;
    if (i == 0) lopts.data_dir = net->options_.anchor_data_dir;
    auto opened = ledger::Ledger::open(lopts, registry, net->policy_);
    if (!opened) return opened.error();
    auto peer = std::make_unique<Peer>();
    peer->id = net->peer_ids_[i];
    peer->anchor = i == 0;
    peer->ledger = std::move(opened).value();
    net->peers_.push_back(std::move(peer));
  }
  // Followers start empty and catch up with a recovered anchor.
  auto tip = net->anchor().height();
  for (std::size_t i = 1; i < net->peers_.size(); ++i) {
    if (tip > 0) net->backfill(*net->peers_[i], tip);
  }
  net->orderer_ =
      std::make_unique<SoloOrderer>(net->options_.config.orderer, tip, net->anchor().tip_hash());
  return net;
}

const ledger::Ledger& Network::anchor() const { return *peers_.front()->ledger; }
const ledger::Ledger& Network::peer_ledger(std::size_t index) const {
  return *peers_.at(index)->ledger;
}
std::size_t Network::peer_count() const { return peers_.size(); }
std::uint64_t Network::next_random() { return rng_(); }

// ---- endorsement -----------------------------------------------------------

Endorsement Network::endorse(Peer& peer, const Proposal& proposal) {
  Endorsement e;
  e.peer_id = peer.id;
  auto snapshot = peer.ledger->snapshot();
  chaincode::Invocation inv{proposal.creator, proposal.tx_id(), proposal.operation, proposal.args};
  auto exec = chaincode::execute(inv, *snapshot, registry_);
  e.result = std::move(exec.result);
  if (!e.result) return e;
  e.read_set = std::move(exec.read_set);
  e.write_set = std::move(exec.write_set);
  e.payload = ledger::endorsement_payload(inv.tx_id, inv.caller, inv.operation, inv.args,
                                          e.result.value(), e.read_set, e.write_set);
  auto sig = registry_.sign_payload(peer.id, e.payload);
  if (!sig) throw std::runtime_error("endorser cannot sign: " + sig.error().describe());
  e.signature = std::move(sig).value();
  return e;
}

SubmitResult Network::submit(const Proposal& proposal) {
  SubmitResult out;
  out.tx_id = proposal.tx_id();
  trace_.emit(now_, "submit",
              Value{{"txId", out.tx_id},
                    {"creator", proposal.creator},
                    {"operation", proposal.operation}});

  auto reject = [&](Rejection why, Error error) {
    out.rejection = why;
    out.error = std::move(error);
    trace_.emit(now_, "reject",
                Value{{"txId", out.tx_id},
                      {"rejection", std::string(to_string(why))},
                      {"error", std::string(nftl::to_string(*out.client_code()))}});
    return out;
  };

  if (proposal.client_signature.signer_id != proposal.creator ||
      !registry_.verify_signature(proposal.creator, proposal.signing_bytes(),
                                  proposal.client_signature)) {
    return reject(Rejection::BadSignature,
                  make_error(Errc::BAD_SIGNATURE, "proposal signature does not verify"));
  }

  std::vector<Endorsement> endorsements;
  for (const auto& endorser : policy_.endorsers) {
    auto& peer = **std::find_if(peers_.begin(), peers_.end(),
                                [&](const auto& p) { return p->id == endorser; });
    if (in_window(faults_, peer.id, FaultKind::DropEndorsement, now_)) {
      out.endorser_outcomes.emplace_back(peer.id, "DROPPED");
      trace_.emit(now_, "endorse",
                  Value{{"txId", out.tx_id}, {"peer", peer.id}, {"outcome", "DROPPED"}});
      continue;
    }
    auto e = endorse(peer, proposal);
    std::string outcome = e.result ? "OK" : std::string(nftl::to_string(e.result.error().code));
    out.endorser_outcomes.emplace_back(peer.id, outcome);
    trace_.emit(now_, "endorse",
                Value{{"txId", out.tx_id},
                      {"peer", peer.id},
                      {"height", peer.ledger->height()},
                      {"outcome", outcome}});
    endorsements.push_back(std::move(e));
  }

  // Agreement means byte-identical signed payloads; errors agree by code.
  std::vector<std::pair<std::string, std::vector<const Endorsement*>>> groups;
  std::vector<std::pair<Errc, std::vector<const Endorsement*>>> error_groups;
  for (const auto& e : endorsements) {
    if (e.result) {
      if (!registry_.verify_signature(e.peer_id, e.payload, e.signature)) continue;
      auto it = std::find_if(groups.begin(), groups.end(),
                             [&](const auto& g) { return g.first == e.payload; });
      if (it == groups.end()) {
        groups.push_back({e.payload, {&e}});
      } else {
        it->second.push_back(&e);
      }
    } else {
      auto code = e.result.error().code;
      auto it = std::find_if(error_groups.begin(), error_groups.end(),
                             [&](const auto& g) { return g.first == code; });
      if (it == error_groups.end()) {
        error_groups.push_back({code, {&e}});
      } else {
        it->second.push_back(&e);
      }
    }
  }

  auto largest = [](const auto& gs) {
    return std::max_element(gs.begin(), gs.end(), [](const auto& a, const auto& b) {
      return a.second.size() < b.second.size();
    });
  };
  const std::size_t m = policy_.required_count;

  if (auto best = largest(groups); best != groups.end() && best->second.size() >= m) {
    const auto& first = *best->second.front();
    ledger::TransactionEnvelope env;
    env.tx_id = out.tx_id;
    env.creator = proposal.creator;
    env.operation = proposal.operation;
    env.args = proposal.args;
    env.result = first.result.value();
    env.read_set = first.read_set;
    env.write_set = first.write_set;
    for (const auto* e : best->second) env.endorsements.push_back(e->signature);
    auto sig = registry_.sign_payload(proposal.creator, env.body_bytes());
    if (!sig) return reject(Rejection::BadSignature, sig.error());
    env.client_signature = std::move(sig).value();
    out.result = env.result;
    trace_.emit(now_, "order",
                Value{{"txId", out.tx_id}, {"endorsements", env.endorsements.size()}});
    dispatch(orderer_->submit(std::move(env), now_));
    return out;
  }

  auto best_error = largest(error_groups);
  if (best_error != error_groups.end() &&
      (best_error->second.size() >= m || (groups.empty() && error_groups.size() == 1))) {
    return reject(Rejection::ChaincodeError, best_error->second.front()->result.error());
  }
  std::size_t agreeing = groups.empty() ? 0 : largest(groups)->second.size();
  return reject(Rejection::EndorsementShortfall,
                make_error(Errc::ENDORSEMENT_SHORTFALL,
                           std::to_string(agreeing) + " agreeing endorsements, " +
                               std::to_string(m) + " required"));
}

Result<Value> Network::query(std::string_view operation, const Value& args) const {
  LedgerQueryView view(anchor());
  return chaincode::query(operation, args, view);
}

// ---- scheduling ------------------------------------------------------------

void Network::inject(Fault fault) {
  trace_.emit(now_, "fault",
              Value{{"fault", std::string(to_string(fault.kind))},
                    {"target", fault.target},
                    {"start", fault.start},
                    {"until", fault.start + fault.duration}});
  faults_.push_back(std::move(fault));
}

void Network::dispatch(std::vector<Block> blocks) {
  for (auto& b : blocks) {
    auto ptr = std::make_shared<const Block>(std::move(b));
    trace_.emit(now_, "cut", merged(block_ref(*ptr), Value{{"size", ptr->envelopes.size()}}));
    peers_.front()->mailbox.push_back({now_, std::move(ptr)});
  }
}

void Network::step() {
  dispatch(orderer_->on_tick(now_));
  for (auto& peer : peers_) deliver(*peer);
  ++now_;
}

bool Network::quiescent() const {
  if (orderer_->pending() > 0) return false;
  for (const auto& p : peers_) {
    if (!p->mailbox.empty() || !p->reorder_buffer.empty() || !p->held.empty()) return false;
  }
  return std::all_of(faults_.begin(), faults_.end(),
                     [&](const Fault& f) { return f.start + f.duration <= now_; });
}

bool Network::settle(std::uint64_t max_ticks) {
  for (std::uint64_t i = 0; i < max_ticks && !quiescent(); ++i) step();
  return quiescent();
}

void Network::deliver(Peer& peer) {
  if (in_window(faults_, peer.id, FaultKind::Delay, now_)) return;
  std::vector<BlockPtr> due;
  while (!peer.mailbox.empty() && peer.mailbox.front().deliver_at <= now_) {
    due.push_back(std::move(peer.mailbox.front().block));
    peer.mailbox.pop_front();
  }
  if (in_window(faults_, peer.id, FaultKind::Reorder, now_)) {
    peer.reorder_buffer.insert(peer.reorder_buffer.end(), due.begin(), due.end());
    return;
  }
  std::vector<BlockPtr> batch(peer.reorder_buffer.rbegin(), peer.reorder_buffer.rend());
  peer.reorder_buffer.clear();
  batch.insert(batch.end(), due.begin(), due.end());
  for (const auto& block : batch) receive(peer, block);
}

void Network::receive(Peer& peer, const BlockPtr& block) {
  const auto next = peer.ledger->height() + 1;
  if (block->number < next) {
    auto have = peer.ledger->block(block->number);
    bool same = ledger::compute_block_hash(*have) == ledger::compute_block_hash(*block);
    trace_.emit(now_, same ? "duplicate" : "conflict",
                merged(block_ref(*block), Value{{"peer", peer.id}}));
    return;
  }
  if (block->number > next) {
    trace_.emit(now_, "gap",
                Value{{"peer", peer.id},
                      {"error", std::string(nftl::to_string(Errc::GAP_DETECTED))},
                      {"expected", next},
                      {"received", block->number}});
    peer.held.emplace(block->number, block);
    if (!peer.anchor) backfill(peer, block->number - 1);
  } else {
    commit(peer, block);
  }
  // Apply held blocks that are now in sequence; drop stale ones.
  while (!peer.held.empty()) {
    auto it = peer.held.begin();
    auto height = peer.ledger->height();
    if (it->first <= height) {
      peer.held.erase(it);
    } else if (it->first == height + 1) {
      auto held = it->second;
      peer.held.erase(it);
      if (!commit(peer, held)) break;
    } else {
      break;
    }
  }
}

void Network::backfill(Peer& peer, std::uint64_t up_to) {
  const auto from = peer.ledger->height() + 1;
  if (from > up_to) return;
  trace_.emit(now_, "backfill", Value{{"peer", peer.id}, {"from", from}, {"to", up_to}});
  for (auto n = from; n <= up_to; ++n) {
    auto block = anchor().block(n);
    if (!block || !commit(peer, block)) return;
  }
}

bool Network::commit(Peer& peer, const BlockPtr& block) {
  auto committed = peer.ledger->append_block(*block);
  if (!committed) {
    trace_.emit(now_, "commit_error",
                merged(block_ref(*block), 
                    Value{{"peer", peer.id}, {"error", committed.error().describe()}}));
    return false;
  }
  const auto& b = *committed.value();
  Value flags = Value::array();
  for (auto f : b.validity_flags) flags.push_back(std::string(ledger::to_string(f)));
  trace_.emit(now_, "commit",
              merged(block_ref(b), Value{{"peer", peer.id}, {"flags", std::move(flags)}}));
  if (peer.anchor) {
    if (listener_) listener_(b);
    gossip(committed.value());
  }
  return true;
}

void Network::gossip(const BlockPtr& block) {
  std::vector<Peer*> targets;
  for (std::size_t i = 1; i < peers_.size(); ++i) targets.push_back(peers_[i].get());
  // Fisher-Yates with the network generator; std::shuffle's draw pattern is
  // implementation-defined.
  for (std::size_t i = targets.size(); i > 1; --i) {
    std::swap(targets[i - 1], targets[rng_() % i]);
  }
  for (auto* peer : targets) {
    peer->mailbox.push_back({now_ + options_.config.gossip_latency_ticks, block});
    trace_.emit(now_, "gossip", merged(block_ref(*block), Value{{"peer", peer->id}}));
  }
}

bool Network::endorsers_current() const {
  const auto height = anchor().height();
  for (const auto& p : peers_) {
    if (std::find(policy_.endorsers.begin(), policy_.endorsers.end(), p->id) !=
            policy_.endorsers.end() &&
        p->ledger->height() != height) {
      return false;
    }
  }
  return true;
}

bool Network::converged() const {
  const auto& reference = anchor();
  const auto ref_state = reference.snapshot();
  for (std::size_t i = 1; i < peers_.size(); ++i) {
    const auto& other = *peers_[i]->ledger;
    if (other.height() != reference.height()) return false;
    for (std::uint64_t n = 0; n <= reference.height(); ++n) {
      if (other.block(n)->serialize() != reference.block(n)->serialize()) return false;
    }
    if (!(*other.snapshot() == *ref_state)) return false;
  }
  return true;
}

}  // namespace nftl::pipeline
