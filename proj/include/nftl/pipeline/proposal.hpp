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

#include <optional>
#include <string>
#include <vector>

#include "nftl/common/canonical.hpp"
#include "nftl/common/error.hpp"
#include "nftl/ledger/types.hpp"
#include "nftl/membership/registry.hpp"

namespace nftl::pipeline {

/// A client's signed request to run one chaincode operation.
struct Proposal {
  std::string operation;
  Value args = Value::object();
  std::string creator;
  std::string nonce;
  membership::Signature client_signature;

  std::string tx_id() const { return ledger::make_tx_id(creator, nonce); }
  /// Bytes covered by the client signature.
  std::string signing_bytes() const;
  Value to_record() const;
};

/// Builds a proposal and signs it with the creator's registry key.
Result<Proposal> sign_proposal(const membership::Registry& registry, std::string creator,
                               std::string operation, Value args, std::string nonce);

/// One endorser's answer. A chaincode error is carried in `result`, not
/// reported as a transport failure.
struct Endorsement {
  std::string peer_id;
  Result<Value> result = Value::object();
  std::vector<ledger::ReadItem> read_set;
  std::vector<ledger::WriteItem> write_set;
  /// Signed bytes; empty when the chaincode failed.
  std::string payload;
  membership::Signature signature;
};

/// Why a proposal did not reach the orderer.
enum class Rejection { None, BadSignature, ChaincodeError, EndorsementShortfall };

/// Outcome of submit_proposal.
struct SubmitResult {
  std::string tx_id;
  Rejection rejection = Rejection::None;
  /// For ChaincodeError: the operation's own error (BID_TOO_LOW, ...).
  /// For the other rejections: a pipeline error.
  std::optional<Error> error;
  /// The agreed operation result when the envelope was ordered.
  Value result = Value::object();
  /// Per-endorser outcome: peer id to "OK", "DROPPED" or an error code.
  std::vector<std::pair<std::string, std::string>> endorser_outcomes;

  bool ordered() const { return rejection == Rejection::None; }
  /// Error code as reported to clients: the chaincode code for chaincode
  /// failures, otherwise BAD_SIGNATURE or ENDORSEMENT_SHORTFALL.
  std::optional<Errc> client_code() const;
  Value to_record() const;
};

std::string_view to_string(Rejection rejection);

}  // namespace nftl::pipeline
