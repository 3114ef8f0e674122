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

#include "nftl/pipeline/proposal.hpp"

namespace nftl::pipeline {

std::string Proposal::signing_bytes() const {
  return canonical(
      Value{{"operation", operation}, {"args", args}, {"creator", creator}, {"nonce", nonce}});
}

Value Proposal::to_record() const {
  return Value{{"operation", operation},
               {"args", args},
               {"creator", creator},
               {"nonce", nonce},
               {"clientSignature", client_signature.to_record()}};
}

Result<Proposal> sign_proposal(const membership::Registry& registry, std::string creator,
                               std::string operation, Value args, std::string nonce) {
  Proposal p{std::move(operation), std::move(args), std::move(creator), std::move(nonce), {}};
  if (!is_canonical_safe(p.args)) {
    return make_error(Errc::UNSUPPORTED_VALUE, "proposal args are not canonical-safe");
  }
  auto sig = registry.sign_payload(p.creator, p.signing_bytes());
  if (!sig) return sig.error();
  p.client_signature = std::move(sig).value();
  return p;
}

std::string_view to_string(Rejection rejection) {
  switch (rejection) {
    case Rejection::None: return "NONE";
    case Rejection::BadSignature: return "BAD_SIGNATURE";
    case Rejection::ChaincodeError: return "CHAINCODE_ERROR";
    case Rejection::EndorsementShortfall: return "ENDORSEMENT_SHORTFALL";
  }
  return "NONE";
}

std::optional<Errc> SubmitResult::client_code() const {
  switch (rejection) {
    case Rejection::None: return std::nullopt;
    case Rejection::ChaincodeError: return error ? error->code : Errc::CHAINCODE_ERROR;
    case Rejection::BadSignature: return Errc::BAD_SIGNATURE;
    case Rejection::EndorsementShortfall: return Errc::ENDORSEMENT_SHORTFALL;
  }
  return std::nullopt;
}

Value SubmitResult::to_record() const {
  Value outcomes = Value::object();
  for (const auto& [peer, outcome] : endorser_outcomes) outcomes[peer] = outcome;
  Value record{{"txId", tx_id}, {"endorsers", std::move(outcomes)}};
  if (ordered()) {
    record["result"] = result;
  } else {
    record["rejection"] = std::string(to_string(rejection));
    record["error"] = std::string(nftl::to_string(*client_code()));
    if (error) record["message"] = error->message;
  }
  return record;
}

}  // namespace nftl::pipeline
