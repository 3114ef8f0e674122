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

#include "nftl/common/error.hpp"

#include <array>

namespace nftl {

namespace {

constexpr std::array kNames = {
#define NFTL_NAME_ENTRY(name) std::string_view{#name},
    NFTL_ERROR_CODES(NFTL_NAME_ENTRY)
#undef NFTL_NAME_ENTRY
};

}  // namespace

std::string_view to_string(Errc code) {
  return kNames.at(static_cast<std::size_t>(code));
}

std::optional<Errc> errc_from_string(std::string_view text) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == text) return static_cast<Errc>(i);
  }
  return std::nullopt;
}

std::string Error::describe() const {
  std::string out(to_string(code));
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

}  // namespace nftl
