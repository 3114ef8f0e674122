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
#include <optional>
#include <ostream>
#include <string>

#include "nftl/api/service.hpp"

namespace nftl::cli {

enum class Format { Human, Canonical };

/// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParseError = 2;

struct ScenarioOptions {
  std::filesystem::path scenario;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> data_dir;
  Format format = Format::Human;
};

/// Runs a scenario file. 0 when every embedded expectation holds, 1 with a
/// diff otherwise, 2 when the file does not parse.
int run_scenario(const ScenarioOptions& options, std::ostream& out, std::ostream& err);

/// Prints a commodity's ownership chain and renovations in commit order.
/// 1 for an unknown commodity or a missing store.
int query_provenance(const std::filesystem::path& data_dir, const std::string& commodity_id,
                     Format format, std::ostream& out, std::ostream& err);

/// Verifies the persisted chain without modifying it. 1 with the first bad
/// block on failure.
int verify_chain(const std::filesystem::path& data_dir, Format format, std::ostream& out,
                 std::ostream& err);

struct ServeOptions {
  api::ServiceConfig service;
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// Starts the service and blocks until it is stopped. Nonzero when the
/// store cannot be recovered or the address cannot be bound.
int serve(const ServeOptions& options, std::ostream& out, std::ostream& err);

/// Parses "m-of-n" (e.g. "2-of-3").
std::optional<std::pair<std::size_t, std::size_t>> parse_policy(std::string_view text);

}  // namespace nftl::cli
