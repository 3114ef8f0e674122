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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "nftl/pipeline/network.hpp"

namespace nftl::pipeline {

inline constexpr std::string_view kRegistryFile = "registry.json";
inline constexpr std::string_view kNetworkFile = "network.json";

/// Registry and network configuration kept next to the anchor's block log.
struct Store {
  std::unique_ptr<membership::Registry> registry;
  NetworkConfig config;
  /// True when the data directory held no registry yet.
  bool created = false;
};

/// Opens the store in `dir`, creating it with `registry_seed` and
/// `default_config` when absent. An existing store keeps its own
/// configuration. Peers are registered as nodes.
Result<Store> open_store(const std::filesystem::path& dir, const NetworkConfig& default_config,
                         const std::string& registry_seed);

/// Loads an existing store without creating anything.
Result<Store> load_store(const std::filesystem::path& dir);

Status save_registry(const std::filesystem::path& dir, const membership::Registry& registry);
Status save_network_config(const std::filesystem::path& dir, const NetworkConfig& config);

/// Writes `content` to `path` through a temporary file and a rename.
Status write_file_atomic(const std::filesystem::path& path, std::string_view content);
Result<std::string> read_file(const std::filesystem::path& path);

}  // namespace nftl::pipeline
