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

#include "nftl/pipeline/store.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

namespace nftl::pipeline {

namespace fs = std::filesystem;

Status write_file_atomic(const fs::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return make_error(Errc::IO_ERROR, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) return make_error(Errc::IO_ERROR, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) return make_error(Errc::IO_ERROR, "cannot replace " + path.string() + ": " + ec.message());
  return ok_status();
}

Result<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(Errc::IO_ERROR, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Status save_registry(const fs::path& dir, const membership::Registry& registry) {
  return write_file_atomic(dir / kRegistryFile, canonical(registry.to_record()) + "\n");
}

Status save_network_config(const fs::path& dir, const NetworkConfig& config) {
  return write_file_atomic(dir / kNetworkFile, canonical(config.to_record()) + "\n");
}

Result<Store> load_store(const fs::path& dir) {
  auto registry_text = read_file(dir / kRegistryFile);
  if (!registry_text) return registry_text.error();
  auto network_text = read_file(dir / kNetworkFile);
  if (!network_text) return network_text.error();

  auto registry_record = parse_record(*registry_text);
  if (!registry_record) return registry_record.error();
  auto registry = membership::Registry::load(*registry_record);
  if (!registry) return registry.error();

  auto network_record = parse_record(*network_text);
  if (!network_record) return network_record.error();
  Store store;
  try {
    store.config = NetworkConfig::from_record(*network_record);
  } catch (const std::invalid_argument& e) {
    return make_error(Errc::INVALID_CONFIG, std::string(kNetworkFile) + ": " + e.what());
  }
  if (auto st = store.config.check(); !st) return st.error();
  store.registry = std::move(registry).value();
  if (auto st = register_nodes(*store.registry, store.config); !st) return st.error();
  return store;
}

Result<Store> open_store(const fs::path& dir, const NetworkConfig& default_config,
                         const std::string& registry_seed) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return make_error(Errc::IO_ERROR, "cannot create " + dir.string() + ": " + ec.message());
  if (fs::exists(dir / kRegistryFile)) return load_store(dir);

  if (auto st = default_config.check(); !st) return st.error();
  Store store;
  store.created = true;
  store.config = default_config;
  store.registry = std::make_unique<membership::Registry>(registry_seed);
  if (auto st = register_nodes(*store.registry, store.config); !st) return st.error();
  if (auto st = save_network_config(dir, store.config); !st) return st.error();
  if (auto st = save_registry(dir, *store.registry); !st) return st.error();
  return store;
}

}  // namespace nftl::pipeline
