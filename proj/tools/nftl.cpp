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

// nftl: operator entry point for the auction ledger.
//
//   nftl serve --data-dir DIR [--listen HOST:PORT] [--peers N] [--policy M-of-N]
//   nftl scenario --scenario FILE [--seed S] [--trace FILE] [--format human|canonical]
//   nftl provenance --data-dir DIR COMMODITY_ID
//   nftl verify --data-dir DIR

#include <iostream>
#include <map>
#include <string>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "nftl/cli/commands.hpp"

namespace {

using nftl::cli::Format;

const std::map<std::string, Format> kFormats{{"human", Format::Human},
                                             {"canonical", Format::Canonical}};

bool split_listen(const std::string& listen, std::string& host, int& port) {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos) return false;
  host = listen.substr(0, colon);
  try {
    std::size_t used = 0;
    port = std::stoi(listen.substr(colon + 1), &used);
    if (used != listen.size() - colon - 1) return false;
  } catch (const std::exception&) {
    return false;
  }
  return !host.empty() && port >= 0 && port <= 65535;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permissioned auction ledger with provenance tracking"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error")
      ->envname("NFTL_LOG_LEVEL");

  Format format = Format::Human;
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  };

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string serve_dir;
  std::string listen = "127.0.0.1:8080";
  std::size_t peers = 1;
  std::string policy = "1-of-1";
  std::size_t batch_size = 10;
  std::uint64_t batch_timeout = 1;
  std::uint64_t tick_ms = 20;
  serve->add_option("--data-dir", serve_dir, "Store directory")->required()->envname("NFTL_DATA_DIR");
  serve->add_option("--listen", listen, "HOST:PORT")->envname("NFTL_LISTEN");
  serve->add_option("--peers", peers, "Peer count for a new store")->envname("NFTL_PEERS");
  serve->add_option("--policy", policy, "Endorsement policy m-of-n")->envname("NFTL_POLICY");
  serve->add_option("--batch-size", batch_size, "Orderer max batch size")
      ->envname("NFTL_BATCH_SIZE");
  serve->add_option("--batch-timeout", batch_timeout, "Orderer batch timeout in ticks")
      ->envname("NFTL_BATCH_TIMEOUT");
  serve->add_option("--tick-ms", tick_ms, "Milliseconds per logical tick")->envname("NFTL_TICK_MS");

  // scenario
  auto* scenario = app.add_subcommand("scenario", "Replay a scenario file through the pipeline");
  nftl::cli::ScenarioOptions scenario_opts;
  std::string scenario_path;
  std::string trace_path;
  std::string scenario_dir;
  scenario->add_option("--scenario", scenario_path, "Scenario file")->required();
  scenario->add_option("--seed", scenario_opts.seed, "Scheduler seed");
  scenario->add_option("--trace", trace_path, "Write the event trace here");
  scenario->add_option("--data-dir", scenario_dir, "Persist the anchor ledger here");
  add_format(scenario);

  // provenance
  auto* provenance = app.add_subcommand("provenance", "Print a commodity's provenance");
  std::string prov_dir;
  std::string commodity_id;
  provenance->add_option("--data-dir", prov_dir, "Store directory")
      ->required()
      ->envname("NFTL_DATA_DIR");
  provenance->add_option("commodity", commodity_id, "Commodity id")->required();
  add_format(provenance);

  // verify
  auto* verify = app.add_subcommand("verify", "Verify chain integrity");
  std::string verify_dir;
  verify->add_option("--data-dir", verify_dir, "Store directory")
      ->required()
      ->envname("NFTL_DATA_DIR");
  add_format(verify);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  if (*serve) {
    nftl::cli::ServeOptions opts;
    if (!split_listen(listen, opts.host, opts.port)) {
      std::cerr << "--listen must be HOST:PORT\n";
      return nftl::cli::kExitParseError;
    }
    auto mn = nftl::cli::parse_policy(policy);
    if (!mn) {
      std::cerr << "--policy must be m-of-n\n";
      return nftl::cli::kExitParseError;
    }
    opts.service.data_dir = serve_dir;
    opts.service.network.peers = peers;
    opts.service.network.required_endorsements = mn->first;
    opts.service.network.endorsers = mn->second;
    opts.service.network.orderer.max_batch_size = batch_size;
    opts.service.network.orderer.batch_timeout_ticks = batch_timeout;
    opts.service.tick_interval_ms = tick_ms;
    return nftl::cli::serve(opts, std::cout, std::cerr);
  }
  if (*scenario) {
    scenario_opts.scenario = scenario_path;
    if (!trace_path.empty()) scenario_opts.trace = trace_path;
    if (!scenario_dir.empty()) scenario_opts.data_dir = scenario_dir;
    scenario_opts.format = format;
    return nftl::cli::run_scenario(scenario_opts, std::cout, std::cerr);
  }
  if (*provenance) {
    return nftl::cli::query_provenance(prov_dir, commodity_id, format, std::cout, std::cerr);
  }
  return nftl::cli::verify_chain(verify_dir, format, std::cout, std::cerr);
}
