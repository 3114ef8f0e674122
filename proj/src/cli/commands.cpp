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

#include "nftl/cli/commands.hpp"

#include <charconv>
#include <csignal>
#include <fstream>

#include "nftl/chaincode/chaincode.hpp"
#include "nftl/pipeline/scenario.hpp"
#include "nftl/pipeline/store.hpp"

namespace nftl::cli {

namespace fs = std::filesystem;

namespace {

std::string version_text(const Value& v) {
  if (!v.is_object()) return "uncommitted";
  return std::to_string(v["block"].get<std::uint64_t>()) + "." +
         std::to_string(v["tx"].get<std::uint64_t>());
}

std::string who(const membership::Registry& registry, const std::string& id) {
  auto identity = registry.find(id);
  return identity ? identity->display_name + " (" + id + ")" : id;
}

}  // namespace

std::optional<std::pair<std::size_t, std::size_t>> parse_policy(std::string_view text) {
  auto sep = text.find("-of-");
  if (sep == std::string_view::npos) return std::nullopt;
  auto parse = [](std::string_view s) -> std::optional<std::size_t> {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
  };
  auto m = parse(text.substr(0, sep));
  auto n = parse(text.substr(sep + 4));
  if (!m || !n) return std::nullopt;
  return std::pair{*m, *n};
}

int run_scenario(const ScenarioOptions& options, std::ostream& out, std::ostream& err) {
  auto scenario = pipeline::load_scenario(options.scenario);
  if (!scenario) {
    err << options.scenario.string() << ": " << scenario.error().describe() << "\n";
    return scenario.error().code == Errc::SCENARIO_PARSE_ERROR ? kExitParseError : kExitFailure;
  }

  pipeline::RunOptions run_opts;
  if (options.data_dir) {
    if (fs::exists(*options.data_dir / ledger::kBlockLogFile)) {
      err << options.data_dir->string() << " already holds a chain\n";
      return kExitFailure;
    }
    std::error_code ec;
    fs::create_directories(*options.data_dir, ec);
    if (ec) {
      err << "cannot create " << options.data_dir->string() << ": " << ec.message() << "\n";
      return kExitFailure;
    }
    run_opts.data_dir = options.data_dir;
  }

  auto report = pipeline::run_network(*scenario, options.seed, run_opts);
  if (!report) {
    err << "scenario failed to run: " << report.error().describe() << "\n";
    return kExitFailure;
  }

  if (options.trace) {
    if (auto st = pipeline::write_file_atomic(*options.trace, report->trace.render()); !st) {
      err << st.error().describe() << "\n";
      return kExitFailure;
    }
  }
  if (options.data_dir) {
    auto registry = pipeline::make_scenario_registry(*scenario, options.seed);
    if (!registry) {
      err << registry.error().describe() << "\n";
      return kExitFailure;
    }
    auto saved = pipeline::save_registry(*options.data_dir, **registry);
    if (saved) saved = pipeline::save_network_config(*options.data_dir, scenario->network);
    if (!saved) {
      err << saved.error().describe() << "\n";
      return kExitFailure;
    }
  }

  const auto blocks = report->chains.empty() ? 0 : report->chains.front().size() - 1;
  if (options.format == Format::Canonical) {
    Value diffs = Value::array();
    for (const auto& d : report->diffs) {
      diffs.push_back(Value{{"subject", d.subject},
                            {"field", d.field},
                            {"expected", d.expected},
                            {"actual", d.actual}});
    }
    Value bindings = Value::object();
    for (const auto& [k, v] : report->bindings) bindings[k] = v;
    out << canonical(Value{{"passed", report->passed()},
                           {"seed", options.seed},
                           {"blocks", blocks},
                           {"converged", report->converged},
                           {"bindings", std::move(bindings)},
                           {"diffs", std::move(diffs)}})
        << "\n";
  } else {
    out << "scenario " << options.scenario.filename().string() << " seed " << options.seed << ": "
        << report->outcomes.size() << " proposals, " << blocks << " blocks, "
        << (report->converged ? "peers converged" : "peers DIVERGED") << "\n";
    for (const auto& d : report->diffs) out << "  FAIL " << d.describe() << "\n";
    out << (report->passed() ? "PASS" : "FAIL") << "\n";
  }
  return report->passed() ? kExitOk : kExitFailure;
}

int query_provenance(const fs::path& data_dir, const std::string& commodity_id, Format format,
                     std::ostream& out, std::ostream& err) {
  auto store = pipeline::load_store(data_dir);
  if (!store) {
    err << "cannot open store " << data_dir.string() << ": " << store.error().describe() << "\n";
    return kExitFailure;
  }
  ledger::LedgerOptions lopts;
  lopts.data_dir = data_dir;
  auto ledger = ledger::Ledger::open(lopts, *store->registry, store->config.policy());
  if (!ledger) {
    err << ledger.error().describe() << "\n";
    return kExitFailure;
  }
  pipeline::LedgerQueryView view(**ledger);
  auto prov = chaincode::query(chaincode::op::kGetProvenance, Value{{"commodityId", commodity_id}},
                               view);
  if (!prov) {
    err << prov.error().describe() << "\n";
    return kExitFailure;
  }
  if (format == Format::Canonical) {
    out << canonical(*prov) << "\n";
    return kExitOk;
  }

  const auto& p = *prov;
  const auto& registry = *store->registry;
  out << "commodity " << p["commodityId"].get<std::string>() << ": "
      << p["description"].get<std::string>() << "\n";
  out << "owner " << who(registry, p["owner"].get<std::string>()) << "\n";
  for (const auto& e : p["timeline"]) {
    if (e["kind"] == "OWNERSHIP") {
      out << "  " << version_text(e["acquiredAtVersion"]) << "  "
          << e["viaListingId"].get<std::string>() << "  owner "
          << who(registry, e["owner"].get<std::string>()) << "\n";
    } else {
      out << "  " << version_text(e["version"]) << "  RENOVATION " << e["date"].get<std::string>()
          << " cost " << e["cost"].get<std::int64_t>() << " by "
          << who(registry, e["renovatingOwner"].get<std::string>()) << ": "
          << e["description"].get<std::string>() << "\n";
    }
  }
  return kExitOk;
}

int verify_chain(const fs::path& data_dir, Format format, std::ostream& out, std::ostream& err) {
  const auto log = data_dir / ledger::kBlockLogFile;
  if (!fs::exists(log)) {
    if (!fs::exists(data_dir)) {
      err << "no store at " << data_dir.string() << "\n";
      return kExitFailure;
    }
    ledger::VerifyReport empty;
    if (format == Format::Canonical) {
      out << canonical(empty.to_record()) << "\n";
    } else {
      out << "chain ok: genesis only\n";
    }
    return kExitOk;
  }
  auto store = pipeline::load_store(data_dir);
  if (!store) {
    err << "cannot open store " << data_dir.string() << ": " << store.error().describe() << "\n";
    return kExitFailure;
  }
  auto report = ledger::verify_log_file(log, *store->registry, store->config.policy());
  if (format == Format::Canonical) {
    out << canonical(report.to_record()) << "\n";
  } else if (report.ok) {
    out << "chain ok: " << report.blocks_checked << " blocks verified\n";
  } else {
    out << "chain CORRUPT at block " << report.first_bad_block.value_or(0) << " ("
        << ledger::to_string(report.problem) << "): " << report.detail << "\n";
  }
  return report.ok ? kExitOk : kExitFailure;
}

namespace {
api::ApiService* g_running = nullptr;
extern "C" void on_signal(int) {
  if (g_running) g_running->stop();
}
}  // namespace

int serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  auto svc = api::ApiService::create(options.service);
  if (!svc) {
    err << "cannot start: " << svc.error().describe() << "\n";
    return kExitFailure;
  }
  auto port = (*svc)->start(options.host, options.port);
  if (!port) {
    err << port.error().describe() << "\n";
    return kExitFailure;
  }
  out << "listening on http://" << options.host << ":" << *port << " (height "
      << (*svc)->anchor().height() << ")" << std::endl;
  g_running = svc->get();
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  (*svc)->wait();
  g_running = nullptr;
  return kExitOk;
}

}  // namespace nftl::cli
