/*
 * Copyright 2026 The pinvsm-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// pinvsm: batch front end for the DPU array simulator.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pinvsm/pinvsm.hpp"

namespace fs = std::filesystem;
using namespace pinvsm;

namespace {

struct InitFlags {
  std::optional<std::uint32_t> array_size;
  std::optional<std::uint64_t> dpu_capacity;
  std::optional<std::uint32_t> granularity;
  std::optional<std::string> stopwords;
  std::optional<std::uint64_t> seed;
  bool force = false;
};

Config load_config(const std::string& config_file) {
  if (config_file.empty()) return {};
  std::ifstream in(config_file);
  if (!in) fail(Errc::Io, "cannot open config '" + config_file + "'");
  return parse_config(in);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open '" + path + "'");
  return in;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PiNVSM DPU array simulator"};
  app.require_subcommand(1);

  std::string session_dir = "pinvsm-session";
  std::string config_file;
  app.add_option("--session", session_dir, "Session directory");
  app.add_option("--config", config_file, "Config file of 'key = value' lines");

  InitFlags init;
  auto* init_cmd = app.add_subcommand("init", "Create a fresh session");
  init_cmd->add_option("--array-size", init.array_size, "Number of DPUs");
  init_cmd->add_option("--dpu-capacity", init.dpu_capacity, "NVM bytes per DPU");
  init_cmd->add_option("--granularity", init.granularity, "Default item width in bytes");
  init_cmd->add_option("--stopwords", init.stopwords, "Stopword file, one token per line");
  init_cmd->add_option("--seed", init.seed, "Seed for generated workloads");
  init_cmd->add_flag("--force", init.force, "Overwrite an existing session");

  std::string text_file, table_file;
  std::optional<std::uint32_t> ingest_gran;
  auto* ingest_cmd = app.add_subcommand("ingest", "Ingest text lines or a CSV table");
  auto* text_opt = ingest_cmd->add_option("--text", text_file, "Text file, one message per line");
  auto* table_opt = ingest_cmd->add_option("--table", table_file, "CSV table with a header row");
  ingest_cmd->add_option("--gran", ingest_gran, "Item width for table columns");
  text_opt->excludes(table_opt);
  ingest_cmd->require_option(1);

  std::vector<std::string> query_keys;
  auto* query_cmd = app.add_subcommand("query", "Print records and related keywords");
  query_cmd->add_option("keywords", query_keys, "Keywords")->required();

  std::string workload;
  cli::PipelineOptions pipe;
  auto* run_cmd = app.add_subcommand("run", "Run a workload (colsum | pipeline)");
  run_cmd->add_option("workload", workload, "colsum or pipeline")->required()->check(CLI::IsMember({"colsum", "pipeline"}));
  run_cmd->add_option("--stages", pipe.stages, "Pipeline stage count");
  run_cmd->add_option("--lines", pipe.lines, "Pipeline data-line count");
  run_cmd->add_option("--len", pipe.length, "Items per pipeline data line");

  bool compare = false;
  auto* report_cmd = app.add_subcommand("report", "Print counters as JSON");
  report_cmd->add_flag("--compare", compare, "Compare against the CPU-centric baseline");

  std::string snap_action, snap_file;
  auto* snap_cmd = app.add_subcommand("snapshot", "Save the session to FILE or load it from FILE");
  snap_cmd->add_option("action", snap_action, "save or load")->required()->check(CLI::IsMember({"save", "load"}));
  snap_cmd->add_option("file", snap_file, "Snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const fs::path dir = session_dir;
    const auto state = cli::state_path(dir);

    if (init_cmd->parsed()) {
      Config cfg = load_config(config_file);
      if (init.array_size) cfg.array_size = *init.array_size;
      if (init.dpu_capacity) cfg.dpu_capacity = *init.dpu_capacity;
      if (init.granularity) {
        if (*init.granularity != 1 && *init.granularity != 2 && *init.granularity != 4 && *init.granularity != 8) {
          fail(Errc::Config, "key 'granularity': must be 1, 2, 4 or 8");
        }
        cfg.granularity = make_granularity(*init.granularity);
      }
      if (init.stopwords) cfg.stopwords_path = *init.stopwords;
      if (init.seed) cfg.seed = *init.seed;
      cli::cmd_init(dir, cfg, init.force, std::cout);
      return 0;
    }

    Session s = load_session_file(state);

    if (ingest_cmd->parsed()) {
      if (!text_file.empty()) {
        auto in = open_input(text_file);
        cli::cmd_ingest_text(s, in, std::cout, text_file);
      } else {
        auto in = open_input(table_file);
        std::optional<Granularity> g;
        if (ingest_gran) g = make_granularity(*ingest_gran);
        cli::cmd_ingest_table(s, in, g, std::cout, table_file);
      }
      save_session_file(s, state);
    } else if (query_cmd->parsed()) {
      cli::cmd_query(s, query_keys, std::cout);
      save_session_file(s, state);
    } else if (run_cmd->parsed()) {
      if (workload == "colsum") {
        try {
          cli::cmd_run_colsum(s, std::cout);
        } catch (...) {
          save_session_file(s, state);
          throw;
        }
        save_session_file(s, state);
      } else {
        cli::cmd_run_pipeline(s, pipe, std::cout);
      }
    } else if (report_cmd->parsed()) {
      cli::cmd_report(s, compare, std::cout);
    } else if (snap_cmd->parsed()) {
      if (snap_action == "save") {
        save_session_file(s, snap_file);
        std::cout << "saved " << snap_file << "\n";
      } else {
        Session loaded = load_session_file(snap_file);
        save_session_file(loaded, state);
        std::cout << "loaded " << snap_file << "\n";
      }
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
