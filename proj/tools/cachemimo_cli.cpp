// Copyright 2026 The cachemimo Authors
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


#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cachemimo/cachemimo.h"

namespace {

struct ConfigHandle {
  cm_config* ptr = nullptr;
  ~ConfigHandle() { cm_config_free(ptr); }
};

struct ResultHandle {
  cm_result* ptr = nullptr;
  ~ResultHandle() { cm_result_free(ptr); }
};

// Exit codes: 0 ok, 2 config error, 3 I/O error, 1 anything else.
int exit_code(cm_status s) {
  switch (s) {
    case CM_OK:
      return 0;
    case CM_ERR_CONFIG:
    case CM_ERR_ARGUMENT:
      return 2;
    case CM_ERR_IO:
      return 3;
    default:
      return 1;
  }
}

int report(cm_status s) {
  if (s != CM_OK) std::cerr << "error: " << cm_last_error() << '\n';
  return exit_code(s);
}

int write_result(const cm_result* result, const std::string& out, const std::string& format) {
  const cm_format f = format == "json" ? CM_FORMAT_JSON : CM_FORMAT_CSV;
  if (!out.empty()) return report(cm_result_write(result, out.c_str(), f));
  char* text = nullptr;
  const cm_status s = cm_result_to_string(result, f, &text);
  if (s != CM_OK) return report(s);
  std::fputs(text, stdout);
  cm_string_free(text);
  return std::fflush(stdout) == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-aided multi-cell massive MIMO simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cm_version()));

  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
  std::optional<int> workers;
  std::string out_path;
  std::string format = "csv";

  auto* sim = app.add_subcommand("simulate", "Monte Carlo and closed-form sweep");
  sim->add_option("--config", config_path, "config JSON file")->required();
  sim->add_option("--preset", preset, "preset sweep")->check(CLI::IsMember({"fig1", "fig2", "fig4", "fig6"}));
  sim->add_option("--seed", seed, "master seed");
  sim->add_option("--trials", trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
  sim->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  sim->add_option("--out", out_path, "output file (default stdout)");
  sim->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* analyze = app.add_subcommand("analyze", "closed-form values only");
  analyze->add_option("--config", config_path, "config JSON file")->required();
  analyze->add_option("--out", out_path, "output file (default stdout)");
  analyze->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* selftest = app.add_subcommand("selftest", "run built-in checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (selftest->parsed()) {
    char* text = nullptr;
    const cm_status s = cm_selftest(&text);
    if (text) {
      std::fputs(text, stdout);
      cm_string_free(text);
    }
    return report(s);
  }

  ConfigHandle config;
  if (cm_status s = cm_config_load(config_path.c_str(), &config.ptr); s != CM_OK) return report(s);

  ResultHandle result;
  if (sim->parsed()) {
    if (!preset.empty()) {
      if (cm_status s = cm_config_apply_preset(config.ptr, preset.c_str()); s != CM_OK) return report(s);
    }
    if (seed) cm_config_set_seed(config.ptr, *seed);
    if (trials) {
      if (cm_status s = cm_config_set_trials(config.ptr, *trials); s != CM_OK) return report(s);
    }
    if (workers) {
      if (cm_status s = cm_config_set_workers(config.ptr, *workers); s != CM_OK) return report(s);
    }
    if (cm_status s = cm_simulate(config.ptr, &result.ptr); s != CM_OK) return report(s);
  } else {
    if (cm_status s = cm_analyze(config.ptr, &result.ptr); s != CM_OK) return report(s);
  }
  return write_result(result.ptr, out_path, format);
}
