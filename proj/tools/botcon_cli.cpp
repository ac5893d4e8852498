/* Copyright 2026 The botcon Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
// Command-line entry point: botcon <command> [--config f.toml] [--set k=v]...

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "botcon/commands.hpp"
#include "botcon/config.hpp"
#include "botcon/log.hpp"

namespace {

int Fail(const std::string& command, const std::exception& e, int code) {
  std::cerr << botcon::ErrorReport(command, e).dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrastive bot-detection pipeline"};
  app.set_version_flag("--version", std::string(botcon::BuildId()));
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<int64_t> seed;
  std::string out;
  bool normalized = false;
  bool verbose = false;
  std::string axis = "corruption_rate";

  app.add_option("--config", config_path, "TOML run configuration");
  app.add_option("--set", overrides, "Override a config key, e.g. --set train.epochs=10")->allow_extra_args(false);
  app.add_option("--seed", seed, "Global seed")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "Output directory");
  app.add_flag("--normalized", normalized, "Omit wall-clock fields from reports");
  app.add_flag("-v,--verbose", verbose, "Progress logging");
  app.require_subcommand(1, 1);
  std::string command;
  for (std::string_view name : botcon::CommandNames()) {
    CLI::App* sub = app.add_subcommand(std::string(name));
    sub->fallthrough();
    if (name == "sweep") sub->add_option("--axis", axis, "corruption_rate, batch_size, epochs or loss");
    sub->callback([&command, name] { command = std::string(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail(command, botcon::ConfigError(e.what(), "command_line"), 2);
  }

  if (verbose) botcon::SetLogLevel(botcon::LogLevel::kInfo);
  try {
    if (seed) overrides.push_back("seed=" + std::to_string(*seed));
    if (!out.empty()) overrides.push_back("paths.out='" + out + "'");
    const botcon::RunConfig cfg =
        config_path.empty() ? botcon::ParseRunConfig("", overrides) : botcon::LoadRunConfig(config_path, overrides);
    botcon::CommandOptions opts;
    opts.normalized = normalized;
    opts.axis = axis;
    const botcon::CommandResult r = botcon::RunCommand(command, cfg, opts);
    std::cout << r.report_path.string() << std::endl;
    return r.exit_code;
  } catch (const botcon::ConfigError& e) {
    return Fail(command, e, 2);
  } catch (const botcon::ParseError& e) {
    return Fail(command, e, 2);
  } catch (const std::exception& e) {
    return Fail(command, e, 1);
  }
}
