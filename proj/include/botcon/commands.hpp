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
#ifndef BOTCON_COMMANDS_HPP_
#define BOTCON_COMMANDS_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "botcon/config.hpp"

namespace botcon {

struct CommandOptions {
  // Drop wall-clock fields so identical runs give byte-identical reports.
  bool normalized = false;
  // sweep only: corruption_rate, batch_size, epochs or loss.
  std::string axis = "corruption_rate";
};

const std::vector<std::string_view>& CommandNames();

struct CommandResult {
  nlohmann::ordered_json report;
  std::filesystem::path report_path;
  int exit_code = 0;
};

// Runs one command and writes its artifacts under cfg.paths.out. Every report
// carries the command name, build id and the effective configuration.
// Throws botcon::Error subclasses on failure.
CommandResult RunCommand(std::string_view command, const RunConfig& cfg, const CommandOptions& opts = {});

// Machine-readable error document for a caught exception.
nlohmann::ordered_json ErrorReport(std::string_view command, const std::exception& e);

}  // namespace botcon

#endif  // BOTCON_COMMANDS_HPP_
