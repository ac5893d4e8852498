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
#include "botcon/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace botcon {
namespace {
std::atomic<LogLevel> g_level{LogLevel::kWarning};
std::mutex g_mu;
}  // namespace

void SetLogLevel(LogLevel level) { g_level.store(level); }
LogLevel GetLogLevel() { return g_level.load(); }

void Log(LogLevel level, std::string_view message) {
  if (level < g_level.load() || level == LogLevel::kSilent) return;
  static constexpr const char* kTags[] = {"debug", "info", "warning"};
  std::lock_guard<std::mutex> lock(g_mu);
  std::clog << "[botcon " << kTags[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace botcon
