// Copyright 2026 The cvoc Authors.
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

#ifndef CVOC_LOG_HPP_
#define CVOC_LOG_HPP_

#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>

namespace cvoc {

// Timestamped log lines on standard error; machine-readable outputs
// never go to standard output.
inline void log_line(const char* level, const std::string& msg) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm_buf{};
  gmtime_r(&t, &tm_buf);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_buf);
  std::fprintf(stderr, "%s %s %s\n", stamp, level, msg.c_str());
}

inline void log_info(const std::string& msg) { log_line("INFO ", msg); }
inline void log_warn(const std::string& msg) { log_line("WARN ", msg); }
inline void log_error(const std::string& msg) { log_line("ERROR", msg); }

}  // namespace cvoc

#endif  // CVOC_LOG_HPP_
