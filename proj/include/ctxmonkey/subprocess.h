/*
 * Copyright (C) 2026 The ctxmonkey Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <chrono>
#include <optional>
#include <stop_token>
#include <string>
#include <sys/types.h>
#include <vector>

namespace ctxmonkey {

struct ProcessResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

// Runs |argv| (PATH lookup on argv[0]) to completion. Throws DeviceError if the
// program cannot be started.
ProcessResult RunProcess(const std::vector<std::string>& argv);

// A child whose stdout is read line by line; stderr is discarded. Killed on
// destruction.
class LineProcess {
  public:
    explicit LineProcess(const std::vector<std::string>& argv);
    ~LineProcess();

    LineProcess(const LineProcess&) = delete;
    LineProcess& operator=(const LineProcess&) = delete;

    // Next stdout line without the newline; nullopt at EOF or once |stop| is requested.
    std::optional<std::string> ReadLine(std::stop_token stop);

    // Exit status after EOF, or nullopt when the child was killed.
    std::optional<int> Wait();
    void Kill();

  private:
    pid_t pid_ = -1;
    int fd_ = -1;
    std::string buffer_;
    bool eof_ = false;
    std::optional<int> status_;
};

// Quotes one argument for a POSIX shell.
std::string ShellQuote(const std::string& arg);

}  // namespace ctxmonkey
