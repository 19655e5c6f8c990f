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

#include "ctxmonkey/errors.h"

#include <fmt/format.h>

namespace ctxmonkey {

namespace {

std::string DescribeParseError(const std::string& reason, std::size_t line, std::size_t column) {
    if (line != 0 && column != 0) return fmt::format("line {}, column {}: {}", line, column, reason);
    if (line != 0) return fmt::format("line {}: {}", line, reason);
    if (column != 0) return fmt::format("column {}: {}", column, reason);
    return reason;
}

}  // namespace

ParseError::ParseError(std::string reason, std::size_t line, std::size_t column)
    : Error(DescribeParseError(reason, line, column)),
      reason_(std::move(reason)),
      line_(line),
      column_(column) {}

ConfigError::ConfigError(std::string key, const std::string& what)
    : Error(fmt::format("{}: {}", key, what)), key_(std::move(key)) {}

}  // namespace ctxmonkey
