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
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ctxmonkey {

/**
 * A logcat-style wall-clock instant: month, day and time of day with millisecond
 * resolution, no year. Stored as milliseconds since 01-01 00:00:00.000 of a leap
 * year so 02-29 is representable. Instants from one run are assumed not to cross
 * a year boundary.
 */
class LogTime {
  public:
    constexpr LogTime() = default;

    static LogTime FromMillis(std::int64_t millis_of_year) { return LogTime(millis_of_year); }

    // Throws ParseError when any field is out of range.
    static LogTime FromFields(int month, int day, int hour, int minute, int second,
                              int millis = 0);

    // Accepts "MM-DD HH:MM:SS" and "MM-DD HH:MM:SS.mmm".
    static std::optional<LogTime> Parse(std::string_view text);

    std::int64_t millis() const { return millis_; }

    // Drops the millisecond part.
    LogTime TruncatedToSeconds() const;

    // "MM-DD HH:MM:SS"
    std::string FormatSeconds() const;
    // "MM-DD HH:MM:SS.mmm"
    std::string FormatMillis() const;

    LogTime operator+(std::chrono::milliseconds d) const { return LogTime(millis_ + d.count()); }
    LogTime operator-(std::chrono::milliseconds d) const { return LogTime(millis_ - d.count()); }
    std::chrono::milliseconds operator-(LogTime other) const {
        return std::chrono::milliseconds(millis_ - other.millis_);
    }

    auto operator<=>(const LogTime&) const = default;

  private:
    explicit constexpr LogTime(std::int64_t millis) : millis_(millis) {}

    std::int64_t millis_ = 0;
};

}  // namespace ctxmonkey
