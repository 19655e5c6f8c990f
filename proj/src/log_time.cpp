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

#include "ctxmonkey/log_time.h"

#include <array>
#include <charconv>

#include <fmt/format.h>

#include "ctxmonkey/errors.h"

namespace ctxmonkey {

namespace {

constexpr std::array<int, 12> kDaysInMonth = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
constexpr std::int64_t kMillisPerSecond = 1000;
constexpr std::int64_t kMillisPerDay = 24 * 3600 * kMillisPerSecond;

std::int64_t DayOfYear(int month, int day) {
    std::int64_t days = 0;
    for (int m = 1; m < month; ++m) days += kDaysInMonth[m - 1];
    return days + day - 1;
}

bool ReadFixed(std::string_view text, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > text.size()) return false;
    for (std::size_t i = pos; i < pos + width; ++i) {
        if (text[i] < '0' || text[i] > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, out);
    return ec == std::errc();
}

bool FieldsValid(int month, int day, int hour, int minute, int second, int millis) {
    if (month < 1 || month > 12) return false;
    if (day < 1 || day > kDaysInMonth[month - 1]) return false;
    return hour >= 0 && hour < 24 && minute >= 0 && minute < 60 && second >= 0 && second < 60 &&
           millis >= 0 && millis < 1000;
}

}  // namespace

LogTime LogTime::FromFields(int month, int day, int hour, int minute, int second, int millis) {
    if (!FieldsValid(month, day, hour, minute, second, millis)) {
        throw ParseError(fmt::format("timestamp field out of range: {:02}-{:02} {:02}:{:02}:{:02}.{:03}",
                                     month, day, hour, minute, second, millis));
    }
    std::int64_t ms = DayOfYear(month, day) * kMillisPerDay;
    ms += ((hour * 60 + minute) * 60 + second) * kMillisPerSecond + millis;
    return LogTime(ms);
}

std::optional<LogTime> LogTime::Parse(std::string_view text) {
    // MM-DD HH:MM:SS[.mmm]
    if (text.size() != 14 && text.size() != 18) return std::nullopt;
    int month, day, hour, minute, second, millis = 0;
    if (!ReadFixed(text, 0, 2, month) || text[2] != '-' || !ReadFixed(text, 3, 2, day) ||
        text[5] != ' ' || !ReadFixed(text, 6, 2, hour) || text[8] != ':' ||
        !ReadFixed(text, 9, 2, minute) || text[11] != ':' || !ReadFixed(text, 12, 2, second)) {
        return std::nullopt;
    }
    if (text.size() == 18 && (text[14] != '.' || !ReadFixed(text, 15, 3, millis))) {
        return std::nullopt;
    }
    if (!FieldsValid(month, day, hour, minute, second, millis)) return std::nullopt;
    return FromFields(month, day, hour, minute, second, millis);
}

LogTime LogTime::TruncatedToSeconds() const {
    std::int64_t ms = millis_ - (millis_ % kMillisPerSecond + kMillisPerSecond) % kMillisPerSecond;
    return LogTime(ms);
}

std::string LogTime::FormatSeconds() const {
    std::string full = FormatMillis();
    return full.substr(0, 14);
}

std::string LogTime::FormatMillis() const {
    // Wraps into the year so out-of-range arithmetic still prints a valid stamp.
    constexpr std::int64_t kMillisPerYear = 366 * kMillisPerDay;
    std::int64_t ms = ((millis_ % kMillisPerYear) + kMillisPerYear) % kMillisPerYear;
    std::int64_t day_of_year = ms / kMillisPerDay;
    std::int64_t rem = ms % kMillisPerDay;
    int month = 1;
    while (day_of_year >= kDaysInMonth[month - 1]) {
        day_of_year -= kDaysInMonth[month - 1];
        ++month;
    }
    int day = static_cast<int>(day_of_year) + 1;
    int millis = static_cast<int>(rem % 1000);
    rem /= 1000;
    int second = static_cast<int>(rem % 60);
    rem /= 60;
    int minute = static_cast<int>(rem % 60);
    int hour = static_cast<int>(rem / 60);
    return fmt::format("{:02}-{:02} {:02}:{:02}:{:02}.{:03}", month, day, hour, minute, second,
                       millis);
}

}  // namespace ctxmonkey
