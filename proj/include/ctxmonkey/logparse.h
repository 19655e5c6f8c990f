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

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/log_time.h"
#include "ctxmonkey/scenario.h"

namespace ctxmonkey {

struct LogcatEntry {
    LogTime timestamp;
    int pid = 0;
    int tid = 0;
    char level = 'I';  // one of V D I W E F
    std::string tag;
    std::string message;

    bool operator==(const LogcatEntry&) const = default;
};

// A line that is not a log record: blank, "--------- beginning of ...", or a
// continuation.
struct SkipLine {};

using LogcatParse = std::variant<LogcatEntry, SkipLine, ParseError>;

/**
 * Parses one `logcat -v threadtime` line:
 *
 *     MM-DD HH:MM:SS.mmm  PID  TID L Tag     : message
 *
 * A line whose first five characters look like "MM-DD" but that fails later is a
 * near miss and yields a ParseError carrying the offending column; anything else
 * that is not a record is skipped. Never throws.
 */
LogcatParse ParseLogcatLine(std::string_view line);

// Formats an entry back to threadtime.
std::string FormatLogcatLine(const LogcatEntry& entry);

// `MM-DD HH:MM:SS <Kind> <index> <interval> <value>`
std::string FormatExecutorLine(const InjectionRecord& record);

// Whole executor log, LF-terminated lines; empty input gives an empty string.
std::string WriteExecutorLog(std::span<const InjectionRecord> records);

// Inverse of FormatExecutorLine. Canonicalizes legacy value spellings. Throws
// ParseError.
InjectionRecord ParseExecutorLine(std::string_view line);

// Skips blank lines; throws ParseError with the 1-based line number.
std::vector<InjectionRecord> ParseExecutorLog(std::string_view text);

// Parsed entries of a logcat capture; skipped lines and near misses are dropped.
std::vector<LogcatEntry> ParseLogcatLog(std::string_view text, std::size_t* errors = nullptr);

struct TimelineItem {
    enum class Source { Injected = 0, Logcat = 1 };

    LogTime timestamp;  // millisecond resolution
    std::variant<InjectionRecord, LogcatEntry> payload;
    // Position within its source list.
    std::size_t sequence = 0;

    Source source() const {
        return std::holds_alternative<InjectionRecord>(payload) ? Source::Injected : Source::Logcat;
    }
    bool operator==(const TimelineItem&) const = default;
};

/**
 * Merges both time-ordered inputs into one ordered timeline keyed on
 * (timestamp, source, sequence): on equal timestamps injected records come before
 * logcat entries, so a cause is never listed after a same-instant effect.
 */
std::vector<TimelineItem> MergeTimeline(std::span<const LogcatEntry> logcat,
                                        std::span<const InjectionRecord> injected);

/**
 * Decides which logcat entries belong to the app under test. Pids are learned from
 * activity-manager "Start proc <pid>:<package>/..." lines and from crash headers
 * ("Process: <package>, PID: <pid>"); entries from unknown pids still match when
 * their tag is the package name or their message names the package.
 */
class AppLogFilter {
  public:
    explicit AppLogFilter(std::string package_id, std::set<int> known_pids = {});

    // Learns pids from |entry|. Returns true when |entry| marks a fatal crash of the
    // app: level F, or a "FATAL EXCEPTION" header, from the app.
    bool Observe(const LogcatEntry& entry);

    bool Matches(const LogcatEntry& entry) const;

    const std::set<int>& pids() const { return pids_; }
    const std::string& package_id() const { return package_id_; }

  private:
    std::string package_id_;
    std::set<int> pids_;
    // Pids that printed a crash header before we knew they were the app's.
    std::set<int> pending_headers_;
};

}  // namespace ctxmonkey
