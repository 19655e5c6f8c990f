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
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxmonkey/executor.h"
#include "ctxmonkey/logparse.h"

namespace ctxmonkey {

inline constexpr std::string_view kAnalysisJsonName = "analysis.json";
inline constexpr std::string_view kUnknownActivity = "unknown";
inline constexpr std::string_view kSeverities = "WEF";

struct Issue {
    char severity = 'E';  // W, E or F
    LogTime timestamp;
    int pid = 0;
    int tid = 0;
    std::string tag;
    std::string message;
    std::string activity{kUnknownActivity};
    // Injected records in [timestamp - window_before, timestamp + window_after].
    std::vector<InjectionRecord> adjacent_events;

    bool operator==(const Issue&) const = default;
};

struct AnalysisConfig {
    std::uint32_t window_before_secs = 10;
    std::uint32_t window_after_secs = 2;
    std::string package_id;
    std::set<int> pids;
};

/**
 * Picks the app's W/E/F logcat entries out of |timeline|. Each issue is attributed
 * to the last activity marker at or before it and gets every injected record of the
 * timeline that falls inside the correlation window.
 */
std::vector<Issue> ExtractIssues(std::span<const TimelineItem> timeline,
                                 std::span<const ActivityMarker> markers,
                                 const AnalysisConfig& config);

using SeverityGroups = std::map<char, std::vector<Issue>>;

// activity -> severity -> issues, input order kept inside each bucket.
std::map<std::string, SeverityGroups> GroupByActivity(std::span<const Issue> issues);

struct Summary {
    std::size_t total = 0;
    std::map<char, std::size_t> by_severity;          // always has W, E and F
    std::map<EventKind, std::size_t> adjacent_by_kind;  // each attachment counted

    bool operator==(const Summary&) const = default;
};

Summary Summarize(std::span<const Issue> issues);

struct Analysis {
    std::string package_id;
    std::uint32_t window_before_secs = 10;
    std::uint32_t window_after_secs = 2;
    std::vector<Issue> issues;

    bool operator==(const Analysis&) const = default;
};

std::string WriteAnalysisJson(const Analysis& analysis);
// Throws ParseError.
Analysis ParseAnalysisJson(std::string_view text);

/**
 * Loads run.json, executor.log and logcat.log from |run_dir|, merges them and
 * extracts issues. Pids recorded in run.json are added to |config.pids| and the
 * package defaults to the one in run.json. Throws ParseError for unreadable
 * artifacts.
 */
Analysis AnalyzeRunDir(const std::filesystem::path& run_dir, AnalysisConfig config);

}  // namespace ctxmonkey
