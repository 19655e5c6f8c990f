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

#include "ctxmonkey/analysis.h"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

#include "ctxmonkey/files.h"

namespace ctxmonkey {

using nlohmann::json;

namespace {

bool IsSeverity(char level) {
    return kSeverities.find(level) != std::string_view::npos;
}

json RecordToJson(const InjectionRecord& r) {
    return {{"timestamp", r.timestamp.FormatSeconds()},
            {"kind", KindName(r.event.kind)},
            {"index", r.event.index},
            {"interval", r.event.interval_secs},
            {"value", r.event.value}};
}

InjectionRecord RecordFromJson(const json& j) {
    auto stamp = LogTime::Parse(j.at("timestamp").get<std::string>());
    if (!stamp) throw ParseError("analysis.json: bad event timestamp");
    auto kind = ParseKind(j.at("kind").get<std::string>());
    if (!kind) throw ParseError("analysis.json: unknown event kind");
    auto value = CanonicalValue(*kind, j.at("value").get<std::string>());
    if (!value) throw ParseError("analysis.json: bad event value");
    return InjectionRecord{*stamp,
                           ContextualEvent{.kind = *kind,
                                           .index = j.at("index").get<std::uint32_t>(),
                                           .interval_secs = j.at("interval").get<std::uint32_t>(),
                                           .value = *value}};
}

}  // namespace

std::vector<Issue> ExtractIssues(std::span<const TimelineItem> timeline,
                                 std::span<const ActivityMarker> markers,
                                 const AnalysisConfig& config) {
    std::vector<InjectionRecord> injected;
    for (const auto& item : timeline) {
        if (const auto* r = std::get_if<InjectionRecord>(&item.payload)) injected.push_back(*r);
    }
    auto by_time = [](const InjectionRecord& r, LogTime t) { return r.timestamp < t; };
    const std::chrono::seconds before(config.window_before_secs);
    const std::chrono::seconds after(config.window_after_secs);

    AppLogFilter filter(config.package_id, config.pids);
    std::vector<Issue> issues;
    for (const auto& item : timeline) {
        const auto* entry = std::get_if<LogcatEntry>(&item.payload);
        if (!entry) continue;
        filter.Observe(*entry);
        if (!IsSeverity(entry->level) || !filter.Matches(*entry)) continue;

        Issue issue{.severity = entry->level,
                    .timestamp = entry->timestamp,
                    .pid = entry->pid,
                    .tid = entry->tid,
                    .tag = entry->tag,
                    .message = entry->message};
        for (const auto& m : markers) {
            if (m.timestamp <= entry->timestamp) issue.activity = m.activity;
        }
        LogTime lo = entry->timestamp - before;
        LogTime hi = entry->timestamp + after;
        auto it = std::lower_bound(injected.begin(), injected.end(), lo, by_time);
        for (; it != injected.end() && it->timestamp <= hi; ++it) {
            issue.adjacent_events.push_back(*it);
        }
        issues.push_back(std::move(issue));
    }
    return issues;
}

std::map<std::string, SeverityGroups> GroupByActivity(std::span<const Issue> issues) {
    std::map<std::string, SeverityGroups> groups;
    for (const auto& issue : issues) groups[issue.activity][issue.severity].push_back(issue);
    return groups;
}

Summary Summarize(std::span<const Issue> issues) {
    Summary s;
    for (char c : kSeverities) s.by_severity[c] = 0;
    for (const auto& issue : issues) {
        ++s.total;
        ++s.by_severity[issue.severity];
        for (const auto& r : issue.adjacent_events) ++s.adjacent_by_kind[r.event.kind];
    }
    return s;
}

std::string WriteAnalysisJson(const Analysis& analysis) {
    json issues = json::array();
    for (const auto& issue : analysis.issues) {
        json adjacent = json::array();
        for (const auto& r : issue.adjacent_events) adjacent.push_back(RecordToJson(r));
        issues.push_back({{"severity", std::string(1, issue.severity)},
                          {"timestamp", issue.timestamp.FormatMillis()},
                          {"pid", issue.pid},
                          {"tid", issue.tid},
                          {"tag", issue.tag},
                          {"message", issue.message},
                          {"activity", issue.activity},
                          {"adjacent_events", std::move(adjacent)}});
    }
    Summary summary = Summarize(analysis.issues);
    json by_severity = json::object();
    for (const auto& [sev, n] : summary.by_severity) by_severity[std::string(1, sev)] = n;
    json by_kind = json::object();
    for (const auto& [kind, n] : summary.adjacent_by_kind) by_kind[std::string(KindName(kind))] = n;

    json j;
    j["package"] = analysis.package_id;
    j["window_before_secs"] = analysis.window_before_secs;
    j["window_after_secs"] = analysis.window_after_secs;
    j["issues"] = std::move(issues);
    j["summary"] = {{"total", summary.total},
                    {"by_severity", std::move(by_severity)},
                    {"adjacent_by_kind", std::move(by_kind)}};
    return j.dump(2) + "\n";
}

Analysis ParseAnalysisJson(std::string_view text) {
    Analysis a;
    try {
        json j = json::parse(text);
        a.package_id = j.value("package", "");
        a.window_before_secs = j.value("window_before_secs", 10u);
        a.window_after_secs = j.value("window_after_secs", 2u);
        for (const auto& i : j.at("issues")) {
            std::string sev = i.at("severity").get<std::string>();
            if (sev.size() != 1 || !IsSeverity(sev[0])) {
                throw ParseError(fmt::format("analysis.json: bad severity '{}'", sev));
            }
            auto stamp = LogTime::Parse(i.at("timestamp").get<std::string>());
            if (!stamp) throw ParseError("analysis.json: bad issue timestamp");
            Issue issue{.severity = sev[0],
                        .timestamp = *stamp,
                        .pid = i.value("pid", 0),
                        .tid = i.value("tid", 0),
                        .tag = i.at("tag").get<std::string>(),
                        .message = i.at("message").get<std::string>(),
                        .activity = i.at("activity").get<std::string>()};
            for (const auto& r : i.at("adjacent_events")) {
                issue.adjacent_events.push_back(RecordFromJson(r));
            }
            a.issues.push_back(std::move(issue));
        }
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("analysis.json: {}", e.what()));
    }
    return a;
}

Analysis AnalyzeRunDir(const std::filesystem::path& run_dir, AnalysisConfig config) {
    RunArtifacts run = ParseRunJson(ReadTextFile(run_dir / kRunJsonName));
    std::vector<InjectionRecord> injected =
            ParseExecutorLog(ReadTextFile(run_dir / run.executor_log_path.filename()));
    std::vector<LogcatEntry> logcat =
            ParseLogcatLog(ReadTextFile(run_dir / run.logcat_log_path.filename()));

    // Logcat interleaves buffers and threads, so its lines are only nearly ordered.
    std::stable_sort(logcat.begin(), logcat.end(), [](const LogcatEntry& a, const LogcatEntry& b) {
        return a.timestamp < b.timestamp;
    });

    if (config.package_id.empty()) config.package_id = run.package_id;
    config.pids.insert(run.app_pids.begin(), run.app_pids.end());

    std::vector<TimelineItem> timeline = MergeTimeline(logcat, injected);
    return Analysis{.package_id = config.package_id,
                    .window_before_secs = config.window_before_secs,
                    .window_after_secs = config.window_after_secs,
                    .issues = ExtractIssues(timeline, run.activity_markers, config)};
}

}  // namespace ctxmonkey
