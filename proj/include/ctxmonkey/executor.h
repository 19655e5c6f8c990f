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
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "ctxmonkey/log_time.h"
#include "ctxmonkey/manifest.h"
#include "ctxmonkey/scenario.h"

namespace ctxmonkey {

class DeviceBackend;

inline constexpr std::string_view kExecutorLogName = "executor.log";
inline constexpr std::string_view kLogcatLogName = "logcat.log";
inline constexpr std::string_view kRunJsonName = "run.json";

enum class RunMode { AllActivities, Guided };

struct RunConfig {
    RunMode mode = RunMode::AllActivities;
    std::vector<std::string> guided_activities;
    bool text_fuzz = true;
    std::uint64_t text_seed = 0;
    // Dwell per activity; the scenario duration when unset.
    std::optional<std::uint32_t> per_activity_duration_secs;
    bool fatal_stop = true;
    std::filesystem::path output_dir = "ctxmonkey-out";
    // Installed fresh when set; otherwise the app must already be on the device.
    std::string apk_path;
    std::size_t max_scrolls = 20;
};

struct ActivityMarker {
    std::string activity;
    LogTime timestamp;
    bool operator==(const ActivityMarker&) const = default;
};

struct CrashInfo {
    std::string activity;
    LogTime timestamp;
    std::string line;
    bool operator==(const CrashInfo&) const = default;
};

enum class RunStatus { Running, Completed, Crashed, Aborted, Cancelled };

std::string_view RunStatusName(RunStatus status);

struct FuzzSummary {
    std::size_t completed = 0;
    std::size_t skipped = 0;
    bool operator==(const FuzzSummary&) const = default;
};

struct RunArtifacts {
    std::filesystem::path executor_log_path;
    std::filesystem::path logcat_log_path;
    std::filesystem::path run_json_path;

    std::string package_id;
    RunStatus status = RunStatus::Running;
    std::string error;
    std::vector<ActivityMarker> activity_markers;
    std::optional<CrashInfo> crash;
    std::map<std::string, FuzzSummary> text_fuzz_progress;
    std::vector<InjectionRecord> records;
    std::set<int> app_pids;
    std::vector<std::string> warnings;
    std::string scenario_hash;
};

// run.json codec. The config echo is written but not read back.
std::string WriteRunJson(const RunArtifacts& artifacts, const RunConfig& config,
                         const Scenario& scenario);
// Throws ParseError.
RunArtifacts ParseRunJson(std::string_view text);

struct RunHooks {
    // Requests a clean stop from outside; artifacts are still written.
    std::stop_token external_stop;
    // Called after each injection record has been flushed.
    std::function<void(const InjectionRecord&)> on_injection;
};

/**
 * Runs one contextual test:
 *   1. installs the apk fresh (when given);
 *   2. drops scenario kinds that do not apply to the app's permissions;
 *   3. clears logcat and streams it into logcat.log from a reader thread;
 *   4. for every activity, writes a marker, launches it and replays each kind's
 *      sequence on its own timeline, applying event i+1 interval_secs(i) after event i;
 *   5. optionally fuzzes the activity's text fields on a second thread;
 *   6. stops everything on an app FATAL when fatal_stop is set.
 *
 * executor.log and logcat.log are flushed after every line. Throws ConfigError before
 * touching the device; device failures are persisted into run.json and rethrown.
 */
RunArtifacts RunTest(DeviceBackend& device, const AppMetadata& metadata, const Scenario& scenario,
                     const RunConfig& config, const RunHooks& hooks = {});

}  // namespace ctxmonkey
