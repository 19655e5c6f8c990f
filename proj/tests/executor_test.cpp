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


#include "ctxmonkey/executor.h"

#include <gtest/gtest.h>

#include <stop_token>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/files.h"
#include "ctxmonkey/logparse.h"
#include "ctxmonkey/sim_device.h"
#include "test_support.h"

namespace ctxmonkey {
namespace {

using std::chrono::seconds;

constexpr const char* kPkg = "com.example.app";
constexpr const char* kMain = "com.example.app.MainActivity";
constexpr const char* kSecond = "com.example.app.SecondActivity";

AppMetadata Metadata(bool network = true) {
    AppMetadata m{.package_id = kPkg, .version_name = "1.0", .permissions = {}, .activities = {}};
    if (network) m.permissions.insert("android.permission.INTERNET");
    m.activities = {kMain, kSecond};
    return m;
}

SimScript Script(const AppMetadata& m) {
    SimScript s = SimScript::DefaultFor(m);
    s.installed = true;
    return s;
}

Scenario Sequence(EventKind kind, std::vector<std::pair<std::uint32_t, std::string>> events) {
    Scenario s;
    s.duration_secs = 0;
    std::uint32_t index = 0;
    for (auto& [interval, value] : events) {
        s.sequences[kind].push_back(
                {.kind = kind, .index = index++, .interval_secs = interval, .value = value});
        s.duration_secs += interval;
    }
    return s;
}

RunConfig Config(const testing::TempDir& dir) {
    return RunConfig{.mode = RunMode::AllActivities,
                     .guided_activities = {},
                     .text_fuzz = false,
                     .text_seed = 1,
                     .per_activity_duration_secs = std::nullopt,
                     .fatal_stop = true,
                     .output_dir = dir.path(),
                     .apk_path = "",
                     .max_scrolls = 20};
}

TEST(ExecutorTest, ReplaysScenarioPerActivity) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimDevice d(Script(m));
    Scenario s = Sequence(EventKind::NetworkStatus, {{5, "gsm"}, {5, "lte"}});
    RunArtifacts a = RunTest(d, m, s, Config(dir));

    EXPECT_EQ(a.status, RunStatus::Completed);
    ASSERT_EQ(a.records.size(), 4u);
    ASSERT_EQ(a.activity_markers.size(), 2u);
    EXPECT_EQ(a.activity_markers[0].activity, kMain);
    EXPECT_EQ(a.activity_markers[1].activity, kSecond);
    EXPECT_EQ(a.records[1].timestamp - a.records[0].timestamp, seconds(5));
    EXPECT_EQ(a.records[3].timestamp - a.records[2].timestamp, seconds(5));
    EXPECT_GE(a.activity_markers[1].timestamp - a.activity_markers[0].timestamp, seconds(10));
    EXPECT_EQ(a.records[0].event.value, "gsm");
    EXPECT_EQ(a.records[1].event.value, "lte");

    auto logged = ParseExecutorLog(ReadTextFile(a.executor_log_path));
    EXPECT_EQ(logged, a.records);
    EXPECT_EQ(d.state().network_speed, "lte");
}

TEST(ExecutorTest, GapsEqualIntervalsProperty) {
    testing::Gen gen(41);
    for (int round = 0; round < 10; ++round) {
        testing::TempDir dir;
        AppMetadata m = Metadata();
        m.activities = {kMain};
        SimDevice d(Script(m));
        GeneratorConfig g{.seed = gen.Int(0, 1000000), .min_interval_secs = 1,
                          .max_interval_secs = 9, .duration_secs = 40,
                          .enabled_kinds = AllEventKinds()};
        Scenario s = GenerateScenario(g);
        RunArtifacts a = RunTest(d, m, s, Config(dir));
        ASSERT_EQ(a.status, RunStatus::Completed);

        std::map<EventKind, std::vector<InjectionRecord>> by_kind;
        for (const auto& r : a.records) by_kind[r.event.kind].push_back(r);
        for (const auto& [kind, seq] : s.sequences) {
            const auto& got = by_kind[kind];
            ASSERT_EQ(got.size(), seq.size());
            for (std::size_t i = 0; i + 1 < got.size(); ++i) {
                ASSERT_EQ(got[i + 1].timestamp - got[i].timestamp, seconds(seq[i].interval_secs));
                ASSERT_EQ(got[i].event, seq[i]);
            }
        }
        for (std::size_t i = 0; i + 1 < a.records.size(); ++i) {
            ASSERT_LE(a.records[i].timestamp, a.records[i + 1].timestamp);
        }
    }
}

TEST(ExecutorTest, FatalStopsTheRun) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimScript script = Script(m);
    script.rules.push_back({.trigger = SimRule::Trigger::AfterEvents,
                            .after_events = 3,
                            .level = 'F',
                            .tag = "AndroidRuntime",
                            .message = "java.lang.IllegalStateException: boom"});
    SimDevice d(script);
    Scenario s = Sequence(EventKind::KeyPress, {{1, "KEYCODE_HOME"}, {1, "KEYCODE_BACK"},
                                                {1, "KEYCODE_MENU"}, {1, "KEYCODE_HOME"},
                                                {1, "KEYCODE_BACK"}});
    RunArtifacts a = RunTest(d, m, s, Config(dir));
    EXPECT_EQ(a.status, RunStatus::Crashed);
    EXPECT_EQ(a.records.size(), 3u);
    ASSERT_TRUE(a.crash.has_value());
    EXPECT_EQ(a.crash->activity, kMain);
    EXPECT_NE(a.crash->line.find("boom"), std::string::npos);
    EXPECT_EQ(a.activity_markers.size(), 1u);

    RunArtifacts persisted = ParseRunJson(ReadTextFile(a.run_json_path));
    EXPECT_EQ(persisted.status, RunStatus::Crashed);
    EXPECT_EQ(persisted.crash, a.crash);
}

TEST(ExecutorTest, FatalWithoutStopKeepsGoing) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimScript script = Script(m);
    script.rules.push_back({.trigger = SimRule::Trigger::AfterEvents, .after_events = 1,
                            .level = 'F', .tag = "x", .message = "boom"});
    SimDevice d(script);
    Scenario s = Sequence(EventKind::KeyPress, {{2, "KEYCODE_HOME"}, {2, "KEYCODE_BACK"}});
    RunConfig c = Config(dir);
    c.fatal_stop = false;
    RunArtifacts a = RunTest(d, m, s, c);
    EXPECT_EQ(a.status, RunStatus::Crashed);
    EXPECT_EQ(a.records.size(), 4u);
    EXPECT_EQ(a.activity_markers.size(), 2u);
}

TEST(ExecutorTest, EmptyScenarioStillDwells) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimDevice d(Script(m));
    Scenario s;
    s.duration_secs = 7;
    RunArtifacts a = RunTest(d, m, s, Config(dir));
    EXPECT_EQ(a.status, RunStatus::Completed);
    EXPECT_TRUE(a.records.empty());
    ASSERT_EQ(a.activity_markers.size(), 2u);
    EXPECT_GE(a.activity_markers[1].timestamp - a.activity_markers[0].timestamp, seconds(7));
    EXPECT_EQ(ReadTextFile(a.executor_log_path), "");
}

TEST(ExecutorTest, GuidedModeRunsOnlyListed) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimDevice d(Script(m));
    Scenario s = Sequence(EventKind::UserRotation, {{3, "ROTATION_LANDSCAPE"}});
    RunConfig c = Config(dir);
    c.mode = RunMode::Guided;
    c.guided_activities = {".SecondActivity"};
    RunArtifacts a = RunTest(d, m, s, c);
    ASSERT_EQ(a.activity_markers.size(), 1u);
    EXPECT_EQ(a.activity_markers[0].activity, kSecond);
    EXPECT_EQ(a.records.size(), 1u);
}

TEST(ExecutorTest, DropsKindsTheAppCannotObserve) {
    testing::TempDir dir;
    AppMetadata m = Metadata(false);
    SimDevice d(Script(m));
    Scenario s = Sequence(EventKind::NetworkStatus, {{4, "gsm"}});
    s.sequences[EventKind::KeyPress].push_back(
            {.kind = EventKind::KeyPress, .index = 0, .interval_secs = 4, .value = "KEYCODE_HOME"});
    RunArtifacts a = RunTest(d, m, s, Config(dir));
    ASSERT_EQ(a.records.size(), 2u);
    for (const auto& r : a.records) EXPECT_EQ(r.event.kind, EventKind::KeyPress);
    EXPECT_EQ(d.state().network_speed, "full");
}

TEST(ExecutorTest, ShortDwellDropsLateEvents) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    m.activities = {kMain};
    SimDevice d(Script(m));
    Scenario s = Sequence(EventKind::KeyPress,
                          {{3, "KEYCODE_HOME"}, {3, "KEYCODE_BACK"}, {3, "KEYCODE_MENU"}});
    RunConfig c = Config(dir);
    c.per_activity_duration_secs = 6;
    RunArtifacts a = RunTest(d, m, s, c);
    ASSERT_EQ(a.records.size(), 2u);
    EXPECT_EQ(a.records[1].event.value, "KEYCODE_BACK");
}

TEST(ExecutorTest, ConfigErrorsBeforeTouchingDevice) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimDevice d(Script(m));
    Scenario s = Sequence(EventKind::KeyPress, {{3, "KEYCODE_HOME"}});

    RunConfig c = Config(dir);
    c.output_dir.clear();
    EXPECT_THROW(RunTest(d, m, s, c), ConfigError);
    c = Config(dir);
    c.mode = RunMode::Guided;
    EXPECT_THROW(RunTest(d, m, s, c), ConfigError);
    c = Config(dir);
    c.per_activity_duration_secs = 0;
    EXPECT_THROW(RunTest(d, m, s, c), ConfigError);
    Scenario bad = s;
    bad.duration_secs = 99;
    EXPECT_THROW(RunTest(d, m, bad, Config(dir)), ConfigError);
    AppMetadata none = m;
    none.activities.clear();
    EXPECT_THROW(RunTest(d, none, s, Config(dir)), ConfigError);

    EXPECT_TRUE(d.state().commands.empty());
}

TEST(ExecutorTest, MissingAppIsAnInstallError) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimScript script = Script(m);
    script.installed = false;
    SimDevice d(script);
    EXPECT_THROW(RunTest(d, m, Sequence(EventKind::KeyPress, {{1, "KEYCODE_HOME"}}), Config(dir)),
                 InstallError);
}

TEST(ExecutorTest, DeviceLossIsPersisted) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimScript script = Script(m);
    script.disconnect_after_events = 2;
    SimDevice d(script);
    Scenario s = Sequence(EventKind::KeyPress,
                          {{1, "KEYCODE_HOME"}, {1, "KEYCODE_BACK"}, {1, "KEYCODE_MENU"}});
    EXPECT_THROW(RunTest(d, m, s, Config(dir)), ConnectionLost);
    RunArtifacts persisted = ParseRunJson(ReadTextFile(dir / std::string(kRunJsonName)));
    EXPECT_EQ(persisted.status, RunStatus::Aborted);
    EXPECT_FALSE(persisted.error.empty());
    EXPECT_EQ(ParseExecutorLog(ReadTextFile(dir / std::string(kExecutorLogName))).size(), 2u);
}

TEST(ExecutorTest, ExternalStopCancels) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimDevice d(Script(m));
    Scenario s = Sequence(EventKind::KeyPress,
                          {{1, "KEYCODE_HOME"}, {1, "KEYCODE_BACK"}, {1, "KEYCODE_MENU"}});
    std::stop_source stop;
    RunHooks hooks{.external_stop = stop.get_token(),
                   .on_injection = [&](const InjectionRecord&) { stop.request_stop(); }};
    RunArtifacts a = RunTest(d, m, s, Config(dir), hooks);
    EXPECT_EQ(a.status, RunStatus::Cancelled);
    EXPECT_EQ(a.records.size(), 1u);
}

TEST(ExecutorTest, TextFuzzProgressIsRecorded) {
    testing::TempDir dir;
    AppMetadata m = Metadata();
    SimDevice d(Script(m));
    RunConfig c = Config(dir);
    c.text_fuzz = true;
    RunArtifacts a = RunTest(d, m, Sequence(EventKind::KeyPress, {{20, "KEYCODE_MENU"}}), c);
    ASSERT_EQ(a.text_fuzz_progress.size(), 2u);
    for (const auto& [activity, p] : a.text_fuzz_progress) {
        EXPECT_EQ(p.completed, 2u) << activity;
    }
}

TEST(RunJsonTest, RoundTrip) {
    RunArtifacts a;
    a.executor_log_path = "/tmp/x/executor.log";
    a.logcat_log_path = "/tmp/x/logcat.log";
    a.package_id = kPkg;
    a.status = RunStatus::Crashed;
    a.error = "";
    a.activity_markers = {{kMain, LogTime::FromFields(3, 19, 0, 36, 30, 250)}};
    a.crash = CrashInfo{kMain, LogTime::FromFields(3, 19, 0, 36, 31, 5), "F/x: boom"};
    a.text_fuzz_progress[kMain] = {.completed = 2, .skipped = 1};
    a.app_pids = {4321};
    a.warnings = {"w"};
    Scenario s = Sequence(EventKind::KeyPress, {{1, "KEYCODE_HOME"}});
    RunArtifacts b = ParseRunJson(WriteRunJson(a, RunConfig{}, s));
    // Log paths are stored relative to the run directory.
    EXPECT_EQ(b.executor_log_path, "executor.log");
    EXPECT_EQ(b.logcat_log_path, "logcat.log");
    EXPECT_EQ(b.package_id, a.package_id);
    EXPECT_EQ(b.status, a.status);
    EXPECT_EQ(b.activity_markers, a.activity_markers);
    EXPECT_EQ(b.crash, a.crash);
    EXPECT_EQ(b.text_fuzz_progress, a.text_fuzz_progress);
    EXPECT_EQ(b.app_pids, a.app_pids);
    EXPECT_EQ(b.warnings, a.warnings);
    EXPECT_THROW(ParseRunJson("{"), ParseError);
    EXPECT_THROW(ParseRunJson("{\"status\":\"exploded\"}"), ParseError);
}

}  // namespace
}  // namespace ctxmonkey
