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


#include "ctxmonkey/sim_device.h"

#include <gtest/gtest.h>

#include <thread>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/logparse.h"
#include "ctxmonkey/uimodel.h"
#include "test_support.h"

namespace ctxmonkey {
namespace {

using namespace std::chrono_literals;

constexpr const char* kPkg = "com.example.app";
constexpr const char* kMain = "com.example.app.MainActivity";

SimScript BasicScript() {
    SimScript s = SimScript::DefaultFor(
            {.package_id = kPkg, .activities = {kMain, "com.example.app.Second"}});
    s.installed = true;
    return s;
}

std::vector<LogcatEntry> Entries(const SimDevice& d) {
    std::vector<LogcatEntry> out;
    for (const auto& line : d.LogcatLines()) {
        LogcatParse p = ParseLogcatLine(line);
        if (auto* e = std::get_if<LogcatEntry>(&p)) out.push_back(*e);
        EXPECT_FALSE(std::holds_alternative<ParseError>(p)) << line;
    }
    return out;
}

TEST(SimDeviceTest, ConsoleCommandsChangeState) {
    SimDevice d(BasicScript());
    d.ApplyEvent({EventKind::NetworkStatus, 0, 5, "edge"});
    d.ApplyEvent({EventKind::NetworkDelay, 0, 5, "umts"});
    d.ApplyEvent({EventKind::GsmProfile, 0, 5, "roaming"});
    SimState s = d.state();
    EXPECT_EQ(s.network_speed, "edge");
    EXPECT_EQ(s.network_delay, "umts");
    EXPECT_EQ(s.gsm_data, "roaming");
    EXPECT_EQ(s.gsm_voice, "roaming");
    EXPECT_EQ(s.injected_events, 3u);
    EXPECT_FALSE(d.ConsoleCommand("network speed warp").ok);
    EXPECT_FALSE(d.ConsoleCommand("power capacity 50").ok);
}

TEST(SimDeviceTest, ShellEventsChangeState) {
    SimDevice d(BasicScript());
    d.ApplyEvent({EventKind::UserRotation, 0, 5, "ROTATION_REVERSE_LANDSCAPE"});
    d.ApplyEvent({EventKind::KeyPress, 0, 5, "KEYCODE_MENU"});
    d.ApplyEvent({EventKind::AirplaneMode, 0, 5, "on"});
    SimState s = d.state();
    EXPECT_EQ(s.user_rotation, 3);
    EXPECT_EQ(s.key_presses, std::vector<std::string>{"KEYCODE_MENU"});
    EXPECT_TRUE(s.airplane_mode);
    EXPECT_EQ(s.injected_events, 3u);
    EXPECT_EQ(d.Shell({"frobnicate"}).exit_code, 127);
}

TEST(SimDeviceTest, InstallLifecycle) {
    SimScript script = BasicScript();
    script.installed = false;
    SimDevice d(script);
    EXPECT_FALSE(d.IsInstalled(kPkg));
    d.Install("app.apk", kPkg);
    EXPECT_TRUE(d.IsInstalled(kPkg));
    d.Install("app.apk", kPkg);
    EXPECT_EQ(d.state().package_ops,
              (std::vector<std::string>{"install app.apk", "uninstall com.example.app",
                                        "install app.apk"}));
    d.Uninstall(kPkg);
    d.Uninstall(kPkg);
    EXPECT_FALSE(d.IsInstalled(kPkg));
    EXPECT_THROW(d.UninstallPackage(kPkg), InstallError);
}

TEST(SimDeviceTest, LaunchEmitsActivityManagerLines) {
    SimDevice d(BasicScript());
    d.LogcatClear();
    d.LaunchActivity(kPkg, kMain);
    d.LaunchActivity(kPkg, ".Second");
    auto lines = d.LogcatLines();
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_EQ(lines[0], "--------- beginning of main");
    EXPECT_NE(lines[1].find("Start proc 4321:com.example.app/u0a55"), std::string::npos);
    EXPECT_NE(lines[2].find("START u0 {cmp=com.example.app/com.example.app.MainActivity}"),
              std::string::npos);
    EXPECT_EQ(d.state().foreground_activity, "com.example.app.Second");
    EXPECT_THROW(d.LaunchActivity(kPkg, "com.example.app.Missing"), LaunchError);
}

TEST(SimDeviceTest, FatalRuleCrashesApp) {
    SimScript script = BasicScript();
    script.rules.push_back({.trigger = SimRule::Trigger::AfterEvents,
                            .after_events = 2,
                            .level = 'F',
                            .tag = "AndroidRuntime",
                            .message = "boom"});
    script.rules.push_back({.trigger = SimRule::Trigger::AfterEvents,
                            .after_events = 3,
                            .level = 'F',
                            .tag = "AndroidRuntime",
                            .message = "second"});
    SimDevice d(script);
    d.LaunchActivity(kPkg, kMain);
    for (int i = 0; i < 4; ++i) d.ApplyEvent({EventKind::KeyPress, 0, 5, "KEYCODE_BACK"});
    auto entries = Entries(d);
    int fatals = 0;
    for (const auto& e : entries) fatals += e.level == 'F';
    EXPECT_EQ(fatals, 1);
    EXPECT_TRUE(d.state().crashed);
    EXPECT_THROW(d.UiDump(), DumpError);
}

TEST(SimDeviceTest, OnEventAndTimedRules) {
    SimScript script = BasicScript();
    script.rules.push_back({.trigger = SimRule::Trigger::OnEvent,
                            .kind = EventKind::NetworkStatus,
                            .value = "gsm",
                            .repeat = true,
                            .level = 'W',
                            .tag = "Net",
                            .message = "slow"});
    script.rules.push_back(
            {.trigger = SimRule::Trigger::AtTime, .at_secs = 7, .level = 'E', .tag = "T", .message = "late"});
    SimDevice d(script);
    d.ApplyEvent({EventKind::NetworkStatus, 0, 5, "gsm"});
    d.ApplyEvent({EventKind::NetworkStatus, 1, 5, "lte"});
    d.ApplyEvent({EventKind::NetworkStatus, 2, 5, "gsm"});
    d.virtual_clock().SleepUntil(10s, {});
    auto entries = Entries(d);
    ASSERT_EQ(entries.size(), 3u);
    EXPECT_EQ(entries[0].level, 'W');
    EXPECT_EQ(entries[1].level, 'W');
    EXPECT_EQ(entries[2].level, 'E');
    EXPECT_EQ(entries[2].timestamp, script.start_time + 7s);
}

TEST(SimDeviceTest, DisconnectAfterEvents) {
    SimScript script = BasicScript();
    script.disconnect_after_events = 1;
    SimDevice d(script);
    auto stream = d.OpenLogcat();
    d.ApplyEvent({EventKind::KeyPress, 0, 5, "KEYCODE_BACK"});
    EXPECT_THROW(d.ApplyEvent({EventKind::KeyPress, 1, 5, "KEYCODE_BACK"}), ConnectionLost);
    EXPECT_THROW(d.Shell({"wm", "size"}), ConnectionLost);
    while (stream->Next({})) {
    }
    EXPECT_TRUE(stream->failed());
}

TEST(SimDeviceTest, StreamFollowsBufferAndStops) {
    SimDevice d(BasicScript());
    d.LogcatClear();
    auto stream = d.OpenLogcat();
    EXPECT_EQ(stream->Next({}), "--------- beginning of main");
    d.LaunchActivity(kPkg, kMain);
    EXPECT_TRUE(stream->Next({}));
    EXPECT_TRUE(stream->Next({}));
    std::stop_source stop;
    std::jthread stopper([&] {
        std::this_thread::sleep_for(10ms);
        stop.request_stop();
    });
    EXPECT_FALSE(stream->Next(stop.get_token()));
    EXPECT_FALSE(stream->failed());
    EXPECT_EQ(d.LogcatSyncPoint(), 3u);
}

TEST(SimDeviceTest, DumpShowsViewportAndPages) {
    SimScript script = BasicScript();
    script.activities[0].rows.clear();
    for (int i = 0; i < 30; ++i) {
        script.activities[0].rows.push_back({.class_name = "android.widget.EditText",
                                             .resource_id = "com.example.app:id/f" + std::to_string(i),
                                             .height = 192,
                                             .editable = true});
    }
    SimDevice d(script);
    d.LaunchActivity(kPkg, kMain);
    auto count_fields = [&] { return TextFields(ParseUiDump(d.UiDump(), kMain)).size(); };
    std::size_t first = count_fields();
    EXPECT_GT(first, 0u);
    EXPECT_LT(first, 30u);
    auto before = ParseUiDump(d.UiDump(), kMain);
    d.ScrollDown();
    auto after = ParseUiDump(d.UiDump(), kMain);
    EXPECT_NE(before, after);
}

TEST(SimDeviceTest, TapFocusesAndTextLands) {
    SimDevice d(BasicScript());
    d.LaunchActivity(kPkg, kMain);
    auto fields = TextFields(ParseUiDump(d.UiDump(), kMain));
    ASSERT_EQ(fields.size(), 2u);
    d.InputText("lost");
    EXPECT_EQ(d.state().dropped_inputs, 1u);
    const Bounds& b = fields[1].bounds;
    d.Tap((b.left + b.right) / 2, (b.top + b.bottom) / 2);
    auto refreshed = TextFields(ParseUiDump(d.UiDump(), kMain));
    EXPECT_FALSE(refreshed[0].focused);
    EXPECT_TRUE(refreshed[1].focused);
    d.InputText("hello world");
    SimState s = d.state();
    EXPECT_EQ(s.input_counts.at("com.example.app:id/input_1"), 1);
    EXPECT_EQ(s.field_text.at("com.example.app:id/input_1"), "hello world");
}

TEST(SimDeviceTest, RotationResetsFocus) {
    SimDevice d(BasicScript());
    d.LaunchActivity(kPkg, kMain);
    auto fields = TextFields(ParseUiDump(d.UiDump(), kMain));
    const Bounds& b = fields[0].bounds;
    d.Tap((b.left + b.right) / 2, (b.top + b.bottom) / 2);
    d.ApplyEvent({EventKind::UserRotation, 0, 5, "ROTATION_LANDSCAPE"});
    for (const auto& f : TextFields(ParseUiDump(d.UiDump(), kMain))) EXPECT_FALSE(f.focused);
}

TEST(SimScriptTest, JsonRoundTrip) {
    SimScript script = BasicScript();
    script.disconnect_after_events = 4;
    script.rules.push_back({.trigger = SimRule::Trigger::OnEvent,
                            .kind = EventKind::UserRotation,
                            .value = "ROTATION_PORTRAIT",
                            .level = 'E',
                            .tag = "WindowManager",
                            .message = "android.view.WindowLeaked: leaked window",
                            .from_app = false});
    std::string text = WriteSimScript(script);
    EXPECT_EQ(WriteSimScript(ParseSimScript(text)), text);
}

TEST(SimScriptTest, FixtureParses) {
    SimScript s = ParseSimScript(testing::ReadFixture("sim_crash.json"));
    EXPECT_EQ(s.package_id, "com.example.notes");
    EXPECT_EQ(s.rules.size(), 2u);
    EXPECT_EQ(s.activities.size(), 2u);
    EXPECT_TRUE(s.installed);
}

TEST(SimScriptTest, RejectsBadScripts) {
    EXPECT_THROW(ParseSimScript("{"), ParseError);
    EXPECT_THROW(ParseSimScript("{}"), ParseError);
    EXPECT_THROW(ParseSimScript(R"({"package":"a","rules":[{"trigger":{},"tag":"t","message":"m"}]})"),
                 ParseError);
    EXPECT_THROW(
            ParseSimScript(
                    R"({"package":"a","rules":[{"trigger":{"after_events":1},"level":"I","tag":"t","message":"m"}]})"),
            ParseError);
}

}  // namespace
}  // namespace ctxmonkey
