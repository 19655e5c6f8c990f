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

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxmonkey/device.h"
#include "ctxmonkey/manifest.h"

namespace ctxmonkey {

// A scripted log line. Fires after a count of injected events, on a matching event,
// or when the virtual clock passes a time offset.
struct SimRule {
    enum class Trigger { AfterEvents, OnEvent, AtTime };

    Trigger trigger = Trigger::AfterEvents;
    std::size_t after_events = 0;           // AfterEvents: fire right after the Nth event (1-based)
    std::optional<EventKind> kind;          // OnEvent: match this kind ...
    std::optional<std::string> value;       // ... and optionally this value
    std::uint32_t at_secs = 0;              // AtTime: seconds after the clock start
    bool repeat = false;                    // OnEvent: fire on every match

    char level = 'E';                       // W, E or F
    std::string tag;
    std::string message;
    bool from_app = true;                   // app pid, otherwise a system pid
};

struct SimNode {
    std::string class_name = "android.widget.TextView";
    std::string resource_id;
    std::string text;
    int height = 160;
    bool editable = false;
};

// One activity's content: a vertical list of rows inside a scroll container.
struct SimActivity {
    std::string name;
    std::vector<SimNode> rows;
    // An endless feed generates a new TextView row for every index past |rows|.
    bool endless = false;
};

struct SimScript {
    std::string package_id = "com.example.app";
    int app_pid = 4321;
    LogTime start_time = LogTime::FromFields(3, 19, 0, 36, 30);
    int screen_width = 1080;
    int screen_height = 1920;
    bool installed = false;
    // After this many injected events every command fails with ConnectionLost.
    std::optional<std::size_t> disconnect_after_events;
    std::vector<SimRule> rules;
    std::vector<SimActivity> activities;

    // Activities from |metadata|, each with a heading and two text fields; no rules.
    static SimScript DefaultFor(const AppMetadata& metadata);
};

// JSON sim-script codec (schema in the README). Throws ParseError.
SimScript ParseSimScript(std::string_view json_text);
std::string WriteSimScript(const SimScript& script);

// Observable state of the simulated device.
struct SimState {
    std::string network_speed = "full";
    std::string network_delay = "none";
    std::string gsm_data = "home";
    std::string gsm_voice = "home";
    int user_rotation = 0;
    bool airplane_mode = false;
    std::vector<std::string> key_presses;
    std::size_t injected_events = 0;
    bool installed = false;
    bool crashed = false;
    std::string foreground_activity;
    // install/uninstall/launch operations in order, e.g. "uninstall com.x".
    std::vector<std::string> package_ops;
    std::vector<std::string> commands;
    std::size_t ui_dumps = 0;
    // Typed input per resource id (or "#<row>" when the row has none).
    std::map<std::string, int> input_counts;
    std::map<std::string, std::string> field_text;
    std::size_t dropped_inputs = 0;
};

/**
 * Deterministic stand-in for an emulator. It interprets the same console and shell
 * commands a real device would receive, keeps a virtual clock and writes synthetic
 * threadtime logcat lines. Thread-safe.
 */
class SimDevice : public DeviceBackend {
  public:
    explicit SimDevice(SimScript script);
    ~SimDevice() override;

    std::string Identity() const override { return "sim:" + script_.package_id; }
    Capabilities capabilities() const override { return {.supports_console = true}; }
    Clock& clock() override { return clock_; }
    VirtualClock& virtual_clock() { return clock_; }

    ConsoleResponse ConsoleCommand(std::string_view cmd) override;
    ShellResult Shell(const std::vector<std::string>& args) override;
    void InstallApk(const std::string& apk_path) override;
    void UninstallPackage(const std::string& package_id) override;
    std::unique_ptr<LogcatStream> OpenLogcat() override;
    std::optional<std::size_t> LogcatSyncPoint() override;

    // Console protocol handler, also used by the TCP console server.
    ConsoleResponse HandleConsole(std::string_view cmd);

    SimState state() const;
    // Everything in the logcat buffer since the last clear.
    std::vector<std::string> LogcatLines() const;
    const SimScript& script() const { return script_; }

  private:
    class Stream;
    struct ActivityView {
        std::size_t activity = 0;
        int scroll = 0;
        std::optional<std::size_t> focused_row;
    };

    void CheckConnectedLocked() const;
    ConsoleResponse HandleConsoleLocked(std::string_view cmd);
    ShellResult HandleShellLocked(const std::vector<std::string>& args);
    ShellResult HandleInputLocked(const std::vector<std::string>& args);
    void OnEventAppliedLocked(EventKind kind, const std::string& value);
    void FireRuleLocked(const SimRule& rule, LogTime at);
    void OnClockAdvance(std::chrono::milliseconds from, std::chrono::milliseconds to);
    void EmitLocked(LogTime at, int pid, int tid, char level, std::string_view tag,
                    std::string_view message);

    // Layout helpers.
    bool LandscapeLocked() const;
    int ViewportWidthLocked() const;
    int ViewportHeightLocked() const;
    std::optional<SimNode> RowLocked(std::size_t activity, std::size_t index) const;
    std::size_t RowCountLocked(std::size_t activity) const;
    int RowTopLocked(std::size_t activity, std::size_t index) const;
    std::optional<std::size_t> RowAtLocked(int screen_y) const;
    std::string RowKeyLocked(std::size_t row) const;
    std::string DumpLocked() const;

    const SimScript script_;
    VirtualClock clock_;

    mutable std::mutex mutex_;
    std::condition_variable_any log_cv_;
    std::deque<std::string> logcat_;
    std::uint64_t log_generation_ = 0;  // bumps on clear
    bool disconnected_ = false;
    SimState state_;
    std::optional<ActivityView> view_;
    bool process_started_ = false;
    std::vector<bool> rule_fired_;
};

}  // namespace ctxmonkey
