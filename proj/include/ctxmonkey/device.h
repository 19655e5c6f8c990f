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

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctxmonkey/log_time.h"
#include "ctxmonkey/scenario.h"

namespace ctxmonkey {

struct ConsoleResponse {
    // True iff the terminal line was "OK"; false iff it started with "KO:".
    bool ok = true;
    // Output lines including the terminal one.
    std::vector<std::string> lines;
};

struct ShellResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

// A single device-level command. Console commands go to the emulator console,
// shell commands run on the device through the debug bridge.
struct ConsoleCmd {
    std::string text;
    bool operator==(const ConsoleCmd&) const = default;
};
struct ShellCmd {
    std::vector<std::string> args;
    bool operator==(const ShellCmd&) const = default;
};
using DeviceCommand = std::variant<ConsoleCmd, ShellCmd>;

std::string DescribeCommand(const DeviceCommand& cmd);

/**
 * The complete event-to-command map:
 *
 *   NetworkStatus v  console  network speed v
 *   NetworkDelay v   console  network delay v
 *   GsmProfile v     console  gsm data v   (+ gsm voice v unless v is on/off)
 *   UserRotation v   shell    settings put system accelerometer_rotation 0
 *                    shell    settings put system user_rotation <0..3>
 *   KeyPress v       shell    input keyevent v
 *   AirplaneMode v   shell    settings put global airplane_mode_on <1|0>
 *                    shell    am broadcast -a android.intent.action.AIRPLANE_MODE --ez state <true|false>
 */
std::vector<DeviceCommand> CommandsForEvent(const ContextualEvent& event);

// 0 portrait, 1 landscape, 2 reverse portrait, 3 reverse landscape.
int RotationSetting(std::string_view rotation_value);

/**
 * Time source for a run. Elapsed() is monotonic from clock creation; Now() is the
 * wall-clock stamp written into logs.
 */
class Clock {
  public:
    virtual ~Clock() = default;

    virtual LogTime Now() = 0;
    virtual std::chrono::milliseconds Elapsed() = 0;
    // Returns false if |stop| was requested before the deadline.
    virtual bool SleepUntil(std::chrono::milliseconds deadline, std::stop_token stop) = 0;
};

class SystemClock : public Clock {
  public:
    SystemClock();

    LogTime Now() override;
    std::chrono::milliseconds Elapsed() override;
    bool SleepUntil(std::chrono::milliseconds deadline, std::stop_token stop) override;

  private:
    std::chrono::steady_clock::time_point origin_;
};

/**
 * A clock that only moves when someone sleeps on it. Sleeping jumps straight to the
 * deadline after notifying the advance hook with the (from, to] range.
 */
class VirtualClock : public Clock {
  public:
    using AdvanceHook =
            std::function<void(std::chrono::milliseconds from, std::chrono::milliseconds to)>;

    explicit VirtualClock(LogTime start);

    void SetAdvanceHook(AdvanceHook hook);

    LogTime Now() override;
    std::chrono::milliseconds Elapsed() override;
    bool SleepUntil(std::chrono::milliseconds deadline, std::stop_token stop) override;

    LogTime start() const { return start_; }

  private:
    const LogTime start_;
    std::atomic<std::int64_t> elapsed_ms_{0};
    std::mutex hook_mutex_;
    AdvanceHook hook_;
};

class LogcatStream {
  public:
    virtual ~LogcatStream() = default;

    // Blocks for the next threadtime line. nullopt means the stream ended, either
    // because |stop| was requested or because the connection dropped (see failed()).
    virtual std::optional<std::string> Next(std::stop_token stop) = 0;
    virtual bool failed() const = 0;
};

/**
 * A device the executor can drive. Subclasses supply the transport primitives; the
 * higher level operations are built on top of them here so every backend speaks the
 * same command vocabulary.
 */
class DeviceBackend {
  public:
    struct Capabilities {
        bool supports_console = true;
    };

    virtual ~DeviceBackend() = default;

    virtual std::string Identity() const = 0;
    virtual Capabilities capabilities() const = 0;
    virtual Clock& clock() = 0;

    // Transport primitives.
    virtual ConsoleResponse ConsoleCommand(std::string_view cmd) = 0;
    virtual ShellResult Shell(const std::vector<std::string>& args) = 0;
    virtual void InstallApk(const std::string& apk_path) = 0;
    virtual void UninstallPackage(const std::string& package_id) = 0;
    virtual std::unique_ptr<LogcatStream> OpenLogcat() = 0;

    // Number of lines the device has produced since the last clear, when the backend
    // can know it. A reader that has consumed this many lines has seen everything
    // caused by the commands issued so far.
    virtual std::optional<std::size_t> LogcatSyncPoint() { return std::nullopt; }

    // Throws InjectionError when any mapped command is rejected.
    ConsoleResponse ApplyEvent(const ContextualEvent& event);

    // Uninstalls first when the package is already present.
    void Install(const std::string& apk_path, const std::string& package_id);
    // No-op for an absent package.
    void Uninstall(const std::string& package_id);
    bool IsInstalled(const std::string& package_id);

    // Throws LaunchError for an unknown activity.
    void LaunchActivity(const std::string& package_id, const std::string& activity);

    void LogcatClear();

    // Current view hierarchy XML. Throws DumpError on a malformed reply.
    std::string UiDump();
    void InputText(std::string_view text);
    void Tap(int x, int y);
    void ScrollDown();

  protected:
    ShellResult CheckedShell(const std::vector<std::string>& args);

  private:
    std::mutex screen_mutex_;
    std::optional<std::pair<int, int>> screen_size_;
};

// `input text` encoding: spaces travel as %s. Shell quoting is the transport's job.
std::string EscapeInputText(std::string_view text);
std::string UnescapeInputText(std::string_view text);

}  // namespace ctxmonkey
