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

#include "ctxmonkey/device.h"

#include <condition_variable>
#include <ctime>
#include <thread>

#include <fmt/format.h>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/strings.h"

namespace ctxmonkey {

namespace {

std::string JoinArgs(const std::vector<std::string>& args) {
    std::string out;
    for (const auto& a : args) {
        if (!out.empty()) out += ' ';
        out += a;
    }
    return out;
}

std::string ShellFailure(const std::vector<std::string>& args, const ShellResult& r) {
    std::string detail = std::string(Trim(r.err.empty() ? r.out : r.err));
    return fmt::format("'{}' exited with {}: {}", JoinArgs(args), r.exit_code, detail);
}

}  // namespace

std::string DescribeCommand(const DeviceCommand& cmd) {
    if (const auto* c = std::get_if<ConsoleCmd>(&cmd)) return "console: " + c->text;
    return "shell: " + JoinArgs(std::get<ShellCmd>(cmd).args);
}

int RotationSetting(std::string_view value) {
    if (value == "ROTATION_PORTRAIT") return 0;
    if (value == "ROTATION_LANDSCAPE") return 1;
    if (value == "ROTATION_REVERSE_PORTRAIT" || value == "ROTATION_REVERSE_POTRAIT") return 2;
    if (value == "ROTATION_REVERSE_LANDSCAPE") return 3;
    throw InvariantError(fmt::format("unknown rotation '{}'", value));
}

std::vector<DeviceCommand> CommandsForEvent(const ContextualEvent& event) {
    const std::string& v = event.value;
    switch (event.kind) {
        case EventKind::NetworkStatus:
            return {ConsoleCmd{"network speed " + v}};
        case EventKind::NetworkDelay:
            return {ConsoleCmd{"network delay " + v}};
        case EventKind::GsmProfile:
            if (v == "on" || v == "off") return {ConsoleCmd{"gsm data " + v}};
            return {ConsoleCmd{"gsm data " + v}, ConsoleCmd{"gsm voice " + v}};
        case EventKind::UserRotation:
            return {ShellCmd{{"settings", "put", "system", "accelerometer_rotation", "0"}},
                    ShellCmd{{"settings", "put", "system", "user_rotation",
                              std::to_string(RotationSetting(v))}}};
        case EventKind::KeyPress:
            return {ShellCmd{{"input", "keyevent", v}}};
        case EventKind::AirplaneMode: {
            bool on = v == "on";
            return {ShellCmd{{"settings", "put", "global", "airplane_mode_on", on ? "1" : "0"}},
                    ShellCmd{{"am", "broadcast", "-a", "android.intent.action.AIRPLANE_MODE",
                              "--ez", "state", on ? "true" : "false"}}};
        }
    }
    return {};
}

// SystemClock

SystemClock::SystemClock() : origin_(std::chrono::steady_clock::now()) {}

LogTime SystemClock::Now() {
    using namespace std::chrono;
    auto now = system_clock::now();
    std::time_t secs = system_clock::to_time_t(now);
    int millis = static_cast<int>(duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000);
    std::tm local{};
    localtime_r(&secs, &local);
    return LogTime::FromFields(local.tm_mon + 1, local.tm_mday, local.tm_hour, local.tm_min,
                               std::min(local.tm_sec, 59), millis);
}

std::chrono::milliseconds SystemClock::Elapsed() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 origin_);
}

bool SystemClock::SleepUntil(std::chrono::milliseconds deadline, std::stop_token stop) {
    std::mutex m;
    std::condition_variable_any cv;
    std::unique_lock lock(m);
    auto wake = origin_ + deadline;
    return !cv.wait_until(lock, stop, wake, [] { return false; }) && !stop.stop_requested();
}

// VirtualClock

VirtualClock::VirtualClock(LogTime start) : start_(start) {}

void VirtualClock::SetAdvanceHook(AdvanceHook hook) {
    std::lock_guard lock(hook_mutex_);
    hook_ = std::move(hook);
}

LogTime VirtualClock::Now() {
    return start_ + Elapsed();
}

std::chrono::milliseconds VirtualClock::Elapsed() {
    return std::chrono::milliseconds(elapsed_ms_.load());
}

bool VirtualClock::SleepUntil(std::chrono::milliseconds deadline, std::stop_token stop) {
    if (stop.stop_requested()) return false;
    std::lock_guard lock(hook_mutex_);
    auto from = Elapsed();
    if (deadline > from) {
        if (hook_) hook_(from, deadline);
        elapsed_ms_.store(deadline.count());
    }
    return !stop.stop_requested();
}

// DeviceBackend

ShellResult DeviceBackend::CheckedShell(const std::vector<std::string>& args) {
    ShellResult r = Shell(args);
    if (r.exit_code != 0) throw DeviceError(ShellFailure(args, r));
    return r;
}

ConsoleResponse DeviceBackend::ApplyEvent(const ContextualEvent& event) {
    ConsoleResponse combined;
    for (const DeviceCommand& cmd : CommandsForEvent(event)) {
        if (const auto* console = std::get_if<ConsoleCmd>(&cmd)) {
            ConsoleResponse r = ConsoleCommand(console->text);
            combined.lines.insert(combined.lines.end(), r.lines.begin(), r.lines.end());
            if (!r.ok) {
                throw InjectionError(fmt::format("{} rejected: {}", DescribeCommand(cmd),
                                                 r.lines.empty() ? "" : r.lines.back()));
            }
        } else {
            const auto& args = std::get<ShellCmd>(cmd).args;
            ShellResult r = Shell(args);
            if (r.exit_code != 0) throw InjectionError(ShellFailure(args, r));
            for (auto line : SplitLines(r.out)) combined.lines.emplace_back(line);
        }
    }
    combined.ok = true;
    return combined;
}

bool DeviceBackend::IsInstalled(const std::string& package_id) {
    ShellResult r = Shell({"pm", "list", "packages", package_id});
    // pm filters by substring, so require the exact entry.
    for (auto line : SplitLines(r.out)) {
        if (Trim(line) == "package:" + package_id) return true;
    }
    return false;
}

void DeviceBackend::Install(const std::string& apk_path, const std::string& package_id) {
    if (IsInstalled(package_id)) UninstallPackage(package_id);
    InstallApk(apk_path);
    if (!IsInstalled(package_id)) {
        throw InstallError(fmt::format("{} not present after installing {}", package_id, apk_path));
    }
}

void DeviceBackend::Uninstall(const std::string& package_id) {
    if (!IsInstalled(package_id)) return;
    UninstallPackage(package_id);
}

void DeviceBackend::LaunchActivity(const std::string& package_id, const std::string& activity) {
    std::string component = package_id + "/" + activity;
    ShellResult r = Shell({"am", "start", "-W", "-n", component});
    // am reports most failures on stdout with a zero exit status.
    bool error_text = r.out.find("Error:") != std::string::npos ||
                      r.err.find("Error:") != std::string::npos;
    if (r.exit_code != 0 || error_text) {
        throw LaunchError(fmt::format("cannot start {}: {}", component,
                                      Trim(r.out.empty() ? r.err : r.out)));
    }
}

void DeviceBackend::LogcatClear() {
    CheckedShell({"logcat", "-c"});
}

std::string DeviceBackend::UiDump() {
    ShellResult r = Shell({"uiautomator", "dump", "/dev/tty"});
    if (r.exit_code != 0) throw DumpError(ShellFailure({"uiautomator", "dump"}, r));
    auto begin = r.out.find("<?xml");
    if (begin == std::string::npos) begin = r.out.find("<hierarchy");
    constexpr std::string_view kClose = "</hierarchy>";
    auto end = r.out.rfind(kClose);
    if (begin == std::string::npos || end == std::string::npos || end < begin) {
        throw DumpError(fmt::format("no hierarchy in dump output: {}",
                                    Trim(r.out.substr(0, 200))));
    }
    return r.out.substr(begin, end + kClose.size() - begin);
}

void DeviceBackend::InputText(std::string_view text) {
    if (text.empty()) return;
    CheckedShell({"input", "text", EscapeInputText(text)});
}

void DeviceBackend::Tap(int x, int y) {
    CheckedShell({"input", "tap", std::to_string(x), std::to_string(y)});
}

void DeviceBackend::ScrollDown() {
    std::pair<int, int> size;
    {
        std::lock_guard lock(screen_mutex_);
        if (!screen_size_) {
            ShellResult r = CheckedShell({"wm", "size"});
            int w = 0, h = 0;
            auto pos = r.out.find("size:");
            if (pos == std::string::npos ||
                std::sscanf(r.out.c_str() + pos + 5, " %dx%d", &w, &h) != 2 || w <= 0 || h <= 0) {
                throw DeviceError("cannot read screen size from: " + r.out);
            }
            screen_size_ = {w, h};
        }
        size = *screen_size_;
    }
    // Stay inside the short edge so the gesture is on screen in either orientation.
    int edge = std::min(size.first, size.second);
    int x = edge / 2;
    int from = edge * 9 / 10;
    int to = edge / 10;
    CheckedShell({"input", "swipe", std::to_string(x), std::to_string(from), std::to_string(x),
                  std::to_string(to), "300"});
}

std::string EscapeInputText(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == ' ') {
            out += "%s";
        } else {
            out += c;
        }
    }
    return out;
}

std::string UnescapeInputText(std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 1 < text.size() && text[i + 1] == 's') {
            out += ' ';
            ++i;
        } else {
            out += text[i];
        }
    }
    return out;
}

}  // namespace ctxmonkey
