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

#include <algorithm>
#include <charconv>
#include <limits>

#include <fmt/format.h>
#include <json.hpp>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/strings.h"

namespace ctxmonkey {

namespace {

constexpr int kSystemPid = 612;
constexpr int kEndlessRowHeight = 160;

bool ParseInt(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

std::string XmlEscape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

ShellResult Ok(std::string out = {}) {
    return ShellResult{.exit_code = 0, .out = std::move(out), .err = {}};
}

ShellResult Fail(int code, std::string err) {
    return ShellResult{.exit_code = code, .out = {}, .err = std::move(err)};
}

std::string ShortActivityName(const std::string& package, const std::string& activity) {
    if (activity.starts_with(package + ".")) return activity.substr(package.size());
    return activity;
}

}  // namespace

// SimScript

SimScript SimScript::DefaultFor(const AppMetadata& metadata) {
    SimScript script;
    script.package_id = metadata.package_id;
    for (const auto& name : metadata.activities) {
        SimActivity activity{.name = name, .rows = {}, .endless = false};
        std::string short_name = ShortActivityName(metadata.package_id, name);
        activity.rows.push_back(SimNode{.class_name = "android.widget.TextView",
                                        .resource_id = metadata.package_id + ":id/title",
                                        .text = short_name,
                                        .height = 160,
                                        .editable = false});
        for (int i = 0; i < 2; ++i) {
            activity.rows.push_back(SimNode{
                    .class_name = "android.widget.EditText",
                    .resource_id = fmt::format("{}:id/input_{}", metadata.package_id, i),
                    .text = "",
                    .height = 160,
                    .editable = true});
        }
        script.activities.push_back(std::move(activity));
    }
    return script;
}

namespace {

using nlohmann::json;

SimRule RuleFromJson(const json& j) {
    SimRule rule;
    const json& trigger = j.at("trigger");
    if (trigger.contains("after_events")) {
        rule.trigger = SimRule::Trigger::AfterEvents;
        rule.after_events = trigger.at("after_events").get<std::size_t>();
        if (rule.after_events == 0) throw ParseError("after_events must be at least 1");
    } else if (trigger.contains("kind")) {
        rule.trigger = SimRule::Trigger::OnEvent;
        auto name = trigger.at("kind").get<std::string>();
        rule.kind = ParseKind(name);
        if (!rule.kind) throw ParseError("unknown event kind in rule: " + name);
        if (trigger.contains("value")) {
            auto v = CanonicalValue(*rule.kind, trigger.at("value").get<std::string>());
            if (!v) throw ParseError("rule value not in vocabulary for " + name);
            rule.value = *v;
        }
        rule.repeat = trigger.value("repeat", false);
    } else if (trigger.contains("at_secs")) {
        rule.trigger = SimRule::Trigger::AtTime;
        rule.at_secs = trigger.at("at_secs").get<std::uint32_t>();
    } else {
        throw ParseError("rule trigger needs after_events, kind or at_secs");
    }
    auto level = j.value("level", std::string("E"));
    if (level != "W" && level != "E" && level != "F") {
        throw ParseError("rule level must be W, E or F, not " + level);
    }
    rule.level = level[0];
    rule.tag = j.at("tag").get<std::string>();
    rule.message = j.at("message").get<std::string>();
    rule.from_app = j.value("from_app", true);
    return rule;
}

json RuleToJson(const SimRule& rule) {
    json trigger;
    switch (rule.trigger) {
        case SimRule::Trigger::AfterEvents:
            trigger["after_events"] = rule.after_events;
            break;
        case SimRule::Trigger::OnEvent:
            trigger["kind"] = std::string(KindName(*rule.kind));
            if (rule.value) trigger["value"] = *rule.value;
            if (rule.repeat) trigger["repeat"] = true;
            break;
        case SimRule::Trigger::AtTime:
            trigger["at_secs"] = rule.at_secs;
            break;
    }
    return json{{"trigger", trigger},
                {"level", std::string(1, rule.level)},
                {"tag", rule.tag},
                {"message", rule.message},
                {"from_app", rule.from_app}};
}

}  // namespace

SimScript ParseSimScript(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("sim script is not valid JSON: ") + e.what());
    }
    try {
        SimScript script;
        script.package_id = j.at("package").get<std::string>();
        script.app_pid = j.value("app_pid", script.app_pid);
        if (j.contains("start_time")) {
            auto t = LogTime::Parse(j.at("start_time").get<std::string>());
            if (!t) throw ParseError("start_time must be 'MM-DD HH:MM:SS'");
            script.start_time = *t;
        }
        if (j.contains("screen")) {
            script.screen_width = j["screen"].value("width", script.screen_width);
            script.screen_height = j["screen"].value("height", script.screen_height);
        }
        if (script.screen_width <= 0 || script.screen_height <= 0) {
            throw ParseError("screen dimensions must be positive");
        }
        script.installed = j.value("installed", false);
        if (j.contains("disconnect_after_events")) {
            script.disconnect_after_events = j["disconnect_after_events"].get<std::size_t>();
        }
        for (const json& r : j.value("rules", json::array())) script.rules.push_back(RuleFromJson(r));
        for (const json& a : j.value("activities", json::array())) {
            SimActivity activity;
            activity.name = a.at("name").get<std::string>();
            activity.endless = a.value("endless", false);
            for (const json& n : a.value("rows", json::array())) {
                SimNode node;
                node.class_name = n.value("class", node.class_name);
                node.resource_id = n.value("id", std::string());
                node.text = n.value("text", std::string());
                node.height = n.value("height", node.height);
                node.editable = n.value("editable", node.class_name.find("EditText") !=
                                                            std::string::npos);
                if (node.height <= 0) throw ParseError("row height must be positive");
                activity.rows.push_back(std::move(node));
            }
            script.activities.push_back(std::move(activity));
        }
        return script;
    } catch (const json::exception& e) {
        throw ParseError(std::string("sim script: ") + e.what());
    }
}

std::string WriteSimScript(const SimScript& script) {
    json j;
    j["package"] = script.package_id;
    j["app_pid"] = script.app_pid;
    j["start_time"] = script.start_time.FormatSeconds();
    j["screen"] = {{"width", script.screen_width}, {"height", script.screen_height}};
    j["installed"] = script.installed;
    if (script.disconnect_after_events) j["disconnect_after_events"] = *script.disconnect_after_events;
    j["rules"] = json::array();
    for (const auto& r : script.rules) j["rules"].push_back(RuleToJson(r));
    j["activities"] = json::array();
    for (const auto& a : script.activities) {
        json rows = json::array();
        for (const auto& n : a.rows) {
            rows.push_back({{"class", n.class_name},
                            {"id", n.resource_id},
                            {"text", n.text},
                            {"height", n.height},
                            {"editable", n.editable}});
        }
        j["activities"].push_back({{"name", a.name}, {"endless", a.endless}, {"rows", rows}});
    }
    return j.dump(2) + "\n";
}

// Logcat stream

class SimDevice::Stream : public LogcatStream {
  public:
    explicit Stream(SimDevice& device) : device_(device) {
        std::lock_guard lock(device_.mutex_);
        generation_ = device_.log_generation_;
    }

    std::optional<std::string> Next(std::stop_token stop) override {
        std::unique_lock lock(device_.mutex_);
        for (;;) {
            bool ready = device_.log_cv_.wait(lock, stop, [&] {
                return device_.disconnected_ || generation_ != device_.log_generation_ ||
                       cursor_ < device_.logcat_.size();
            });
            if (!ready) return std::nullopt;
            if (generation_ != device_.log_generation_) {
                // Cleared underneath us; continue from the new buffer's start.
                generation_ = device_.log_generation_;
                cursor_ = 0;
            }
            if (cursor_ < device_.logcat_.size()) return device_.logcat_[cursor_++];
            if (device_.disconnected_) {
                failed_ = true;
                return std::nullopt;
            }
        }
    }

    bool failed() const override { return failed_; }

  private:
    SimDevice& device_;
    std::uint64_t generation_ = 0;
    std::size_t cursor_ = 0;
    bool failed_ = false;
};

// SimDevice

SimDevice::SimDevice(SimScript script)
    : script_(std::move(script)), clock_(script_.start_time), rule_fired_(script_.rules.size()) {
    state_.installed = script_.installed;
    logcat_.push_back("--------- beginning of main");
    clock_.SetAdvanceHook([this](std::chrono::milliseconds from, std::chrono::milliseconds to) {
        OnClockAdvance(from, to);
    });
}

SimDevice::~SimDevice() {
    clock_.SetAdvanceHook(nullptr);
}

SimState SimDevice::state() const {
    std::lock_guard lock(mutex_);
    return state_;
}

std::vector<std::string> SimDevice::LogcatLines() const {
    std::lock_guard lock(mutex_);
    return {logcat_.begin(), logcat_.end()};
}

std::optional<std::size_t> SimDevice::LogcatSyncPoint() {
    std::lock_guard lock(mutex_);
    return logcat_.size();
}

std::unique_ptr<LogcatStream> SimDevice::OpenLogcat() {
    {
        std::lock_guard lock(mutex_);
        CheckConnectedLocked();
    }
    return std::make_unique<Stream>(*this);
}

void SimDevice::CheckConnectedLocked() const {
    if (disconnected_) throw ConnectionLost("simulated device disconnected");
}

void SimDevice::EmitLocked(LogTime at, int pid, int tid, char level, std::string_view tag,
                           std::string_view message) {
    logcat_.push_back(fmt::format("{} {:5} {:5} {} {:<8}: {}", at.FormatMillis(), pid, tid, level,
                                  tag, message));
    log_cv_.notify_all();
}

ConsoleResponse SimDevice::ConsoleCommand(std::string_view cmd) {
    std::lock_guard lock(mutex_);
    CheckConnectedLocked();
    state_.commands.push_back("console: " + std::string(cmd));
    return HandleConsoleLocked(cmd);
}

ConsoleResponse SimDevice::HandleConsole(std::string_view cmd) {
    std::lock_guard lock(mutex_);
    CheckConnectedLocked();
    state_.commands.push_back("console: " + std::string(cmd));
    return HandleConsoleLocked(cmd);
}

ConsoleResponse SimDevice::HandleConsoleLocked(std::string_view cmd) {
    auto ko = [](std::string msg) { return ConsoleResponse{.ok = false, .lines = {"KO: " + msg}}; };
    auto ok = [] { return ConsoleResponse{.ok = true, .lines = {"OK"}}; };

    std::vector<std::string_view> words = SplitWhitespace(Trim(cmd));
    if (words.empty()) return ok();
    if (words.size() == 3 && words[0] == "network" && (words[1] == "speed" || words[1] == "delay")) {
        EventKind kind = words[1] == "speed" ? EventKind::NetworkStatus : EventKind::NetworkDelay;
        auto value = CanonicalValue(kind, words[2]);
        if (!value) return ko(fmt::format("bad network {} value '{}'", words[1], words[2]));
        (words[1] == "speed" ? state_.network_speed : state_.network_delay) = *value;
        OnEventAppliedLocked(kind, *value);
        return ok();
    }
    if (words.size() == 3 && words[0] == "gsm" && (words[1] == "data" || words[1] == "voice")) {
        auto value = CanonicalValue(EventKind::GsmProfile, words[2]);
        if (!value) return ko(fmt::format("bad gsm state '{}'", words[2]));
        if (words[1] == "data") {
            state_.gsm_data = *value;
            // gsm voice always follows gsm data for one event, so only data counts.
            OnEventAppliedLocked(EventKind::GsmProfile, *value);
        } else {
            state_.gsm_voice = *value;
        }
        return ok();
    }
    if (words.size() == 2 && words[0] == "auth") return ok();
    return ko(fmt::format("unknown command '{}'", Trim(cmd)));
}

ShellResult SimDevice::Shell(const std::vector<std::string>& args) {
    std::lock_guard lock(mutex_);
    CheckConnectedLocked();
    std::string joined;
    for (const auto& a : args) joined += (joined.empty() ? "" : " ") + a;
    state_.commands.push_back("shell: " + joined);
    return HandleShellLocked(args);
}

ShellResult SimDevice::HandleShellLocked(const std::vector<std::string>& args) {
    auto is = [&](std::initializer_list<std::string_view> prefix) {
        if (args.size() < prefix.size()) return false;
        return std::equal(prefix.begin(), prefix.end(), args.begin());
    };

    if (args.empty()) return Ok();
    if (is({"pm", "list", "packages"})) {
        if (!state_.installed) return Ok();
        if (args.size() > 3 && script_.package_id.find(args[3]) == std::string::npos) return Ok();
        return Ok("package:" + script_.package_id + "\n");
    }
    if (is({"logcat", "-c"}) && args.size() == 2) {
        logcat_.clear();
        logcat_.push_back("--------- beginning of main");
        ++log_generation_;
        log_cv_.notify_all();
        return Ok();
    }
    if (is({"settings", "put", "system", "accelerometer_rotation"}) && args.size() == 5) {
        return Ok();
    }
    if (is({"settings", "put", "system", "user_rotation"}) && args.size() == 5) {
        int rotation = -1;
        if (!ParseInt(args[4], rotation) || rotation < 0 || rotation > 3) {
            return Fail(1, "bad rotation " + args[4]);
        }
        bool was_landscape = LandscapeLocked();
        state_.user_rotation = rotation;
        if (view_ && was_landscape != LandscapeLocked()) {
            // Configuration change: the activity is recreated at the top, focus lost.
            view_->scroll = 0;
            view_->focused_row.reset();
        }
        static constexpr std::string_view kRotations[] = {
                "ROTATION_PORTRAIT", "ROTATION_LANDSCAPE", "ROTATION_REVERSE_PORTRAIT",
                "ROTATION_REVERSE_LANDSCAPE"};
        OnEventAppliedLocked(EventKind::UserRotation, std::string(kRotations[rotation]));
        return Ok();
    }
    if (is({"settings", "put", "global", "airplane_mode_on"}) && args.size() == 5) {
        if (args[4] != "0" && args[4] != "1") return Fail(1, "bad airplane_mode_on " + args[4]);
        state_.airplane_mode = args[4] == "1";
        OnEventAppliedLocked(EventKind::AirplaneMode, state_.airplane_mode ? "on" : "off");
        return Ok();
    }
    if (is({"am", "broadcast", "-a", "android.intent.action.AIRPLANE_MODE"})) {
        return Ok("Broadcasting: Intent { act=android.intent.action.AIRPLANE_MODE }\n"
                  "Broadcast completed: result=0\n");
    }
    if (is({"am", "start"})) {
        auto n = std::find(args.begin(), args.end(), "-n");
        if (n == args.end() || n + 1 == args.end()) return Fail(1, "Error: no component");
        const std::string& component = *(n + 1);
        auto slash = component.find('/');
        std::string package = component.substr(0, slash);
        std::string activity = slash == std::string::npos ? "" : component.substr(slash + 1);
        if (!activity.empty() && activity.front() == '.') activity = package + activity;
        auto it = std::find_if(script_.activities.begin(), script_.activities.end(),
                               [&](const SimActivity& a) { return a.name == activity; });
        if (package != script_.package_id || !state_.installed || it == script_.activities.end()) {
            return ShellResult{.exit_code = 1,
                               .out = fmt::format("Starting: Intent {{ cmp={} }}\nError: Activity "
                                                  "class {{{}}} does not exist.\n",
                                                  component, component),
                               .err = {}};
        }
        LogTime now = clock_.Now();
        if (!process_started_ || state_.crashed) {
            EmitLocked(now, kSystemPid, kSystemPid + 17, 'I', "ActivityManager",
                       fmt::format("Start proc {}:{}/u0a55 for activity {{{}}}", script_.app_pid,
                                   script_.package_id, component));
            process_started_ = true;
            state_.crashed = false;
        }
        EmitLocked(now, kSystemPid, kSystemPid + 17, 'I', "ActivityManager",
                   fmt::format("START u0 {{cmp={}}} from uid 2000", component));
        view_ = ActivityView{.activity = static_cast<std::size_t>(it - script_.activities.begin()),
                             .scroll = 0,
                             .focused_row = std::nullopt};
        state_.foreground_activity = activity;
        state_.package_ops.push_back("launch " + activity);
        return Ok(fmt::format("Starting: Intent {{ cmp={} }}\nStatus: ok\nActivity: {}\n",
                              component, component));
    }
    if (is({"input"})) return HandleInputLocked(args);
    if (is({"uiautomator", "dump"})) {
        if (!view_) return Fail(1, "ERROR: null root node returned by UiTestAutomationBridge.");
        ++state_.ui_dumps;
        return Ok(DumpLocked() + "UI hierchary dumped to: /dev/tty\n");
    }
    if (is({"wm", "size"})) {
        return Ok(fmt::format("Physical size: {}x{}\n", script_.screen_width, script_.screen_height));
    }
    return Fail(127, "/system/bin/sh: " + args[0] + ": not found");
}

ShellResult SimDevice::HandleInputLocked(const std::vector<std::string>& args) {
    if (args.size() == 3 && args[1] == "keyevent") {
        auto value = CanonicalValue(EventKind::KeyPress, args[2]);
        if (!value) return Fail(1, "Unknown keycode " + args[2]);
        state_.key_presses.push_back(*value);
        OnEventAppliedLocked(EventKind::KeyPress, *value);
        return Ok();
    }
    if (args.size() == 3 && args[1] == "text") {
        if (!view_ || !view_->focused_row) {
            ++state_.dropped_inputs;
            return Ok();
        }
        auto row = RowLocked(view_->activity, *view_->focused_row);
        if (!row || !row->editable) {
            ++state_.dropped_inputs;
            return Ok();
        }
        std::string key = RowKeyLocked(*view_->focused_row);
        ++state_.input_counts[key];
        state_.field_text[key] += UnescapeInputText(args[2]);
        return Ok();
    }
    if (args.size() == 4 && args[1] == "tap") {
        int x = 0, y = 0;
        if (!ParseInt(args[2], x) || !ParseInt(args[3], y)) return Fail(1, "bad tap coordinates");
        if (!view_) return Ok();
        view_->focused_row.reset();
        if (x < 0 || x >= ViewportWidthLocked()) return Ok();
        auto row = RowAtLocked(y);
        if (row) {
            auto node = RowLocked(view_->activity, *row);
            if (node && node->editable) view_->focused_row = row;
        }
        return Ok();
    }
    if ((args.size() == 6 || args.size() == 7) && args[1] == "swipe") {
        int coords[4];
        for (int i = 0; i < 4; ++i) {
            if (!ParseInt(args[2 + i], coords[i])) return Fail(1, "bad swipe coordinates");
        }
        if (!view_ || coords[3] >= coords[1]) return Ok();
        // An upward fling pages the list by one viewport.
        std::size_t count = RowCountLocked(view_->activity);
        int vh = ViewportHeightLocked();
        if (count == std::numeric_limits<std::size_t>::max()) {
            view_->scroll += vh;
        } else {
            int content = RowTopLocked(view_->activity, count);
            view_->scroll = std::min(view_->scroll + vh, std::max(0, content - vh));
        }
        return Ok();
    }
    return Fail(1, "input: unsupported arguments");
}

void SimDevice::OnEventAppliedLocked(EventKind kind, const std::string& value) {
    ++state_.injected_events;
    LogTime now = clock_.Now();
    for (std::size_t i = 0; i < script_.rules.size(); ++i) {
        const SimRule& rule = script_.rules[i];
        if (state_.crashed) break;
        if (rule_fired_[i] && !(rule.trigger == SimRule::Trigger::OnEvent && rule.repeat)) continue;
        bool match = false;
        if (rule.trigger == SimRule::Trigger::AfterEvents) {
            match = state_.injected_events == rule.after_events;
        } else if (rule.trigger == SimRule::Trigger::OnEvent) {
            match = rule.kind == kind && (!rule.value || *rule.value == value);
        }
        if (match) {
            rule_fired_[i] = true;
            FireRuleLocked(rule, now);
        }
    }
    if (script_.disconnect_after_events &&
        state_.injected_events >= *script_.disconnect_after_events) {
        disconnected_ = true;
        log_cv_.notify_all();
    }
}

void SimDevice::FireRuleLocked(const SimRule& rule, LogTime at) {
    int pid = rule.from_app ? script_.app_pid : kSystemPid;
    int tid = rule.from_app ? script_.app_pid : kSystemPid + 31;
    EmitLocked(at, pid, tid, rule.level, rule.tag, rule.message);
    if (rule.level == 'F' && rule.from_app) {
        state_.crashed = true;
        state_.foreground_activity.clear();
        view_.reset();
    }
}

void SimDevice::OnClockAdvance(std::chrono::milliseconds from, std::chrono::milliseconds to) {
    std::lock_guard lock(mutex_);
    std::vector<std::size_t> due;
    for (std::size_t i = 0; i < script_.rules.size(); ++i) {
        const SimRule& rule = script_.rules[i];
        if (rule.trigger != SimRule::Trigger::AtTime || rule_fired_[i]) continue;
        auto at = std::chrono::seconds(rule.at_secs);
        if (at > from && at <= to) due.push_back(i);
    }
    std::stable_sort(due.begin(), due.end(), [&](std::size_t a, std::size_t b) {
        return script_.rules[a].at_secs < script_.rules[b].at_secs;
    });
    for (std::size_t i : due) {
        if (state_.crashed) break;
        rule_fired_[i] = true;
        FireRuleLocked(script_.rules[i], script_.start_time + std::chrono::seconds(script_.rules[i].at_secs));
    }
}

void SimDevice::InstallApk(const std::string& apk_path) {
    std::lock_guard lock(mutex_);
    CheckConnectedLocked();
    state_.package_ops.push_back("install " + apk_path);
    state_.installed = true;
    process_started_ = false;
}

void SimDevice::UninstallPackage(const std::string& package_id) {
    std::lock_guard lock(mutex_);
    CheckConnectedLocked();
    if (package_id != script_.package_id || !state_.installed) {
        throw InstallError("Failure [DELETE_FAILED_INTERNAL_ERROR] " + package_id);
    }
    state_.package_ops.push_back("uninstall " + package_id);
    state_.installed = false;
    process_started_ = false;
    view_.reset();
}

// Layout

bool SimDevice::LandscapeLocked() const {
    return state_.user_rotation % 2 == 1;
}

int SimDevice::ViewportWidthLocked() const {
    return LandscapeLocked() ? script_.screen_height : script_.screen_width;
}

int SimDevice::ViewportHeightLocked() const {
    return LandscapeLocked() ? script_.screen_width : script_.screen_height;
}

std::size_t SimDevice::RowCountLocked(std::size_t activity) const {
    const SimActivity& a = script_.activities[activity];
    return a.endless ? std::numeric_limits<std::size_t>::max() : a.rows.size();
}

std::optional<SimNode> SimDevice::RowLocked(std::size_t activity, std::size_t index) const {
    const SimActivity& a = script_.activities[activity];
    if (index < a.rows.size()) return a.rows[index];
    if (!a.endless) return std::nullopt;
    return SimNode{.class_name = "android.widget.TextView",
                   .resource_id = "",
                   .text = fmt::format("Item {}", index),
                   .height = kEndlessRowHeight,
                   .editable = false};
}

int SimDevice::RowTopLocked(std::size_t activity, std::size_t index) const {
    const SimActivity& a = script_.activities[activity];
    int top = 0;
    std::size_t fixed = std::min(index, a.rows.size());
    for (std::size_t i = 0; i < fixed; ++i) top += a.rows[i].height;
    if (index > a.rows.size()) top += static_cast<int>(index - a.rows.size()) * kEndlessRowHeight;
    return top;
}

std::optional<std::size_t> SimDevice::RowAtLocked(int screen_y) const {
    if (!view_ || screen_y < 0 || screen_y >= ViewportHeightLocked()) return std::nullopt;
    int content_y = screen_y + view_->scroll;
    std::size_t count = RowCountLocked(view_->activity);
    int top = 0;
    for (std::size_t i = 0; i < count; ++i) {
        auto row = RowLocked(view_->activity, i);
        if (content_y < top + row->height) return i;
        top += row->height;
        if (top > content_y) break;
    }
    return std::nullopt;
}

std::string SimDevice::RowKeyLocked(std::size_t row) const {
    auto node = RowLocked(view_->activity, row);
    if (node && !node->resource_id.empty()) return node->resource_id;
    return fmt::format("#{}", row);
}

std::string SimDevice::DumpLocked() const {
    const int w = ViewportWidthLocked();
    const int h = ViewportHeightLocked();
    auto node_attrs = [&](int index, std::string_view text, std::string_view id,
                          std::string_view cls, bool focusable, bool focused, bool scrollable,
                          int l, int t, int r, int b) {
        return fmt::format(
                "index=\"{}\" text=\"{}\" resource-id=\"{}\" class=\"{}\" package=\"{}\" "
                "content-desc=\"\" checkable=\"false\" checked=\"false\" clickable=\"{}\" "
                "enabled=\"true\" focusable=\"{}\" focused=\"{}\" scrollable=\"{}\" "
                "long-clickable=\"false\" password=\"false\" selected=\"false\" "
                "bounds=\"[{},{}][{},{}]\"",
                index, XmlEscape(text), XmlEscape(id), XmlEscape(cls), script_.package_id,
                focusable ? "true" : "false", focusable ? "true" : "false",
                focused ? "true" : "false", scrollable ? "true" : "false", l, t, r, b);
    };

    std::string xml = fmt::format(
            "<?xml version='1.0' encoding='UTF-8' standalone='yes' ?><hierarchy rotation=\"{}\">",
            state_.user_rotation);
    xml += "<node " +
           node_attrs(0, "", "", "android.widget.FrameLayout", false, false, false, 0, 0, w, h) +
           ">";
    xml += "<node " +
           node_attrs(0, "", script_.package_id + ":id/content", "android.widget.ScrollView",
                      false, false, true, 0, 0, w, h) +
           ">";
    // Rows cut by the viewport edge report only their visible part, as uiautomator does.
    std::size_t count = RowCountLocked(view_->activity);
    int top = RowTopLocked(view_->activity, 0);
    int index = 0;
    for (std::size_t i = 0; i < count; ++i) {
        auto row = RowLocked(view_->activity, i);
        int screen_top = top - view_->scroll;
        top += row->height;
        if (screen_top >= h) break;
        if (screen_top + row->height <= 0) continue;
        std::string text = row->text;
        if (row->editable) {
            auto it = state_.field_text.find(RowKeyLocked(i));
            if (it != state_.field_text.end()) text = it->second;
        }
        bool focused = view_->focused_row == i;
        xml += "<node " +
               node_attrs(index++, text, row->resource_id, row->class_name, row->editable, focused,
                          false, 0, std::max(screen_top, 0), w,
                          std::min(screen_top + row->height, h)) +
               " />";
    }
    xml += "</node></node></hierarchy>";
    return xml;
}

}  // namespace ctxmonkey
