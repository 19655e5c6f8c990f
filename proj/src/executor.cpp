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

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "ctxmonkey/device.h"
#include "ctxmonkey/errors.h"
#include "ctxmonkey/logparse.h"
#include "ctxmonkey/random.h"
#include "ctxmonkey/text_fuzzer.h"

namespace ctxmonkey {

using nlohmann::json;
using std::chrono::milliseconds;

std::string_view RunStatusName(RunStatus status) {
    switch (status) {
        case RunStatus::Running:
            return "running";
        case RunStatus::Completed:
            return "completed";
        case RunStatus::Crashed:
            return "crashed";
        case RunStatus::Aborted:
            return "aborted";
        case RunStatus::Cancelled:
            return "cancelled";
    }
    return "unknown";
}

namespace {

std::optional<RunStatus> ParseRunStatus(std::string_view name) {
    for (RunStatus s : {RunStatus::Running, RunStatus::Completed, RunStatus::Crashed,
                        RunStatus::Aborted, RunStatus::Cancelled}) {
        if (RunStatusName(s) == name) return s;
    }
    return std::nullopt;
}

// Append-only log file. Each line goes out in a single write(2) so a process that
// dies between lines leaves only whole lines behind.
class LineFile {
  public:
    explicit LineFile(const std::filesystem::path& path) {
        fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
        if (fd_ < 0) {
            throw Error(fmt::format("cannot open {}: {}", path.string(), std::strerror(errno)));
        }
    }
    ~LineFile() {
        if (fd_ >= 0) ::close(fd_);
    }
    LineFile(const LineFile&) = delete;
    LineFile& operator=(const LineFile&) = delete;

    void Append(std::string_view line) {
        std::string buf;
        buf.reserve(line.size() + 1);
        buf.append(line);
        buf.push_back('\n');
        std::lock_guard lock(mutex_);
        const char* p = buf.data();
        std::size_t left = buf.size();
        while (left > 0) {
            ssize_t n = ::write(fd_, p, left);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(fmt::format("log write failed: {}", std::strerror(errno)));
            }
            p += n;
            left -= static_cast<std::size_t>(n);
        }
    }

  private:
    int fd_ = -1;
    std::mutex mutex_;
};

void WriteFileAtomically(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) throw Error(fmt::format("cannot write {}", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

std::string ResolveActivity(const std::string& package_id, const std::string& name) {
    if (name.starts_with('.')) return package_id + name;
    if (name.find('.') == std::string::npos) return package_id + "." + name;
    return name;
}

// Mutable run state shared between the scheduler, the fuzzer and the log reader.
class RunState {
  public:
    RunState(RunArtifacts artifacts, const RunConfig& config, const Scenario& scenario)
        : artifacts_(std::move(artifacts)), config_(config), scenario_(scenario) {}

    template <typename F>
    auto With(F&& f) {
        std::lock_guard lock(mutex_);
        return f(artifacts_);
    }

    void Persist() {
        std::string text;
        std::filesystem::path path;
        {
            std::lock_guard lock(mutex_);
            text = WriteRunJson(artifacts_, config_, scenario_);
            path = artifacts_.run_json_path;
        }
        std::lock_guard lock(persist_mutex_);
        WriteFileAtomically(path, text);
    }

    RunArtifacts Snapshot() {
        std::lock_guard lock(mutex_);
        return artifacts_;
    }

  private:
    std::mutex mutex_;
    std::mutex persist_mutex_;
    RunArtifacts artifacts_;
    const RunConfig& config_;
    const Scenario& scenario_;
};

// Reads logcat into logcat.log and watches for the app's fatal crash.
class LogPump {
  public:
    LogPump(std::unique_ptr<LogcatStream> stream, LineFile& out, AppLogFilter filter,
            RunState& state, std::stop_source cancel, bool fatal_stop)
        : stream_(std::move(stream)),
          out_(out),
          filter_(std::move(filter)),
          state_(state),
          cancel_(std::move(cancel)),
          fatal_stop_(fatal_stop) {
        thread_ = std::jthread([this](std::stop_token stop) { Loop(stop); });
    }

    ~LogPump() { Stop(); }

    void SetActivity(std::string activity) {
        std::lock_guard lock(mutex_);
        activity_ = std::move(activity);
    }

    // Blocks until |lines| lines have been consumed or the stream ended.
    void WaitFor(std::size_t lines) {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return consumed_ >= lines || ended_; });
    }

    void Stop() {
        if (thread_.joinable()) {
            thread_.request_stop();
            thread_.join();
        }
    }

    // Valid after Stop().
    bool failed() const { return stream_->failed(); }
    std::set<int> pids() const {
        std::lock_guard lock(mutex_);
        return filter_.pids();
    }
    std::string error() const {
        std::lock_guard lock(mutex_);
        return error_;
    }

  private:
    void Loop(std::stop_token stop) {
        try {
            while (auto line = stream_->Next(stop)) {
                out_.Append(*line);
                LogcatParse parsed = ParseLogcatLine(*line);
                std::lock_guard lock(mutex_);
                if (auto* entry = std::get_if<LogcatEntry>(&parsed)) {
                    if (filter_.Observe(*entry)) OnFatal(*entry, *line);
                }
                ++consumed_;
                cv_.notify_all();
            }
        } catch (const std::exception& e) {
            std::lock_guard lock(mutex_);
            error_ = e.what();
        }
        std::lock_guard lock(mutex_);
        ended_ = true;
        cv_.notify_all();
    }

    void OnFatal(const LogcatEntry& entry, const std::string& line) {
        bool first = state_.With([&](RunArtifacts& a) {
            if (a.crash) return false;
            a.crash = CrashInfo{.activity = activity_, .timestamp = entry.timestamp, .line = line};
            return true;
        });
        if (first && fatal_stop_) cancel_.request_stop();
    }

    std::unique_ptr<LogcatStream> stream_;
    LineFile& out_;
    AppLogFilter filter_;
    RunState& state_;
    std::stop_source cancel_;
    const bool fatal_stop_;

    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::size_t consumed_ = 0;
    bool ended_ = false;
    std::string activity_;
    std::string error_;
    std::jthread thread_;
};

struct Scheduled {
    milliseconds due;
    const ContextualEvent* event;
};

// All events due within |dwell|, ordered by due time and then kind order. Event i+1
// of a kind is due interval_secs(i) after event i.
std::vector<Scheduled> Schedule(const Scenario& scenario, milliseconds dwell) {
    std::vector<Scheduled> out;
    for (const auto& [kind, events] : scenario.sequences) {
        milliseconds due{0};
        for (const auto& e : events) {
            if (due >= dwell) break;
            out.push_back({due, &e});
            due += std::chrono::seconds(e.interval_secs);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Scheduled& a, const Scheduled& b) {
        if (a.due != b.due) return a.due < b.due;
        return KindOrdinal(a.event->kind) < KindOrdinal(b.event->kind);
    });
    return out;
}

void Validate(const RunConfig& config, const AppMetadata& metadata, const Scenario& scenario) {
    if (metadata.package_id.empty()) throw ConfigError("package", "package id is empty");
    if (config.mode == RunMode::Guided && config.guided_activities.empty()) {
        throw ConfigError("activities", "guided mode needs at least one activity");
    }
    if (config.mode == RunMode::AllActivities && metadata.activities.empty()) {
        throw ConfigError("activities", "the app declares no activities");
    }
    if (config.per_activity_duration_secs && *config.per_activity_duration_secs == 0) {
        throw ConfigError("per_activity_duration", "must be positive");
    }
    if (config.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
    try {
        ValidateScenario(scenario);
    } catch (const InvariantError& e) {
        throw ConfigError("scenario", e.what());
    }
}

std::string ScenarioHash(const Scenario& scenario) {
    return fmt::format("fnv1a64:{:016x}", Fnv1a64(WriteScenarioCsv(scenario)));
}

}  // namespace

std::string WriteRunJson(const RunArtifacts& a, const RunConfig& config,
                         const Scenario& scenario) {
    json j;
    j["package"] = a.package_id;
    j["status"] = RunStatusName(a.status);
    j["error"] = a.error;
    j["executor_log"] = a.executor_log_path.filename().string();
    j["logcat_log"] = a.logcat_log_path.filename().string();
    json markers = json::array();
    for (const auto& m : a.activity_markers) {
        markers.push_back({{"activity", m.activity}, {"timestamp", m.timestamp.FormatMillis()}});
    }
    j["activity_markers"] = std::move(markers);
    if (a.crash) {
        j["crash"] = {{"activity", a.crash->activity},
                      {"timestamp", a.crash->timestamp.FormatMillis()},
                      {"line", a.crash->line}};
    } else {
        j["crash"] = nullptr;
    }
    json progress = json::object();
    for (const auto& [activity, p] : a.text_fuzz_progress) {
        progress[activity] = {{"completed", p.completed}, {"skipped", p.skipped}};
    }
    j["text_fuzz_progress"] = std::move(progress);
    j["injection_count"] = a.records.size();
    j["app_pids"] = a.app_pids;
    j["warnings"] = a.warnings;
    j["scenario_hash"] = a.scenario_hash;
    j["scenario_duration_secs"] = scenario.duration_secs;

    json cfg;
    cfg["mode"] = config.mode == RunMode::Guided ? "guided" : "all";
    cfg["activities"] = config.guided_activities;
    cfg["text_fuzz"] = config.text_fuzz;
    cfg["text_seed"] = config.text_seed;
    if (config.per_activity_duration_secs) {
        cfg["per_activity_duration_secs"] = *config.per_activity_duration_secs;
    } else {
        cfg["per_activity_duration_secs"] = nullptr;
    }
    cfg["fatal_stop"] = config.fatal_stop;
    cfg["max_scrolls"] = config.max_scrolls;
    cfg["apk"] = config.apk_path;
    j["config"] = std::move(cfg);
    return j.dump(2) + "\n";
}

RunArtifacts ParseRunJson(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(fmt::format("run.json: {}", e.what()));
    }
    auto stamp = [](const json& v) {
        auto t = LogTime::Parse(v.get<std::string>());
        if (!t) throw ParseError(fmt::format("run.json: bad timestamp {}", v.dump()));
        return *t;
    };
    RunArtifacts a;
    try {
        a.package_id = j.at("package").get<std::string>();
        auto status = ParseRunStatus(j.at("status").get<std::string>());
        if (!status) throw ParseError("run.json: unknown status");
        a.status = *status;
        a.error = j.value("error", "");
        a.executor_log_path = j.value("executor_log", std::string(kExecutorLogName));
        a.logcat_log_path = j.value("logcat_log", std::string(kLogcatLogName));
        for (const auto& m : j.at("activity_markers")) {
            a.activity_markers.push_back(
                    {m.at("activity").get<std::string>(), stamp(m.at("timestamp"))});
        }
        if (const auto& c = j.at("crash"); !c.is_null()) {
            a.crash = CrashInfo{.activity = c.at("activity").get<std::string>(),
                                .timestamp = stamp(c.at("timestamp")),
                                .line = c.value("line", "")};
        }
        for (const auto& [activity, p] : j.at("text_fuzz_progress").items()) {
            a.text_fuzz_progress[activity] = {p.at("completed").get<std::size_t>(),
                                              p.at("skipped").get<std::size_t>()};
        }
        a.app_pids = j.value("app_pids", std::set<int>{});
        a.warnings = j.value("warnings", std::vector<std::string>{});
        a.scenario_hash = j.value("scenario_hash", "");
    } catch (const json::exception& e) {
        throw ParseError(fmt::format("run.json: {}", e.what()));
    }
    return a;
}

RunArtifacts RunTest(DeviceBackend& device, const AppMetadata& metadata, const Scenario& scenario,
                     const RunConfig& config, const RunHooks& hooks) {
    Validate(config, metadata, scenario);

    std::vector<std::string> activities;
    if (config.mode == RunMode::Guided) {
        for (const auto& a : config.guided_activities) {
            activities.push_back(ResolveActivity(metadata.package_id, a));
        }
    } else {
        activities = metadata.activities;
    }
    const milliseconds dwell = std::chrono::seconds(
            config.per_activity_duration_secs.value_or(scenario.duration_secs));

    std::filesystem::create_directories(config.output_dir);
    RunArtifacts initial;
    initial.executor_log_path = config.output_dir / kExecutorLogName;
    initial.logcat_log_path = config.output_dir / kLogcatLogName;
    initial.run_json_path = config.output_dir / kRunJsonName;
    initial.package_id = metadata.package_id;
    initial.scenario_hash = ScenarioHash(scenario);
    LineFile executor_log(initial.executor_log_path);
    LineFile logcat_log(initial.logcat_log_path);
    RunState state(std::move(initial), config, scenario);
    state.Persist();

    std::stop_source cancel;
    std::optional<std::stop_callback<std::function<void()>>> external;
    if (hooks.external_stop.stop_possible()) {
        external.emplace(hooks.external_stop, [&cancel] { cancel.request_stop(); });
    }

    std::unique_ptr<LogPump> pump;
    auto barrier = [&] {
        if (!pump) return;
        if (auto lines = device.LogcatSyncPoint()) pump->WaitFor(*lines);
    };
    auto warn = [&](std::string message) {
        state.With([&](RunArtifacts& a) {
            a.warnings.push_back(std::move(message));
            return 0;
        });
    };

    try {
        if (!config.apk_path.empty()) {
            device.Install(config.apk_path, metadata.package_id);
        } else if (!device.IsInstalled(metadata.package_id)) {
            throw InstallError(
                    fmt::format("{} is not installed and no apk was given", metadata.package_id));
        }

        const Scenario filtered = FilterScenario(scenario, ApplicableEventKinds(metadata));
        const std::vector<Scheduled> plan = Schedule(filtered, dwell);

        device.LogcatClear();
        pump = std::make_unique<LogPump>(device.OpenLogcat(), logcat_log,
                                         AppLogFilter(metadata.package_id), state, cancel,
                                         config.fatal_stop);
        Clock& clock = device.clock();

        for (const std::string& activity : activities) {
            if (cancel.stop_requested()) break;
            barrier();
            pump->SetActivity(activity);
            state.With([&](RunArtifacts& a) {
                a.activity_markers.push_back({activity, clock.Now()});
                return 0;
            });
            state.Persist();
            const milliseconds start = clock.Elapsed();

            device.LaunchActivity(metadata.package_id, activity);
            barrier();

            std::exception_ptr fuzz_failure;
            std::jthread fuzzer;
            if (config.text_fuzz && !cancel.stop_requested()) {
                fuzzer = std::jthread([&, activity] {
                    TextFuzzOptions options{.seed = DeriveSeed(config.text_seed, Fnv1a64(activity)),
                                            .max_scrolls = config.max_scrolls};
                    FuzzSummary summary;
                    try {
                        FuzzProgress p = FuzzTextFields(
                                device, [&] { return ParseUiDump(device.UiDump(), activity); },
                                options, cancel.get_token());
                        summary = {p.completed(), p.skipped};
                    } catch (const ConnectionLost&) {
                        fuzz_failure = std::current_exception();
                    } catch (const std::exception& e) {
                        warn(fmt::format("text fuzzing in {}: {}", activity, e.what()));
                    }
                    state.With([&](RunArtifacts& a) {
                        a.text_fuzz_progress[activity] = summary;
                        return 0;
                    });
                });
            }

            // Stops and joins the fuzzer when injection throws.
            struct Joiner {
                std::jthread& t;
                std::stop_source& cancel;
                ~Joiner() {
                    if (!t.joinable()) return;
                    if (std::uncaught_exceptions() > 0) cancel.request_stop();
                    t.join();
                }
            } joiner{fuzzer, cancel};

            for (const Scheduled& s : plan) {
                if (!clock.SleepUntil(start + s.due, cancel.get_token())) break;
                barrier();
                if (cancel.stop_requested()) break;
                InjectionRecord record{clock.Now().TruncatedToSeconds(), *s.event};
                device.ApplyEvent(record.event);
                executor_log.Append(FormatExecutorLine(record));
                state.With([&](RunArtifacts& a) {
                    a.records.push_back(record);
                    return 0;
                });
                if (hooks.on_injection) hooks.on_injection(record);
                barrier();
            }
            clock.SleepUntil(start + dwell, cancel.get_token());

            if (fuzzer.joinable()) fuzzer.join();
            if (fuzz_failure) std::rethrow_exception(fuzz_failure);
        }

        barrier();
        pump->Stop();
        // The pump takes its own lock before the state's; never nest them the other way.
        std::set<int> pids = pump->pids();
        state.With([&](RunArtifacts& a) {
            a.app_pids = std::move(pids);
            if (a.crash) {
                a.status = RunStatus::Crashed;
            } else if (hooks.external_stop.stop_requested()) {
                a.status = RunStatus::Cancelled;
            } else {
                a.status = RunStatus::Completed;
            }
            return 0;
        });
        if (pump->failed()) warn("logcat stream ended early");
        if (std::string e = pump->error(); !e.empty()) warn("logcat reader: " + e);
        state.Persist();
    } catch (const DeviceError& e) {
        if (pump) {
            pump->Stop();
            std::set<int> pids = pump->pids();
            state.With([&](RunArtifacts& a) {
                a.app_pids = std::move(pids);
                return 0;
            });
        }
        state.With([&](RunArtifacts& a) {
            a.status = RunStatus::Aborted;
            a.error = e.what();
            return 0;
        });
        state.Persist();
        throw;
    }
    return state.Snapshot();
}

}  // namespace ctxmonkey
