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

#include "ctxmonkey/scenario.h"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/random.h"
#include "ctxmonkey/strings.h"

namespace ctxmonkey {

namespace {

constexpr std::string_view kKindNames[] = {"NetworkStatus", "NetworkDelay", "GsmProfile",
                                           "UserRotation",  "KeyPress",     "AirplaneMode"};

constexpr std::string_view kNetworkStatus[] = {"gsm",   "hscsd", "gprs", "edge", "umts",
                                               "hsdpa", "lte",   "evdo", "full"};
constexpr std::string_view kNetworkDelay[] = {"gprs", "edge", "umts", "none"};
constexpr std::string_view kGsmProfile[] = {"home", "roaming",      "searching", "denied",
                                            "unregistered", "off", "on"};
constexpr std::string_view kUserRotation[] = {"ROTATION_PORTRAIT", "ROTATION_LANDSCAPE",
                                              "ROTATION_REVERSE_PORTRAIT",
                                              "ROTATION_REVERSE_LANDSCAPE"};
constexpr std::string_view kKeyPress[] = {"KEYCODE_BACK",      "KEYCODE_HOME",
                                          "KEYCODE_MENU",      "KEYCODE_VOLUME_UP",
                                          "KEYCODE_VOLUME_DOWN", "KEYCODE_ENTER"};
constexpr std::string_view kAirplaneMode[] = {"on", "off"};

constexpr std::string_view kLegacyReversePortrait = "ROTATION_REVERSE_POTRAIT";

std::uint32_t ParseCount(std::string_view field, std::size_t line, const char* what) {
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(fmt::format("{} is not a non-negative integer: '{}'", what, field), line);
    }
    return value;
}

}  // namespace

EventKindSet AllEventKinds() {
    return EventKindSet(kAllEventKinds.begin(), kAllEventKinds.end());
}

std::string_view KindName(EventKind kind) {
    return kKindNames[KindOrdinal(kind)];
}

int KindOrdinal(EventKind kind) {
    return static_cast<int>(kind);
}

std::optional<EventKind> ParseKind(std::string_view name) {
    for (EventKind kind : kAllEventKinds) {
        if (KindName(kind) == name) return kind;
    }
    return std::nullopt;
}

std::span<const std::string_view> Vocabulary(EventKind kind) {
    switch (kind) {
        case EventKind::NetworkStatus:
            return kNetworkStatus;
        case EventKind::NetworkDelay:
            return kNetworkDelay;
        case EventKind::GsmProfile:
            return kGsmProfile;
        case EventKind::UserRotation:
            return kUserRotation;
        case EventKind::KeyPress:
            return kKeyPress;
        case EventKind::AirplaneMode:
            return kAirplaneMode;
    }
    return {};
}

std::optional<std::string> CanonicalValue(EventKind kind, std::string_view value) {
    if (kind == EventKind::UserRotation && value == kLegacyReversePortrait) {
        return std::string("ROTATION_REVERSE_PORTRAIT");
    }
    auto vocab = Vocabulary(kind);
    if (std::find(vocab.begin(), vocab.end(), value) == vocab.end()) return std::nullopt;
    return std::string(value);
}

std::size_t Scenario::EventCount() const {
    std::size_t n = 0;
    for (const auto& [kind, events] : sequences) n += events.size();
    return n;
}

void ValidateScenario(const Scenario& s) {
    if (s.duration_secs == 0) throw InvariantError("scenario duration must be positive");
    for (const auto& [kind, events] : s.sequences) {
        if (events.empty()) {
            throw InvariantError(fmt::format("{} has an empty sequence", KindName(kind)));
        }
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < events.size(); ++i) {
            const ContextualEvent& e = events[i];
            if (e.kind != kind) {
                throw InvariantError(fmt::format("{} event filed under {}", KindName(e.kind),
                                                 KindName(kind)));
            }
            if (e.index != i) {
                throw InvariantError(fmt::format("{} index {} where {} was expected",
                                                 KindName(kind), e.index, i));
            }
            if (e.interval_secs == 0) {
                throw InvariantError(
                        fmt::format("{} {} has a zero interval", KindName(kind), e.index));
            }
            if (CanonicalValue(kind, e.value) != e.value) {
                throw InvariantError(fmt::format("{} {} has non-canonical value '{}'",
                                                 KindName(kind), e.index, e.value));
            }
            sum += e.interval_secs;
        }
        if (sum != s.duration_secs) {
            throw InvariantError(fmt::format("{} intervals sum to {} but duration is {}",
                                             KindName(kind), sum, s.duration_secs));
        }
    }
}

Scenario GenerateScenario(const GeneratorConfig& config) {
    if (config.min_interval_secs == 0) throw InvalidConfig("min_interval must be at least 1");
    if (config.min_interval_secs > config.max_interval_secs) {
        throw InvalidConfig(fmt::format("min_interval {} exceeds max_interval {}",
                                        config.min_interval_secs, config.max_interval_secs));
    }
    if (config.max_interval_secs > config.duration_secs) {
        throw InvalidConfig(fmt::format("max_interval {} exceeds duration {}",
                                        config.max_interval_secs, config.duration_secs));
    }
    if (config.enabled_kinds.empty()) throw InvalidConfig("no event kinds enabled");

    Scenario scenario;
    scenario.duration_secs = config.duration_secs;
    for (EventKind kind : config.enabled_kinds) {
        Xoshiro256 rng(DeriveSeed(config.seed, static_cast<std::uint64_t>(KindOrdinal(kind))));
        auto vocab = Vocabulary(kind);
        std::vector<ContextualEvent> events;
        std::uint32_t elapsed = 0;
        while (elapsed < config.duration_secs) {
            auto interval = static_cast<std::uint32_t>(
                    rng.UniformInt(config.min_interval_secs, config.max_interval_secs));
            auto value_index = rng.UniformInt(0, vocab.size() - 1);
            interval = std::min(interval, config.duration_secs - elapsed);
            events.push_back(ContextualEvent{
                    .kind = kind,
                    .index = static_cast<std::uint32_t>(events.size()),
                    .interval_secs = interval,
                    .value = std::string(vocab[value_index]),
            });
            elapsed += interval;
        }
        scenario.sequences.emplace(kind, std::move(events));
    }
    return scenario;
}

std::string WriteScenarioCsv(const Scenario& s) {
    std::string out = fmt::format("duration,{}\n", s.duration_secs);
    for (const auto& [kind, events] : s.sequences) {
        for (const ContextualEvent& e : events) {
            out += fmt::format("{},{},{},{}\n", KindName(kind), e.index, e.interval_secs, e.value);
        }
    }
    return out;
}

Scenario ParseScenarioCsv(std::string_view text) {
    Scenario scenario;
    bool have_duration = false;
    std::size_t line_no = 0;
    for (std::string_view line : SplitLines(text)) {
        ++line_no;
        if (Trim(line).empty()) continue;
        std::vector<std::string_view> fields = Split(line, ',');
        if (!have_duration) {
            if (fields.size() != 2 || fields[0] != "duration") {
                throw ParseError("expected 'duration,<secs>' header", line_no);
            }
            scenario.duration_secs = ParseCount(fields[1], line_no, "duration");
            if (scenario.duration_secs == 0) throw ParseError("duration must be positive", line_no);
            have_duration = true;
            continue;
        }
        if (fields.size() != 4) {
            throw ParseError(fmt::format("expected 4 fields, found {}", fields.size()), line_no);
        }
        std::optional<EventKind> kind = ParseKind(fields[0]);
        if (!kind) throw ParseError(fmt::format("unknown event kind '{}'", fields[0]), line_no);
        std::uint32_t index = ParseCount(fields[1], line_no, "index");
        std::uint32_t interval = ParseCount(fields[2], line_no, "interval");
        std::optional<std::string> value = CanonicalValue(*kind, fields[3]);
        if (!value) {
            throw ParseError(fmt::format("'{}' is not a {} value", fields[3], KindName(*kind)),
                             line_no);
        }
        auto& events = scenario.sequences[*kind];
        if (index != events.size()) {
            throw InvariantError(fmt::format("line {}: {} index {} is not consecutive", line_no,
                                             KindName(*kind), index));
        }
        events.push_back(ContextualEvent{
                .kind = *kind, .index = index, .interval_secs = interval, .value = *value});
    }
    if (!have_duration) throw ParseError("missing 'duration' header", line_no == 0 ? 1 : line_no);
    ValidateScenario(scenario);
    return scenario;
}

Scenario FilterScenario(const Scenario& s, const EventKindSet& applicable) {
    Scenario out;
    out.duration_secs = s.duration_secs;
    for (const auto& [kind, events] : s.sequences) {
        if (applicable.contains(kind)) out.sequences.emplace(kind, events);
    }
    return out;
}

}  // namespace ctxmonkey
