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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxmonkey/log_time.h"

namespace ctxmonkey {

// Declaration order is the canonical order used by every serializer.
enum class EventKind {
    NetworkStatus,
    NetworkDelay,
    GsmProfile,
    UserRotation,
    KeyPress,
    AirplaneMode,
};

inline constexpr std::array<EventKind, 6> kAllEventKinds = {
        EventKind::NetworkStatus, EventKind::NetworkDelay, EventKind::GsmProfile,
        EventKind::UserRotation,  EventKind::KeyPress,     EventKind::AirplaneMode,
};

using EventKindSet = std::set<EventKind>;

EventKindSet AllEventKinds();

std::string_view KindName(EventKind kind);
std::optional<EventKind> ParseKind(std::string_view name);
int KindOrdinal(EventKind kind);

// The fixed set of values a kind can take, in canonical order.
std::span<const std::string_view> Vocabulary(EventKind kind);

// Returns the canonical spelling of |value| for |kind|, or nullopt when it is not in
// the vocabulary. Accepts the legacy "ROTATION_REVERSE_POTRAIT" spelling.
std::optional<std::string> CanonicalValue(EventKind kind, std::string_view value);

struct ContextualEvent {
    EventKind kind = EventKind::NetworkStatus;
    std::uint32_t index = 0;
    // Seconds until the next event of the same kind is applied.
    std::uint32_t interval_secs = 1;
    std::string value;

    bool operator==(const ContextualEvent&) const = default;
};

/**
 * Per-kind timelines of contextual events. Each non-empty sequence has consecutive
 * indices from 0 and its intervals sum to exactly |duration_secs|. Kinds without
 * events are absent from |sequences|.
 */
struct Scenario {
    std::uint32_t duration_secs = 1;
    std::map<EventKind, std::vector<ContextualEvent>> sequences;

    std::size_t EventCount() const;
    bool operator==(const Scenario&) const = default;
};

// One applied event as recorded by the executor; second resolution.
struct InjectionRecord {
    LogTime timestamp;
    ContextualEvent event;

    bool operator==(const InjectionRecord&) const = default;
};

// Throws InvariantError describing the first violated invariant.
void ValidateScenario(const Scenario& s);

struct GeneratorConfig {
    std::uint64_t seed = 0;
    std::uint32_t min_interval_secs = 5;
    std::uint32_t max_interval_secs = 12;
    std::uint32_t duration_secs = 60;
    EventKindSet enabled_kinds = AllEventKinds();
};

/**
 * Builds a scenario from a seed. Each enabled kind draws (interval, value) pairs
 * from its own Xoshiro256** stream seeded with DeriveSeed(seed, kind ordinal):
 * intervals uniform on [min, max], values uniform over the vocabulary. Drawing stops
 * once the running sum reaches the duration; the last interval is clamped so the sum
 * is exact.
 *
 * Throws InvalidConfig when min > max, max > duration, min == 0 or no kind is enabled.
 */
Scenario GenerateScenario(const GeneratorConfig& config);

/**
 * CSV codec. Layout, LF-terminated:
 *
 *     duration,<secs>
 *     <Kind>,<index>,<interval_secs>,<value>
 *     ...
 *
 * Kinds appear in enum order and events in index order.
 */
std::string WriteScenarioCsv(const Scenario& s);

// Throws ParseError (with line number) or InvariantError.
Scenario ParseScenarioCsv(std::string_view text);

Scenario FilterScenario(const Scenario& s, const EventKindSet& applicable);

}  // namespace ctxmonkey
