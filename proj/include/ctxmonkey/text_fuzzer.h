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
#include <functional>
#include <set>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "ctxmonkey/uimodel.h"

namespace ctxmonkey {

class DeviceBackend;

// Current hierarchy of the foreground activity.
using SnapshotProvider = std::function<UiSnapshot()>;

struct FuzzProgress {
    // Fields typed into, in walk order: (field key, typed text).
    std::vector<std::pair<std::string, std::string>> typed;
    // Fields given up on because they vanished between selection and focus.
    std::size_t skipped = 0;
    std::size_t scrolls = 0;
    bool cancelled = false;

    std::size_t completed() const { return typed.size(); }
};

struct TextFuzzOptions {
    std::uint64_t seed = 0;
    std::size_t max_scrolls = 20;
    // Focus attempts per field before it counts as skipped.
    int focus_attempts = 3;
};

// Key that survives a hierarchy refresh: class plus resource id, or the position
// among id-less fields of the same snapshot.
std::string FieldKey(const UiElement& field, const std::vector<UiElement>& fields);

// Deterministic input for the |ordinal|-th field: 1 to 32 printable characters.
std::string FuzzString(std::uint64_t seed, std::size_t ordinal);

/**
 * Walks the text fields top-down and types a seed-derived string into each one
 * exactly once. The set of completed field keys is kept across refreshes, so after
 * a rotation rebuilds the hierarchy the walk resumes at the first field not yet
 * typed into. Each field is tapped and its focus confirmed by a fresh dump before
 * any text is sent.
 */
FuzzProgress FuzzTextFields(DeviceBackend& device, const SnapshotProvider& snapshots,
                            const TextFuzzOptions& options, std::stop_token stop = {});

}  // namespace ctxmonkey
