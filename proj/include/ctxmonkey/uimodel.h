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

#include <cstddef>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace ctxmonkey {

class DeviceBackend;

struct Bounds {
    int left = 0;
    int top = 0;
    int right = 0;
    int bottom = 0;

    int width() const { return right - left; }
    int height() const { return bottom - top; }
    bool operator==(const Bounds&) const = default;
};

struct UiElement {
    std::string class_name;
    std::string resource_id;
    Bounds bounds;
    bool editable = false;
    bool focused = false;
    std::string text;

    bool operator==(const UiElement&) const = default;
};

// Identity used to decide whether a dump shows anything new. Bounds are left out:
// scrolling moves them and clipping at the viewport edge shrinks them. Rows that
// agree on all three fields collapse into one.
using ElementIdentity = std::tuple<std::string, std::string, std::string>;
ElementIdentity IdentityOf(const UiElement& e);

struct UiSnapshot {
    std::string activity;
    std::vector<UiElement> elements;  // document order

    bool operator==(const UiSnapshot&) const = default;
};

// Parses "[l,t][r,b]". Throws ParseError.
Bounds ParseBounds(std::string_view text);

// Flattens a uiautomator hierarchy in document order. Throws ParseError on
// malformed XML or bounds.
UiSnapshot ParseUiDump(std::string_view xml, std::string_view activity);

struct CollectResult {
    UiSnapshot snapshot;
    std::size_t dumps = 0;
    std::size_t scrolls = 0;
    // Set when the scroll limit stopped collection before a fixpoint.
    bool truncated = false;
};

/**
 * Dumps, merges unseen elements, scrolls down and repeats until a dump adds nothing.
 * The merged list keeps first-seen order. Gives up after |max_scrolls| scrolls.
 */
CollectResult CollectAllElements(DeviceBackend& device, std::string_view activity,
                                 std::size_t max_scrolls = 20);

// Editable elements ordered top-down, then left-right, then document order.
std::vector<UiElement> TextFields(const UiSnapshot& snapshot);

}  // namespace ctxmonkey
