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

#include "ctxmonkey/text_fuzzer.h"

#include <algorithm>
#include <map>
#include <optional>
#include <string_view>

#include <fmt/format.h>

#include "ctxmonkey/device.h"
#include "ctxmonkey/random.h"

namespace ctxmonkey {

namespace {

constexpr std::string_view kAlphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 !#$&*()-_=+[]{};:,.<>?/@";

constexpr std::uint64_t kFuzzStreamLabel = 0x7465787446757A7Aull;  // "textFuzz"

std::optional<UiElement> FindByKey(const std::vector<UiElement>& fields, const std::string& key) {
    for (const auto& f : fields) {
        if (FieldKey(f, fields) == key) return f;
    }
    return std::nullopt;
}

}  // namespace

std::string FieldKey(const UiElement& field, const std::vector<UiElement>& fields) {
    if (!field.resource_id.empty()) return field.class_name + "|" + field.resource_id;
    std::size_t ordinal = 0;
    for (const auto& f : fields) {
        if (&f == &field || f == field) break;
        if (f.resource_id.empty() && f.class_name == field.class_name) ++ordinal;
    }
    return fmt::format("{}|#{}", field.class_name, ordinal);
}

std::string FuzzString(std::uint64_t seed, std::size_t ordinal) {
    Xoshiro256 rng(DeriveSeed(seed ^ kFuzzStreamLabel, ordinal));
    auto length = rng.UniformInt(1, 32);
    std::string out;
    out.reserve(length);
    for (std::uint64_t i = 0; i < length; ++i) {
        out += kAlphabet[rng.UniformInt(0, kAlphabet.size() - 1)];
    }
    return out;
}

FuzzProgress FuzzTextFields(DeviceBackend& device, const SnapshotProvider& snapshots,
                            const TextFuzzOptions& options, std::stop_token stop) {
    FuzzProgress progress;
    std::set<std::string> done;
    std::map<std::string, int> attempts;

    std::optional<UiSnapshot> carried;
    for (;;) {
        if (stop.stop_requested()) {
            progress.cancelled = true;
            break;
        }
        UiSnapshot snap = carried ? std::move(*carried) : snapshots();
        carried.reset();
        std::vector<UiElement> fields = TextFields(snap);

        auto target = std::find_if(fields.begin(), fields.end(), [&](const UiElement& f) {
            return !done.contains(FieldKey(f, fields));
        });
        if (target != fields.end()) {
            std::string key = FieldKey(*target, fields);
            const Bounds& b = target->bounds;
            device.Tap((b.left + b.right) / 2, (b.top + b.bottom) / 2);

            std::vector<UiElement> refreshed = TextFields(snapshots());
            auto confirmed = FindByKey(refreshed, key);
            if (confirmed && confirmed->focused) {
                if (stop.stop_requested()) {
                    progress.cancelled = true;
                    break;
                }
                std::string text = FuzzString(options.seed, progress.typed.size());
                device.InputText(text);
                done.insert(key);
                progress.typed.emplace_back(key, std::move(text));
            } else if (++attempts[key] >= options.focus_attempts) {
                done.insert(key);
                ++progress.skipped;
            }
            continue;
        }

        // Everything visible is done; look further down.
        if (progress.scrolls >= options.max_scrolls) break;
        device.ScrollDown();
        ++progress.scrolls;
        UiSnapshot after = snapshots();
        if (after.elements == snap.elements) break;
        carried = std::move(after);
    }
    return progress;
}

}  // namespace ctxmonkey
