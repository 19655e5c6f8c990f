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

#include "ctxmonkey/manifest.h"

#include <algorithm>
#include <optional>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/strings.h"

namespace ctxmonkey {

namespace {

// Value of |key|='...' inside a badging line, e.g. name='com.example'.
std::optional<std::string> QuotedAttribute(std::string_view line, std::string_view key) {
    std::string needle = std::string(key) + "='";
    std::size_t pos = 0;
    while ((pos = line.find(needle, pos)) != std::string_view::npos) {
        // Must start a token, so versionName= does not match name=.
        if (pos == 0 || line[pos - 1] == ' ') {
            std::size_t start = pos + needle.size();
            std::size_t end = line.find('\'', start);
            if (end == std::string_view::npos) return std::nullopt;
            return std::string(line.substr(start, end - start));
        }
        pos += needle.size();
    }
    return std::nullopt;
}

std::size_t Indent(std::string_view line) {
    std::size_t n = 0;
    while (n < line.size() && line[n] == ' ') ++n;
    return n;
}

// xmltree attribute line: A: android:name(0x01010003)="com.example.Main" (Raw: "...")
std::optional<std::string> XmlTreeName(std::string_view body) {
    constexpr std::string_view kPrefix = "A: android:name";
    if (body.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
    std::size_t quote = body.find("=\"");
    if (quote == std::string_view::npos) return std::nullopt;
    std::size_t start = quote + 2;
    std::size_t end = body.find('"', start);
    if (end == std::string_view::npos) return std::nullopt;
    return std::string(body.substr(start, end - start));
}

std::string ResolveActivity(const std::string& package, const std::string& name) {
    if (name.empty()) return name;
    if (name.front() == '.') return package + name;
    if (name.find('.') == std::string::npos) return package + "." + name;
    return name;
}

void AddUnique(std::vector<std::string>& list, std::string value) {
    if (value.empty()) return;
    if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(std::move(value));
}

}  // namespace

const std::set<std::string>& NetworkPermissions() {
    static const std::set<std::string> kPermissions = {
            "android.permission.INTERNET",
            "android.permission.ACCESS_NETWORK_STATE",
            "android.permission.ACCESS_WIFI_STATE",
            "android.permission.CHANGE_NETWORK_STATE",
    };
    return kPermissions;
}

AppMetadata ParseBadging(std::string_view text) {
    AppMetadata meta;
    bool have_package = false;
    std::optional<std::string> launchable;
    std::vector<std::string> manifest_activities;

    // Indentation of the currently open `E: activity` element, if any.
    // Indent of the open activity element in the xmltree dump, npos outside one.
    std::size_t activity_indent = std::string_view::npos;
    bool activity_named = false;

    for (std::string_view raw : SplitLines(text)) {
        std::size_t indent = Indent(raw);
        std::string_view line = raw.substr(indent);

        if (indent <= activity_indent) activity_indent = std::string_view::npos;

        if (line.starts_with("package:")) {
            if (auto name = QuotedAttribute(line, "name")) {
                if (!have_package) {
                    meta.package_id = *name;
                    meta.version_name = QuotedAttribute(line, "versionName").value_or("");
                    have_package = true;
                }
            }
        } else if (line.starts_with("uses-permission:") ||
                   line.starts_with("uses-permission-sdk-23:")) {
            if (auto name = QuotedAttribute(line, "name")) meta.permissions.insert(*name);
        } else if (line.starts_with("launchable-activity:")) {
            if (!launchable) launchable = QuotedAttribute(line, "name");
        } else if (line.starts_with("E: activity ") || line == "E: activity") {
            activity_indent = indent;
            activity_named = false;
        } else if (activity_indent != std::string_view::npos && !activity_named &&
                   indent > activity_indent) {
            if (auto name = XmlTreeName(line)) {
                manifest_activities.push_back(*name);
                activity_named = true;
            }
        }
    }
    if (!have_package || meta.package_id.empty()) {
        throw ParseError("no package line found in packaging-tool output");
    }
    if (launchable) AddUnique(meta.activities, ResolveActivity(meta.package_id, *launchable));
    for (const auto& name : manifest_activities) {
        AddUnique(meta.activities, ResolveActivity(meta.package_id, name));
    }
    return meta;
}

EventKindSet ApplicableEventKinds(const AppMetadata& metadata) {
    EventKindSet kinds = {EventKind::UserRotation, EventKind::KeyPress};
    const auto& network = NetworkPermissions();
    bool has_network = std::any_of(metadata.permissions.begin(), metadata.permissions.end(),
                                   [&](const std::string& p) { return network.contains(p); });
    if (has_network) {
        kinds.insert({EventKind::NetworkStatus, EventKind::NetworkDelay, EventKind::GsmProfile,
                      EventKind::AirplaneMode});
    }
    return kinds;
}

}  // namespace ctxmonkey
