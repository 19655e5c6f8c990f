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

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ctxmonkey/scenario.h"

namespace ctxmonkey {

struct AppMetadata {
    std::string package_id;
    std::string version_name;
    std::set<std::string> permissions;
    // Launchable activity first, then manifest order, no duplicates.
    std::vector<std::string> activities;

    bool operator==(const AppMetadata&) const = default;
};

// Permissions whose presence makes the radio-level kinds applicable.
const std::set<std::string>& NetworkPermissions();

/**
 * Parses the concatenated output of `aapt dump badging` and
 * `aapt dump xmltree <apk> AndroidManifest.xml`. Activity names that start with '.'
 * or carry no package are resolved against the package id.
 *
 * Throws ParseError when no `package:` line is present.
 */
AppMetadata ParseBadging(std::string_view text);

// UserRotation and KeyPress always; the radio kinds only with a network permission.
EventKindSet ApplicableEventKinds(const AppMetadata& metadata);

}  // namespace ctxmonkey
