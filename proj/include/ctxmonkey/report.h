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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctxmonkey/analysis.h"

namespace ctxmonkey {

// Unset members show everything.
struct ReportFilter {
    std::optional<std::set<std::string>> activities;
    std::optional<std::set<char>> severities;
};

// Issues that pass |filter|, in analysis order.
std::vector<Issue> ApplyFilter(const Analysis& analysis, const ReportFilter& filter);

// Terminal report: one section per activity, one subsection per severity, adjacent
// events indented under each issue.
std::string RenderText(const Analysis& analysis, const ReportFilter& filter);

// {"package", "issues": [...], "summary": {...}}; the issues use the analysis.json
// layout, so ParseAnalysisJson reads the output back.
std::string RenderJson(const Analysis& analysis, const ReportFilter& filter);

// Self-contained HTML page with a collapsible section per activity.
std::string RenderHtml(const Analysis& analysis, const ReportFilter& filter);

}  // namespace ctxmonkey
