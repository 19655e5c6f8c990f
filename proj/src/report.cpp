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

#include "ctxmonkey/report.h"

#include <fmt/format.h>
#include <json.hpp>

#include "ctxmonkey/logparse.h"

namespace ctxmonkey {

namespace {

std::string_view SeverityName(char severity) {
    switch (severity) {
        case 'W':
            return "Warning";
        case 'E':
            return "Error";
        case 'F':
            return "Fatal";
    }
    return "Unknown";
}

// Keeps one issue per text line.
std::string OneLine(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '\n') {
            out += "\\n";
        } else if (c == '\r') {
            out += "\\r";
        } else {
            out += c;
        }
    }
    return out;
}

std::string HtmlEscape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            case '\'':
                out += "&#39;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

std::string CountsLine(const Summary& s) {
    return fmt::format("issues: {} (W {}, E {}, F {})", s.total, s.by_severity.at('W'),
                       s.by_severity.at('E'), s.by_severity.at('F'));
}

constexpr std::string_view kStyle = R"(body { font-family: sans-serif; margin: 2em; }
summary { cursor: pointer; font-weight: bold; }
.badge { display: inline-block; padding: 0 .5em; margin-left: .3em; border-radius: 3px; color: #fff; }
.sev-W { background: #b58900; }
.sev-E { background: #cb4b16; }
.sev-F { background: #dc322f; }
li.issue { background: none; margin: .4em 0; font-family: monospace; }
li.issue .sev { font-weight: bold; }
ul.adjacent { color: #555; }
)";

}  // namespace

std::vector<Issue> ApplyFilter(const Analysis& analysis, const ReportFilter& filter) {
    std::vector<Issue> out;
    for (const auto& issue : analysis.issues) {
        if (filter.activities && !filter.activities->contains(issue.activity)) continue;
        if (filter.severities && !filter.severities->contains(issue.severity)) continue;
        out.push_back(issue);
    }
    return out;
}

std::string RenderText(const Analysis& analysis, const ReportFilter& filter) {
    std::vector<Issue> issues = ApplyFilter(analysis, filter);
    std::string out = fmt::format("ctxmonkey report: {}\n", OneLine(analysis.package_id));
    out += fmt::format("window: {} s before, {} s after\n", analysis.window_before_secs,
                       analysis.window_after_secs);
    out += CountsLine(Summarize(issues)) + "\n";
    if (issues.empty()) {
        out += "\nno issues\n";
        return out;
    }
    for (const auto& [activity, groups] : GroupByActivity(issues)) {
        out += fmt::format("\n== {} ==\n", OneLine(activity));
        for (char sev : kSeverities) {
            auto it = groups.find(sev);
            if (it == groups.end()) continue;
            out += fmt::format("  -- {} ({}) --\n", SeverityName(sev), it->second.size());
            for (const auto& issue : it->second) {
                out += fmt::format("  [{}] {} {}/{} {}: {}\n", issue.severity,
                                   issue.timestamp.FormatMillis(), issue.pid, issue.tid,
                                   OneLine(issue.tag), OneLine(issue.message));
                for (const auto& r : issue.adjacent_events) {
                    out += fmt::format("        {}\n", FormatExecutorLine(r));
                }
            }
        }
    }
    return out;
}

std::string RenderJson(const Analysis& analysis, const ReportFilter& filter) {
    Analysis filtered = analysis;
    filtered.issues = ApplyFilter(analysis, filter);
    return WriteAnalysisJson(filtered);
}

std::string RenderHtml(const Analysis& analysis, const ReportFilter& filter) {
    std::vector<Issue> issues = ApplyFilter(analysis, filter);
    Summary total = Summarize(issues);
    std::string title = fmt::format("ctxmonkey report: {}", HtmlEscape(analysis.package_id));

    std::string out = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    out += fmt::format("<title>{}</title>\n<style>\n{}</style>\n</head>\n<body>\n", title, kStyle);
    out += fmt::format("<h1>{}</h1>\n", title);
    out += fmt::format("<p class=\"window\">window: {} s before, {} s after</p>\n",
                       analysis.window_before_secs, analysis.window_after_secs);
    out += fmt::format("<p class=\"totals\" data-total=\"{}\">{}</p>\n", total.total,
                       HtmlEscape(CountsLine(total)));
    if (issues.empty()) {
        out += "<p class=\"empty\">no issues</p>\n</body>\n</html>\n";
        return out;
    }
    for (const auto& [activity, groups] : GroupByActivity(issues)) {
        out += fmt::format("<details class=\"activity\" open>\n<summary>{}", HtmlEscape(activity));
        for (char sev : kSeverities) {
            auto it = groups.find(sev);
            if (it == groups.end()) continue;
            out += fmt::format("<span class=\"badge sev-{}\" data-count=\"{}\">{} {}</span>", sev,
                               it->second.size(), sev, it->second.size());
        }
        out += "</summary>\n";
        for (char sev : kSeverities) {
            auto it = groups.find(sev);
            if (it == groups.end()) continue;
            out += fmt::format("<h3>{}</h3>\n<ul class=\"issues\">\n", SeverityName(sev));
            for (const auto& issue : it->second) {
                out += fmt::format(
                        "<li class=\"issue sev-{}\"><span class=\"sev\">{}</span> {} {}/{} "
                        "{}: {}",
                        sev, sev, issue.timestamp.FormatMillis(), issue.pid, issue.tid,
                        HtmlEscape(issue.tag), HtmlEscape(issue.message));
                if (!issue.adjacent_events.empty()) {
                    out += "\n<ul class=\"adjacent\">\n";
                    for (const auto& r : issue.adjacent_events) {
                        out += fmt::format("<li>{}</li>\n", HtmlEscape(FormatExecutorLine(r)));
                    }
                    out += "</ul>\n";
                }
                out += "</li>\n";
            }
            out += "</ul>\n";
        }
        out += "</details>\n";
    }
    out += "</body>\n</html>\n";
    return out;
}

}  // namespace ctxmonkey
