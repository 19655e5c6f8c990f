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

#include "ctxmonkey/logparse.h"

#include <algorithm>
#include <charconv>
#include <cctype>

#include <fmt/format.h>

#include "ctxmonkey/strings.h"

namespace ctxmonkey {

namespace {

constexpr std::string_view kLevels = "VDIWEF";
constexpr std::size_t kStampWidth = 18;  // "MM-DD HH:MM:SS.mmm"

bool IsDigit(char c) {
    return c >= '0' && c <= '9';
}

bool LooksLikeDatePrefix(std::string_view line) {
    return line.size() >= 5 && IsDigit(line[0]) && IsDigit(line[1]) && line[2] == '-' &&
           IsDigit(line[3]) && IsDigit(line[4]);
}

std::size_t SkipSpaces(std::string_view s, std::size_t pos) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
    return pos;
}

// Reads a decimal integer at |pos|; returns the position after it or npos.
std::size_t ReadInt(std::string_view s, std::size_t pos, int& out) {
    std::size_t end = pos;
    while (end < s.size() && IsDigit(s[end])) ++end;
    if (end == pos) return std::string_view::npos;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + end, out);
    if (ec != std::errc()) return std::string_view::npos;
    return end;
}

std::uint32_t ParseUnsigned(std::string_view field, const char* what) {
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(fmt::format("{} is not a non-negative integer: '{}'", what, field));
    }
    return value;
}

}  // namespace

LogcatParse ParseLogcatLine(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty() || line.starts_with("--------- ")) return SkipLine{};
    if (!LooksLikeDatePrefix(line)) return SkipLine{};

    auto error = [](std::string reason, std::size_t column) {
        return ParseError(std::move(reason), 0, column + 1);
    };

    if (line.size() < kStampWidth) return error("truncated timestamp", line.size());
    auto stamp = LogTime::Parse(line.substr(0, kStampWidth));
    if (!stamp) return error("malformed timestamp", 0);

    LogcatEntry entry;
    entry.timestamp = *stamp;
    std::size_t pos = kStampWidth;
    if (pos >= line.size() || line[pos] != ' ') return error("expected space after timestamp", pos);

    pos = SkipSpaces(line, pos);
    std::size_t next = ReadInt(line, pos, entry.pid);
    if (next == std::string_view::npos) return error("expected pid", pos);
    pos = next;
    if (pos >= line.size() || line[pos] != ' ') return error("expected space after pid", pos);

    pos = SkipSpaces(line, pos);
    next = ReadInt(line, pos, entry.tid);
    if (next == std::string_view::npos) return error("expected tid", pos);
    pos = next;
    if (pos >= line.size() || line[pos] != ' ') return error("expected space after tid", pos);

    pos = SkipSpaces(line, pos);
    if (pos >= line.size() || kLevels.find(line[pos]) == std::string_view::npos) {
        return error("expected level V/D/I/W/E/F", pos);
    }
    entry.level = line[pos++];
    if (pos >= line.size() || line[pos] != ' ') return error("expected space after level", pos);
    ++pos;

    std::string_view rest = line.substr(pos);
    std::size_t sep = rest.find(": ");
    std::string_view tag;
    std::string_view message;
    if (sep != std::string_view::npos) {
        tag = rest.substr(0, sep);
        message = rest.substr(sep + 2);
    } else if (!rest.empty() && rest.back() == ':') {
        tag = rest.substr(0, rest.size() - 1);
    } else {
        return error("expected 'tag: message'", pos);
    }
    tag = Trim(tag);
    if (tag.empty()) return error("empty tag", pos);
    entry.tag = std::string(tag);
    entry.message = std::string(message);
    return entry;
}

std::string FormatLogcatLine(const LogcatEntry& entry) {
    return fmt::format("{} {:5} {:5} {} {:<8}: {}", entry.timestamp.FormatMillis(), entry.pid,
                       entry.tid, entry.level, entry.tag, entry.message);
}

std::string FormatExecutorLine(const InjectionRecord& record) {
    const ContextualEvent& e = record.event;
    return fmt::format("{} {} {} {} {}", record.timestamp.FormatSeconds(), KindName(e.kind),
                       e.index, e.interval_secs, e.value);
}

std::string WriteExecutorLog(std::span<const InjectionRecord> records) {
    std::string out;
    for (const auto& r : records) {
        out += FormatExecutorLine(r);
        out += '\n';
    }
    return out;
}

InjectionRecord ParseExecutorLine(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> tokens = Split(line, ' ');
    if (tokens.size() != 6) {
        throw ParseError(fmt::format("expected 6 space-separated fields, found {}", tokens.size()));
    }
    std::string stamp = std::string(tokens[0]) + " " + std::string(tokens[1]);
    auto timestamp = LogTime::Parse(stamp);
    if (!timestamp || stamp.size() != 14) {
        throw ParseError(fmt::format("malformed timestamp '{}'", stamp), 0, 1);
    }
    auto kind = ParseKind(tokens[2]);
    if (!kind) throw ParseError(fmt::format("unknown event kind '{}'", tokens[2]));
    InjectionRecord record;
    record.timestamp = *timestamp;
    record.event.kind = *kind;
    record.event.index = ParseUnsigned(tokens[3], "index");
    record.event.interval_secs = ParseUnsigned(tokens[4], "interval");
    if (record.event.interval_secs == 0) throw ParseError("interval must be positive");
    auto value = CanonicalValue(*kind, tokens[5]);
    if (!value) {
        throw ParseError(fmt::format("'{}' is not a {} value", tokens[5], KindName(*kind)));
    }
    record.event.value = *value;
    return record;
}

std::vector<InjectionRecord> ParseExecutorLog(std::string_view text) {
    std::vector<InjectionRecord> records;
    std::size_t line_no = 0;
    for (std::string_view line : SplitLines(text)) {
        ++line_no;
        if (Trim(line).empty()) continue;
        try {
            records.push_back(ParseExecutorLine(line));
        } catch (const ParseError& e) {
            throw ParseError(e.reason(), line_no, e.column());
        }
    }
    return records;
}

std::vector<LogcatEntry> ParseLogcatLog(std::string_view text, std::size_t* errors) {
    std::vector<LogcatEntry> entries;
    std::size_t bad = 0;
    for (std::string_view line : SplitLines(text)) {
        LogcatParse parsed = ParseLogcatLine(line);
        if (auto* e = std::get_if<LogcatEntry>(&parsed)) {
            entries.push_back(std::move(*e));
        } else if (std::holds_alternative<ParseError>(parsed)) {
            ++bad;
        }
    }
    if (errors) *errors = bad;
    return entries;
}

std::vector<TimelineItem> MergeTimeline(std::span<const LogcatEntry> logcat,
                                        std::span<const InjectionRecord> injected) {
    std::vector<TimelineItem> out;
    out.reserve(logcat.size() + injected.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < injected.size() || j < logcat.size()) {
        // Injected wins ties.
        bool take_injected =
                j == logcat.size() ||
                (i < injected.size() && injected[i].timestamp <= logcat[j].timestamp);
        if (take_injected) {
            out.push_back(TimelineItem{.timestamp = injected[i].timestamp,
                                       .payload = injected[i],
                                       .sequence = i});
            ++i;
        } else {
            out.push_back(TimelineItem{.timestamp = logcat[j].timestamp,
                                       .payload = logcat[j],
                                       .sequence = j});
            ++j;
        }
    }
    return out;
}

// AppLogFilter

AppLogFilter::AppLogFilter(std::string package_id, std::set<int> known_pids)
    : package_id_(std::move(package_id)), pids_(std::move(known_pids)) {}

bool AppLogFilter::Matches(const LogcatEntry& entry) const {
    if (pids_.contains(entry.pid)) return true;
    if (package_id_.empty()) return false;
    return entry.tag == package_id_ || entry.message.find(package_id_) != std::string::npos;
}

bool AppLogFilter::Observe(const LogcatEntry& entry) {
    std::string_view msg = entry.message;

    // Start proc 4321:com.example.app/u0a55 for activity ...
    if (msg.starts_with("Start proc ")) {
        std::string_view rest = msg.substr(11);
        auto colon = rest.find(':');
        if (colon != std::string_view::npos) {
            std::string_view proc = rest.substr(colon + 1);
            auto end = proc.find_first_of("/ ");
            if (proc.substr(0, end) == package_id_) {
                int pid = 0;
                auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + colon, pid);
                if (ec == std::errc() && ptr == rest.data() + colon) pids_.insert(pid);
            }
        }
        return false;
    }

    // Process: com.example.app, PID: 4321
    if (msg.starts_with("Process: ")) {
        std::string_view rest = msg.substr(9);
        auto comma = rest.find(", PID: ");
        if (comma != std::string_view::npos && rest.substr(0, comma) == package_id_) {
            int pid = 0;
            std::string_view num = rest.substr(comma + 7);
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), pid);
            if (ec == std::errc()) {
                pids_.insert(pid);
                if (pending_headers_.erase(pid) > 0) return true;
            }
        }
        return false;
    }

    bool header = msg.starts_with("FATAL EXCEPTION");
    if (entry.level != 'F' && !header) return false;
    if (Matches(entry)) return true;
    if (header) pending_headers_.insert(entry.pid);
    return false;
}

}  // namespace ctxmonkey
