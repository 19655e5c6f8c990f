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

#include "ctxmonkey/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/files.h"
#include "ctxmonkey/strings.h"

namespace ctxmonkey {

namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kKnownKeys[] = {
        "sdk.adb",
        "sdk.aapt",
        "sdk.serial",
        "console.host",
        "console.port",
        "console.auth_token_path",
        "generator.seed",
        "generator.min_interval",
        "generator.max_interval",
        "generator.duration",
        "generator.kinds",
        "executor.text_fuzz",
        "executor.text_seed",
        "executor.fatal_stop",
        "executor.per_activity_duration",
        "executor.max_scrolls",
        "executor.activities",
        "analysis.window_before",
        "analysis.window_after",
        "output.dir",
};

std::string EnvName(std::string_view key) {
    std::string name = "CTXMONKEY_";
    for (char c : key) {
        name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return name;
}

template <typename T>
T ParseNumber(const std::string& key, std::string_view text, T min_value = 0) {
    text = Trim(text);
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError(key, fmt::format("'{}' is not a valid number", text));
    }
    if (value < min_value) throw ConfigError(key, fmt::format("must be at least {}", min_value));
    return value;
}

bool ParseBool(const std::string& key, std::string_view text) {
    std::string v(Trim(text));
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw ConfigError(key, fmt::format("'{}' is not a boolean", text));
}

std::vector<std::string> ParseList(std::string_view text) {
    std::vector<std::string> out;
    for (std::string_view item : Split(text, ',')) {
        item = Trim(item);
        if (!item.empty()) out.emplace_back(item);
    }
    return out;
}

}  // namespace

std::optional<std::string> ProcessEnv(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
}

ToolConfig ParseConfig(std::string_view text, const EnvLookup& env) {
    ToolConfig config;
    std::map<std::string, std::string> values;

    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("file", fmt::format("line {}: {}", e.line(), e.message()));
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            config.warnings.push_back(fmt::format("key '{}' outside any section ignored", section));
            continue;
        }
        for (const auto& [key, value] : body) {
            std::string full = section + "." + key;
            if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), full) ==
                std::end(kKnownKeys)) {
                config.warnings.push_back(fmt::format("unknown key '{}' ignored", full));
                continue;
            }
            values[full] = value.data();
        }
    }
    for (std::string_view key : kKnownKeys) {
        if (auto v = env(EnvName(key))) values[std::string(key)] = *v;
    }

    auto get = [&](const char* key) -> std::optional<std::string> {
        auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        return it->second;
    };

    if (auto v = get("sdk.adb")) config.sdk.adb = Trim(*v);
    if (auto v = get("sdk.aapt")) config.sdk.aapt = Trim(*v);
    if (auto v = get("sdk.serial")) config.sdk.serial = Trim(*v);

    if (auto v = get("console.host")) config.console.host = Trim(*v);
    if (auto v = get("console.port")) {
        auto port = ParseNumber<std::uint32_t>("console.port", *v, 1);
        if (port > std::numeric_limits<std::uint16_t>::max()) {
            throw ConfigError("console.port", "must be at most 65535");
        }
        config.console.port = static_cast<std::uint16_t>(port);
    }
    if (auto v = get("console.auth_token_path")) config.console.auth_token_path = Trim(*v);

    auto seed = get("generator.seed");
    if (!seed) throw ConfigError("generator.seed", "required key is missing");
    config.generator.seed = ParseNumber<std::uint64_t>("generator.seed", *seed);
    if (auto v = get("generator.min_interval")) {
        config.generator.min_interval_secs =
                ParseNumber<std::uint32_t>("generator.min_interval", *v, 1);
    }
    if (auto v = get("generator.max_interval")) {
        config.generator.max_interval_secs =
                ParseNumber<std::uint32_t>("generator.max_interval", *v, 1);
    }
    if (auto v = get("generator.duration")) {
        config.generator.duration_secs = ParseNumber<std::uint32_t>("generator.duration", *v, 1);
    }
    if (auto v = get("generator.kinds")) {
        EventKindSet kinds;
        for (const std::string& name : ParseList(*v)) {
            auto kind = ParseKind(name);
            if (!kind) {
                throw ConfigError("generator.kinds", fmt::format("unknown event kind '{}'", name));
            }
            kinds.insert(*kind);
        }
        if (kinds.empty()) throw ConfigError("generator.kinds", "no event kinds listed");
        config.generator.enabled_kinds = std::move(kinds);
    }
    const GeneratorConfig& g = config.generator;
    if (g.min_interval_secs > g.max_interval_secs) {
        throw ConfigError("generator.min_interval",
                          fmt::format("min_interval {} exceeds max_interval {}",
                                      g.min_interval_secs, g.max_interval_secs));
    }
    if (g.max_interval_secs > g.duration_secs) {
        throw ConfigError("generator.max_interval",
                          fmt::format("max_interval {} exceeds duration {}", g.max_interval_secs,
                                      g.duration_secs));
    }

    if (auto v = get("executor.text_fuzz")) {
        config.executor.text_fuzz = ParseBool("executor.text_fuzz", *v);
    }
    if (auto v = get("executor.text_seed")) {
        config.executor.text_seed = ParseNumber<std::uint64_t>("executor.text_seed", *v);
    }
    if (auto v = get("executor.fatal_stop")) {
        config.executor.fatal_stop = ParseBool("executor.fatal_stop", *v);
    }
    if (auto v = get("executor.per_activity_duration")) {
        config.executor.per_activity_duration_secs =
                ParseNumber<std::uint32_t>("executor.per_activity_duration", *v, 1);
    }
    if (auto v = get("executor.max_scrolls")) {
        config.executor.max_scrolls = ParseNumber<std::size_t>("executor.max_scrolls", *v);
    }
    if (auto v = get("executor.activities")) config.executor.activities = ParseList(*v);

    if (auto v = get("analysis.window_before")) {
        config.analysis.window_before_secs = ParseNumber<std::uint32_t>("analysis.window_before", *v);
    }
    if (auto v = get("analysis.window_after")) {
        config.analysis.window_after_secs = ParseNumber<std::uint32_t>("analysis.window_after", *v);
    }

    if (auto v = get("output.dir")) {
        std::string dir(Trim(*v));
        if (dir.empty()) throw ConfigError("output.dir", "must not be empty");
        config.output_dir = dir;
    }
    return config;
}

ToolConfig LoadConfig(const std::filesystem::path& path, const EnvLookup& env) {
    std::string text;
    try {
        text = ReadTextFile(path);
    } catch (const Error& e) {
        throw ConfigError("file", e.what());
    }
    return ParseConfig(text, env);
}

void ValidateForRealBackend(const ToolConfig& config) {
    if (config.sdk.adb.empty()) throw ConfigError("sdk.adb", "path must not be empty");
    if (config.sdk.serial.empty()) throw ConfigError("sdk.serial", "must not be empty");
    if (config.console.host.empty()) throw ConfigError("console.host", "must not be empty");
}

}  // namespace ctxmonkey
