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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxmonkey/scenario.h"

namespace ctxmonkey {

/**
 * Tool configuration, read from an INI file:
 *
 *     [generator]
 *     seed = 42
 *
 * Every key can be overridden from the environment as CTXMONKEY_<SECTION>_<KEY>,
 * e.g. CTXMONKEY_GENERATOR_SEED. generator.seed is the only required key.
 */
struct ToolConfig {
    struct Sdk {
        std::string adb = "adb";
        std::string aapt = "aapt";
        std::string serial = "emulator-5554";
    } sdk;

    struct Console {
        std::string host = "127.0.0.1";
        std::uint16_t port = 5554;
        std::string auth_token_path;  // empty: ~/.emulator_console_auth_token
    } console;

    GeneratorConfig generator;

    struct Executor {
        bool text_fuzz = true;
        std::optional<std::uint64_t> text_seed;  // generator seed when unset
        bool fatal_stop = true;
        std::optional<std::uint32_t> per_activity_duration_secs;
        std::size_t max_scrolls = 20;
        std::vector<std::string> activities;  // non-empty selects guided mode
    } executor;

    struct Analysis {
        std::uint32_t window_before_secs = 10;
        std::uint32_t window_after_secs = 2;
    } analysis;

    std::filesystem::path output_dir = "ctxmonkey-out";

    // Unknown keys and other non-fatal findings.
    std::vector<std::string> warnings;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string& name)>;

// Reads the process environment.
std::optional<std::string> ProcessEnv(const std::string& name);

// Throws ConfigError naming the offending key ("section.key").
ToolConfig ParseConfig(std::string_view text, const EnvLookup& env = ProcessEnv);
ToolConfig LoadConfig(const std::filesystem::path& path, const EnvLookup& env = ProcessEnv);

// Checks what only a real device needs. Throws ConfigError.
void ValidateForRealBackend(const ToolConfig& config);

}  // namespace ctxmonkey
