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

#include <gtest/gtest.h>

#include <map>

#include "ctxmonkey/errors.h"
#include "test_support.h"

namespace ctxmonkey {
namespace {

EnvLookup Env(std::map<std::string, std::string> vars = {}) {
    return [vars = std::move(vars)](const std::string& name) -> std::optional<std::string> {
        auto it = vars.find(name);
        if (it == vars.end()) return std::nullopt;
        return it->second;
    };
}

std::string KeyOf(const std::string& text, const EnvLookup& env = Env()) {
    try {
        ParseConfig(text, env);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "";
}

TEST(ConfigTest, MinimalFileTakesDefaults) {
    ToolConfig c = ParseConfig("[generator]\nseed = 9\n", Env());
    EXPECT_EQ(c.generator.seed, 9u);
    EXPECT_EQ(c.generator.min_interval_secs, 5u);
    EXPECT_EQ(c.generator.max_interval_secs, 12u);
    EXPECT_EQ(c.generator.duration_secs, 60u);
    EXPECT_EQ(c.generator.enabled_kinds, AllEventKinds());
    EXPECT_EQ(c.console.port, 5554);
    EXPECT_TRUE(c.executor.text_fuzz);
    EXPECT_TRUE(c.executor.fatal_stop);
    EXPECT_FALSE(c.executor.text_seed.has_value());
    EXPECT_EQ(c.analysis.window_before_secs, 10u);
    EXPECT_EQ(c.analysis.window_after_secs, 2u);
    EXPECT_TRUE(c.warnings.empty());
}

TEST(ConfigTest, SampleFixtureLoads) {
    ToolConfig c = LoadConfig(testing::Fixture("config.ini"), Env());
    EXPECT_EQ(c.generator.seed, 42u);
    EXPECT_EQ(c.output_dir, "ctxmonkey-out");
    EXPECT_TRUE(c.warnings.empty());
    EXPECT_NO_THROW(ValidateForRealBackend(c));
}

TEST(ConfigTest, IntervalOrderingIsChecked) {
    EXPECT_EQ(KeyOf("[generator]\nseed=1\nmin_interval=12\nmax_interval=5\n"),
              "generator.min_interval");
    EXPECT_EQ(KeyOf("[generator]\nseed=1\nmax_interval=90\n"), "generator.max_interval");
    EXPECT_EQ(KeyOf("[generator]\nseed=1\nmin_interval=0\n"), "generator.min_interval");
}

TEST(ConfigTest, MissingSeedIsAnError) {
    EXPECT_EQ(KeyOf("[executor]\ntext_fuzz=false\n"), "generator.seed");
    EXPECT_EQ(KeyOf(""), "generator.seed");
}

TEST(ConfigTest, EnvironmentOverridesFile) {
    ToolConfig c = ParseConfig("[generator]\nseed = 9\n[console]\nport = 5556\n",
                               Env({{"CTXMONKEY_GENERATOR_SEED", "77"},
                                    {"CTXMONKEY_EXECUTOR_TEXT_FUZZ", "off"}}));
    EXPECT_EQ(c.generator.seed, 77u);
    EXPECT_FALSE(c.executor.text_fuzz);
    EXPECT_EQ(c.console.port, 5556);
    // The environment alone can supply the required key.
    EXPECT_EQ(ParseConfig("", Env({{"CTXMONKEY_GENERATOR_SEED", "3"}})).generator.seed, 3u);
}

TEST(ConfigTest, UnknownKeysWarn) {
    ToolConfig c = ParseConfig("[generator]\nseed = 1\nsed = 2\n[extra]\nx = 1\n", Env());
    ASSERT_EQ(c.warnings.size(), 2u);
    EXPECT_NE(c.warnings[0].find("generator.sed"), std::string::npos);
    EXPECT_NE(c.warnings[1].find("extra.x"), std::string::npos);
}

TEST(ConfigTest, BadValuesNameTheirKey) {
    EXPECT_EQ(KeyOf("[generator]\nseed = abc\n"), "generator.seed");
    EXPECT_EQ(KeyOf("[generator]\nseed = 1\n[console]\nport = 70000\n"), "console.port");
    EXPECT_EQ(KeyOf("[generator]\nseed = 1\n[executor]\ntext_fuzz = maybe\n"), "executor.text_fuzz");
    EXPECT_EQ(KeyOf("[generator]\nseed = 1\nkinds = NetworkStatus, Teleport\n"), "generator.kinds");
    EXPECT_EQ(KeyOf("[generator]\nseed = 1\n[output]\ndir =\n"), "output.dir");
    EXPECT_EQ(KeyOf("[generator\nseed = 1\n"), "file");
}

TEST(ConfigTest, ListsAndKinds) {
    ToolConfig c = ParseConfig(
            "[generator]\nseed = 1\nkinds = UserRotation, KeyPress\n"
            "[executor]\nactivities = .Main, com.x.Other\nper_activity_duration = 30\n",
            Env());
    EXPECT_EQ(c.generator.enabled_kinds,
              (EventKindSet{EventKind::UserRotation, EventKind::KeyPress}));
    EXPECT_EQ(c.executor.activities, (std::vector<std::string>{".Main", "com.x.Other"}));
    EXPECT_EQ(c.executor.per_activity_duration_secs, 30u);
}

TEST(ConfigTest, MissingFileIsAConfigError) {
    EXPECT_THROW(LoadConfig("/nonexistent/ctxmonkey.ini", Env()), ConfigError);
}

}  // namespace
}  // namespace ctxmonkey
