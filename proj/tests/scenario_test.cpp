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


#include "ctxmonkey/scenario.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/random.h"
#include "test_support.h"

namespace ctxmonkey {
namespace {

// Reference outputs of SplitMix64 (seed 1234567) and Xoshiro256** seeded through it
// (seed 42), computed with an independent implementation of the published algorithms.
TEST(RandomTest, MatchesReferenceVectors) {
    SplitMix64 sm(1234567);
    EXPECT_EQ(sm.Next(), 6457827717110365317ull);
    EXPECT_EQ(sm.Next(), 3203168211198807973ull);
    EXPECT_EQ(sm.Next(), 9817491932198370423ull);

    Xoshiro256 x(42);
    EXPECT_EQ(x.Next(), 1546998764402558742ull);
    EXPECT_EQ(x.Next(), 6990951692964543102ull);
    EXPECT_EQ(x.Next(), 12544586762248559009ull);
}

TEST(RandomTest, UniformIntStaysInRange) {
    Xoshiro256 x(9);
    for (int i = 0; i < 10000; ++i) {
        auto v = x.UniformInt(5, 12);
        ASSERT_GE(v, 5u);
        ASSERT_LE(v, 12u);
    }
    EXPECT_EQ(x.UniformInt(3, 3), 3u);
}

TEST(ScenarioTest, KindNamesRoundTrip) {
    for (EventKind k : kAllEventKinds) {
        EXPECT_EQ(ParseKind(KindName(k)), k);
    }
    EXPECT_FALSE(ParseKind("networkstatus"));
    EXPECT_FALSE(ParseKind(""));
}

TEST(ScenarioTest, VocabulariesAreFixed) {
    EXPECT_EQ(Vocabulary(EventKind::NetworkStatus).size(), 9u);
    EXPECT_EQ(Vocabulary(EventKind::NetworkDelay).size(), 4u);
    EXPECT_EQ(Vocabulary(EventKind::GsmProfile).size(), 7u);
    EXPECT_EQ(Vocabulary(EventKind::UserRotation).size(), 4u);
    EXPECT_EQ(Vocabulary(EventKind::KeyPress).size(), 6u);
    EXPECT_EQ(Vocabulary(EventKind::AirplaneMode).size(), 2u);
    EXPECT_EQ(CanonicalValue(EventKind::NetworkStatus, "lte"), "lte");
    EXPECT_FALSE(CanonicalValue(EventKind::NetworkStatus, "5g"));
    EXPECT_FALSE(CanonicalValue(EventKind::NetworkDelay, "lte"));
}

TEST(ScenarioTest, LegacyRotationSpellingIsCanonicalized) {
    EXPECT_EQ(CanonicalValue(EventKind::UserRotation, "ROTATION_REVERSE_POTRAIT"),
              "ROTATION_REVERSE_PORTRAIT");
    EXPECT_EQ(CanonicalValue(EventKind::UserRotation, "ROTATION_REVERSE_PORTRAIT"),
              "ROTATION_REVERSE_PORTRAIT");
}

TEST(ScenarioTest, GenerateIsDeterministic) {
    GeneratorConfig config{.seed = 42};
    EXPECT_EQ(GenerateScenario(config), GenerateScenario(config));
    GeneratorConfig other{.seed = 43};
    EXPECT_NE(GenerateScenario(config), GenerateScenario(other));
}

TEST(ScenarioTest, KindStreamsAreIndependent) {
    GeneratorConfig all{.seed = 5};
    GeneratorConfig some{.seed = 5, .enabled_kinds = {EventKind::KeyPress}};
    Scenario a = GenerateScenario(all);
    Scenario b = GenerateScenario(some);
    ASSERT_EQ(b.sequences.size(), 1u);
    EXPECT_EQ(a.sequences.at(EventKind::KeyPress), b.sequences.at(EventKind::KeyPress));
}

TEST(ScenarioTest, RejectsInvalidConfig) {
    EXPECT_THROW(GenerateScenario({.min_interval_secs = 12, .max_interval_secs = 5}),
                 InvalidConfig);
    EXPECT_THROW(GenerateScenario({.max_interval_secs = 61, .duration_secs = 60}), InvalidConfig);
    EXPECT_THROW(GenerateScenario({.min_interval_secs = 0}), InvalidConfig);
    EXPECT_THROW(GenerateScenario({.enabled_kinds = {}}), InvalidConfig);
}

TEST(ScenarioTest, MinEqualsMaxEqualsDuration) {
    Scenario s = GenerateScenario(
            {.seed = 1, .min_interval_secs = 7, .max_interval_secs = 7, .duration_secs = 7});
    for (const auto& [kind, events] : s.sequences) {
        ASSERT_EQ(events.size(), 1u);
        EXPECT_EQ(events[0].interval_secs, 7u);
    }
}

// Interval law, checked against an independent re-summation of each sequence.
TEST(ScenarioPropertyTest, IntervalLawOverRandomConfigs) {
    testing::Gen gen(2024);
    for (int round = 0; round < 1000; ++round) {
        GeneratorConfig c;
        c.seed = gen.Int(0, ~0ull);
        c.duration_secs = static_cast<std::uint32_t>(gen.Int(1, 600));
        c.max_interval_secs = static_cast<std::uint32_t>(gen.Int(1, c.duration_secs));
        c.min_interval_secs = static_cast<std::uint32_t>(gen.Int(1, c.max_interval_secs));
        c.enabled_kinds.clear();
        while (c.enabled_kinds.empty()) {
            for (EventKind k : kAllEventKinds) {
                if (gen.Bool()) c.enabled_kinds.insert(k);
            }
        }
        Scenario s = GenerateScenario(c);
        ASSERT_EQ(s.duration_secs, c.duration_secs);
        ASSERT_EQ(s.sequences.size(), c.enabled_kinds.size());
        for (const auto& [kind, events] : s.sequences) {
            ASSERT_TRUE(c.enabled_kinds.contains(kind));
            ASSERT_FALSE(events.empty());
            std::uint64_t sum = 0;
            for (std::size_t i = 0; i < events.size(); ++i) {
                const auto& e = events[i];
                ASSERT_EQ(e.kind, kind);
                ASSERT_EQ(e.index, i);
                ASSERT_GE(e.interval_secs, 1u);
                if (i + 1 < events.size()) {
                    ASSERT_GE(e.interval_secs, c.min_interval_secs);
                    ASSERT_LE(e.interval_secs, c.max_interval_secs);
                } else {
                    ASSERT_LE(e.interval_secs, c.max_interval_secs);
                }
                ASSERT_TRUE(CanonicalValue(kind, e.value)) << e.value;
                sum += e.interval_secs;
            }
            ASSERT_EQ(sum, c.duration_secs);
        }
    }
}

TEST(ScenarioCsvTest, WritesDocumentedLayout) {
    Scenario s{.duration_secs = 13,
               .sequences = {{EventKind::NetworkStatus,
                              {{EventKind::NetworkStatus, 0, 8, "lte"},
                               {EventKind::NetworkStatus, 1, 5, "gsm"}}},
                             {EventKind::UserRotation,
                              {{EventKind::UserRotation, 0, 13, "ROTATION_REVERSE_PORTRAIT"}}}}};
    EXPECT_EQ(WriteScenarioCsv(s),
              "duration,13\n"
              "NetworkStatus,0,8,lte\n"
              "NetworkStatus,1,5,gsm\n"
              "UserRotation,0,13,ROTATION_REVERSE_PORTRAIT\n");
}

TEST(ScenarioCsvTest, RoundTripProperty) {
    testing::Gen gen(99);
    for (int i = 0; i < 300; ++i) {
        GeneratorConfig c{.seed = gen.Int(0, ~0ull)};
        Scenario s = GenerateScenario(c);
        std::string csv = WriteScenarioCsv(s);
        EXPECT_EQ(ParseScenarioCsv(csv), s);
        EXPECT_EQ(WriteScenarioCsv(ParseScenarioCsv(csv)), csv);
    }
}

TEST(ScenarioCsvTest, AcceptsCrlfAndLegacySpelling) {
    Scenario s = ParseScenarioCsv("duration,8\r\nUserRotation,0,8,ROTATION_REVERSE_POTRAIT\r\n");
    EXPECT_EQ(s.sequences.at(EventKind::UserRotation)[0].value, "ROTATION_REVERSE_PORTRAIT");
}

TEST(ScenarioCsvTest, ReportsLineNumbers) {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            ParseScenarioCsv(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("NetworkStatus,0,8,lte\n"), 1u);
    EXPECT_EQ(line_of("duration,8\nNetworkStatus,0,8\n"), 2u);
    EXPECT_EQ(line_of("duration,8\nNetworkStatus,0,8,lte\nBogus,0,1,x\n"), 3u);
    EXPECT_EQ(line_of("duration,8\nNetworkStatus,0,x,lte\n"), 2u);
    EXPECT_EQ(line_of("duration,8\nNetworkStatus,0,8,5g\n"), 2u);
}

TEST(ScenarioCsvTest, RejectsBrokenInvariants) {
    // Sum mismatch.
    EXPECT_THROW(ParseScenarioCsv("duration,10\nNetworkStatus,0,8,lte\n"), InvariantError);
    // Index gap.
    EXPECT_THROW(ParseScenarioCsv("duration,10\nKeyPress,0,5,KEYCODE_BACK\nKeyPress,2,5,KEYCODE_BACK\n"),
                 InvariantError);
}

TEST(ScenarioTest, FilterKeepsOnlyApplicableKinds) {
    Scenario s = GenerateScenario({.seed = 3});
    Scenario f = FilterScenario(s, {EventKind::UserRotation, EventKind::KeyPress});
    EXPECT_EQ(f.duration_secs, s.duration_secs);
    ASSERT_EQ(f.sequences.size(), 2u);
    EXPECT_EQ(f.sequences.at(EventKind::KeyPress), s.sequences.at(EventKind::KeyPress));
    EXPECT_EQ(FilterScenario(s, {}).EventCount(), 0u);
}

TEST(ScenarioTest, EventCountSumsSequences) {
    Scenario s = GenerateScenario({.seed = 11});
    std::size_t n = 0;
    for (const auto& [k, events] : s.sequences) n += events.size();
    EXPECT_EQ(s.EventCount(), n);
}

}  // namespace
}  // namespace ctxmonkey
