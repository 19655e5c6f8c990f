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


#include "ctxmonkey/console.h"

#include <gtest/gtest.h>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/files.h"
#include "ctxmonkey/sim_device.h"
#include "test_support.h"

namespace ctxmonkey {
namespace {

ConsoleResponse Echo(std::string_view cmd) {
    if (cmd == "fail") return {.ok = false, .lines = {"KO: requested failure"}};
    return {.ok = true, .lines = {"echo " + std::string(cmd)}};
}

TEST(ConsoleTest, CommandsWithoutAuth) {
    ConsoleServer server(Echo, std::nullopt);
    ConsoleClient client("127.0.0.1", server.port(), std::nullopt);
    client.Connect();
    ConsoleResponse r = client.Command("network speed lte");
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.lines, (std::vector<std::string>{"echo network speed lte", "OK"}));
    ConsoleResponse bad = client.Command("fail");
    EXPECT_FALSE(bad.ok);
    EXPECT_EQ(bad.lines.back(), "KO: requested failure");
}

TEST(ConsoleTest, AuthenticatesWithToken) {
    ConsoleServer server(Echo, "s3cret");
    ConsoleClient client("127.0.0.1", server.port(), "s3cret");
    client.Connect();
    EXPECT_TRUE(client.Command("gsm data home").ok);
}

TEST(ConsoleTest, MissingTokenIsAuthRequired) {
    ConsoleServer server(Echo, "s3cret");
    ConsoleClient client("127.0.0.1", server.port(), std::nullopt);
    EXPECT_THROW(client.Connect(), AuthRequired);
}

TEST(ConsoleTest, WrongTokenIsAuthRequired) {
    ConsoleServer server(Echo, "s3cret");
    ConsoleClient client("127.0.0.1", server.port(), "guess");
    EXPECT_THROW(client.Connect(), AuthRequired);
}

TEST(ConsoleTest, NoListenerIsConnectionLost) {
    std::uint16_t port;
    {
        ConsoleServer server(Echo, std::nullopt);
        port = server.port();
    }
    ConsoleClient client("127.0.0.1", port, std::nullopt);
    EXPECT_THROW(client.Connect(), ConnectionLost);
}

TEST(ConsoleTest, DroppedClientIsConnectionLost) {
    ConsoleServer server(Echo, std::nullopt);
    ConsoleClient client("127.0.0.1", server.port(), std::nullopt);
    client.Connect();
    server.DropClient();
    EXPECT_THROW({
        client.Command("network speed lte");
        client.Command("network speed lte");
    }, ConnectionLost);
}

TEST(ConsoleTest, ServesSimulatedDevice) {
    SimScript script = SimScript::DefaultFor({.package_id = "a.b", .activities = {"a.b.Main"}});
    SimDevice sim(script);
    ConsoleServer server([&](std::string_view cmd) { return sim.HandleConsole(cmd); }, "tok");
    ConsoleClient client("127.0.0.1", server.port(), "tok");
    client.Connect();
    EXPECT_TRUE(client.Command("network speed umts").ok);
    EXPECT_FALSE(client.Command("network speed warp").ok);
    EXPECT_EQ(sim.state().network_speed, "umts");
}

TEST(ConsoleTest, ReadsAuthTokenFile) {
    testing::TempDir dir;
    EXPECT_FALSE(ReadAuthToken((dir / "missing").string()));
    WriteTextFile(dir / "token", "abc123\n");
    EXPECT_EQ(ReadAuthToken((dir / "token").string()), "abc123");
}

}  // namespace
}  // namespace ctxmonkey
