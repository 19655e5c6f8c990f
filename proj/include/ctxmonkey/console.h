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

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ctxmonkey/device.h"

namespace ctxmonkey {

/**
 * Client for the emulator's plaintext console.
 *
 * On connect the console prints a banner terminated by "OK". If the banner asks for
 * authentication the client answers with `auth <token>`. Each command is sent with
 * CRLF and its reply runs until a line that is exactly "OK" or starts with "KO:".
 * Commands are serialized; one instance may be shared between threads.
 */
class ConsoleClient {
  public:
    ConsoleClient(std::string host, std::uint16_t port, std::optional<std::string> auth_token);
    ~ConsoleClient();

    ConsoleClient(const ConsoleClient&) = delete;
    ConsoleClient& operator=(const ConsoleClient&) = delete;

    // Throws ConnectionLost if the socket cannot be opened or closes during the
    // handshake, AuthRequired if the console wants a token and none was given.
    void Connect();
    bool connected() const;

    ConsoleResponse Command(std::string_view cmd);

    void Close();

  private:
    std::string ReadLineLocked();
    ConsoleResponse ReadResponseLocked();
    void SendLocked(std::string_view line);

    const std::string host_;
    const std::uint16_t port_;
    const std::optional<std::string> auth_token_;

    mutable std::mutex mutex_;
    int fd_ = -1;
    std::string pending_;
};

// Reads the emulator console token file; nullopt if it does not exist.
std::optional<std::string> ReadAuthToken(const std::string& path);

/**
 * A loopback server speaking the console protocol, used to expose a simulated device
 * over TCP. Connections are served one at a time on a background thread.
 */
class ConsoleServer {
  public:
    using Handler = std::function<ConsoleResponse(std::string_view)>;

    // Binds 127.0.0.1:|port| (0 picks a free port).
    ConsoleServer(Handler handler, std::optional<std::string> auth_token, std::uint16_t port = 0);
    ~ConsoleServer();

    ConsoleServer(const ConsoleServer&) = delete;
    ConsoleServer& operator=(const ConsoleServer&) = delete;

    std::uint16_t port() const { return port_; }

    // Closes the current client connection, if any.
    void DropClient();
    void Stop();

  private:
    void Serve();
    void ServeClient(int fd);

    Handler handler_;
    std::optional<std::string> auth_token_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::mutex client_mutex_;
    int client_fd_ = -1;
    std::thread thread_;
};

}  // namespace ctxmonkey
