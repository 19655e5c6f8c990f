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

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <fmt/format.h>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/strings.h"

namespace ctxmonkey {

namespace {

constexpr int kReplyTimeoutMs = 10000;

bool SendAll(int fd, std::string_view data) {
    while (!data.empty()) {
        ssize_t n = send(fd, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

// Reads one CRLF/LF terminated line from |fd|, buffering extra bytes in |pending|.
// Returns nullopt on EOF, error or timeout.
std::optional<std::string> RecvLine(int fd, std::string& pending, int timeout_ms) {
    for (;;) {
        auto nl = pending.find('\n');
        if (nl != std::string::npos) {
            std::string line = pending.substr(0, nl);
            pending.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        pollfd pfd{fd, POLLIN, 0};
        int rc = poll(&pfd, 1, timeout_ms);
        if (rc < 0 && errno == EINTR) continue;
        if (rc <= 0) return std::nullopt;
        char buf[1024];
        ssize_t n = recv(fd, buf, sizeof(buf), 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return std::nullopt;
        pending.append(buf, static_cast<std::size_t>(n));
    }
}

bool IsTerminal(std::string_view line) {
    return line == "OK" || line.starts_with("KO:");
}

}  // namespace

std::optional<std::string> ReadAuthToken(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return std::string(Trim(ss.str()));
}

// ConsoleClient

ConsoleClient::ConsoleClient(std::string host, std::uint16_t port,
                             std::optional<std::string> auth_token)
    : host_(std::move(host)), port_(port), auth_token_(std::move(auth_token)) {}

ConsoleClient::~ConsoleClient() {
    Close();
}

bool ConsoleClient::connected() const {
    std::lock_guard lock(mutex_);
    return fd_ >= 0;
}

void ConsoleClient::Close() {
    std::lock_guard lock(mutex_);
    if (fd_ >= 0) close(fd_);
    fd_ = -1;
    pending_.clear();
}

void ConsoleClient::Connect() {
    std::lock_guard lock(mutex_);
    if (fd_ >= 0) return;

    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    std::string port = std::to_string(port_);
    if (int rc = getaddrinfo(host_.c_str(), port.c_str(), &hints, &found); rc != 0) {
        throw ConnectionLost(fmt::format("console {}:{}: {}", host_, port_, gai_strerror(rc)));
    }
    int fd = -1;
    for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
        fd = socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
        if (fd < 0) continue;
        if (connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        close(fd);
        fd = -1;
    }
    freeaddrinfo(found);
    if (fd < 0) {
        throw ConnectionLost(fmt::format("console {}:{}: {}", host_, port_, strerror(errno)));
    }
    fd_ = fd;

    try {
        ConsoleResponse banner = ReadResponseLocked();
        bool wants_auth = false;
        for (const auto& line : banner.lines) {
            if (line.find("Authentication required") != std::string::npos) wants_auth = true;
        }
        if (wants_auth) {
            if (!auth_token_) {
                throw AuthRequired(fmt::format(
                        "console {}:{} requires an auth token and none is configured", host_, port_));
            }
            SendLocked("auth " + *auth_token_);
            ConsoleResponse reply = ReadResponseLocked();
            if (!reply.ok) {
                throw AuthRequired(fmt::format("console rejected auth token: {}",
                                               reply.lines.empty() ? "" : reply.lines.back()));
            }
        }
    } catch (...) {
        close(fd_);
        fd_ = -1;
        pending_.clear();
        throw;
    }
}

void ConsoleClient::SendLocked(std::string_view line) {
    std::string wire = std::string(line) + "\r\n";
    if (fd_ < 0 || !SendAll(fd_, wire)) {
        throw ConnectionLost("console connection lost while sending");
    }
}

std::string ConsoleClient::ReadLineLocked() {
    auto line = RecvLine(fd_, pending_, kReplyTimeoutMs);
    if (!line) throw ConnectionLost("console connection lost while reading");
    return *line;
}

ConsoleResponse ConsoleClient::ReadResponseLocked() {
    ConsoleResponse response;
    for (;;) {
        std::string line = ReadLineLocked();
        bool terminal = IsTerminal(line);
        response.lines.push_back(std::move(line));
        if (terminal) break;
    }
    response.ok = response.lines.back() == "OK";
    return response;
}

ConsoleResponse ConsoleClient::Command(std::string_view cmd) {
    std::lock_guard lock(mutex_);
    if (fd_ < 0) throw ConnectionLost("console is not connected");
    try {
        SendLocked(cmd);
        return ReadResponseLocked();
    } catch (const ConnectionLost&) {
        close(fd_);
        fd_ = -1;
        pending_.clear();
        throw;
    }
}

// ConsoleServer

ConsoleServer::ConsoleServer(Handler handler, std::optional<std::string> auth_token,
                             std::uint16_t port)
    : handler_(std::move(handler)), auth_token_(std::move(auth_token)) {
    listen_fd_ = socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (listen_fd_ < 0) throw DeviceError(std::string("socket: ") + strerror(errno));
    int one = 1;
    setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        listen(listen_fd_, 4) != 0) {
        std::string why = strerror(errno);
        close(listen_fd_);
        throw DeviceError("console server bind: " + why);
    }
    socklen_t len = sizeof(addr);
    getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    thread_ = std::thread([this] { Serve(); });
}

ConsoleServer::~ConsoleServer() {
    Stop();
}

void ConsoleServer::Stop() {
    if (stopping_.exchange(true)) return;
    shutdown(listen_fd_, SHUT_RDWR);
    DropClient();
    if (thread_.joinable()) thread_.join();
    close(listen_fd_);
}

void ConsoleServer::DropClient() {
    std::lock_guard lock(client_mutex_);
    if (client_fd_ >= 0) shutdown(client_fd_, SHUT_RDWR);
}

void ConsoleServer::Serve() {
    while (!stopping_) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        int rc = poll(&pfd, 1, 100);
        if (rc <= 0) continue;
        int fd = accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
        if (fd < 0) continue;
        {
            std::lock_guard lock(client_mutex_);
            client_fd_ = fd;
        }
        ServeClient(fd);
        {
            std::lock_guard lock(client_mutex_);
            client_fd_ = -1;
        }
        close(fd);
    }
}

void ConsoleServer::ServeClient(int fd) {
    bool authed = !auth_token_;
    std::string banner;
    if (!authed) {
        banner = "Android Console: Authentication required\r\n"
                 "Android Console: type 'auth <auth_token>' to authenticate\r\n"
                 "Android Console: you can find your <auth_token> in \r\n"
                 "'~/.emulator_console_auth_token'\r\nOK\r\n";
    } else {
        banner = "Android Console: type 'help' for a list of commands\r\nOK\r\n";
    }
    if (!SendAll(fd, banner)) return;

    std::string pending;
    while (!stopping_) {
        auto line = RecvLine(fd, pending, 200);
        if (!line) {
            // Timeout: keep waiting unless the peer went away.
            pollfd pfd{fd, POLLIN, 0};
            if (poll(&pfd, 1, 0) > 0) {
                char c;
                if (recv(fd, &c, 1, MSG_PEEK) <= 0) return;
            }
            continue;
        }
        std::vector<std::string_view> words = SplitWhitespace(*line);
        std::string reply;
        if (!authed) {
            if (words.size() == 2 && words[0] == "auth" && words[1] == *auth_token_) {
                authed = true;
                reply = "Android Console: type 'help' for a list of commands\r\nOK\r\n";
            } else if (words.size() == 2 && words[0] == "auth") {
                reply = "KO: authentication token does not match ~/.emulator_console_auth_token\r\n";
            } else {
                reply = "KO: unknown command, try 'help'\r\n";
            }
        } else if (!words.empty() && words[0] == "quit") {
            return;
        } else {
            ConsoleResponse r;
            try {
                r = handler_(*line);
            } catch (const std::exception& e) {
                r = ConsoleResponse{.ok = false, .lines = {std::string("KO: ") + e.what()}};
            }
            for (const auto& l : r.lines) reply += l + "\r\n";
            if (r.lines.empty() || !IsTerminal(r.lines.back())) reply += r.ok ? "OK\r\n" : "KO:\r\n";
        }
        if (!SendAll(fd, reply)) return;
    }
}

}  // namespace ctxmonkey
