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

#include "ctxmonkey/subprocess.h"

#include <cerrno>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>

#include "ctxmonkey/errors.h"

extern char** environ;

namespace ctxmonkey {

namespace {

struct Pipe {
    int read = -1;
    int write = -1;

    Pipe() {
        int fds[2];
        if (pipe2(fds, O_CLOEXEC) != 0) throw DeviceError(std::string("pipe: ") + strerror(errno));
        read = fds[0];
        write = fds[1];
    }
    ~Pipe() {
        CloseRead();
        CloseWrite();
    }
    void CloseRead() {
        if (read >= 0) close(read);
        read = -1;
    }
    void CloseWrite() {
        if (write >= 0) close(write);
        write = -1;
    }
};

pid_t Spawn(const std::vector<std::string>& argv, int out_fd, int err_fd) {
    if (argv.empty()) throw DeviceError("empty command line");
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_adddup2(&actions, out_fd, STDOUT_FILENO);
    if (err_fd >= 0) {
        posix_spawn_file_actions_adddup2(&actions, err_fd, STDERR_FILENO);
    } else {
        posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null", O_WRONLY, 0);
    }

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_t pid = -1;
    int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) {
        throw DeviceError(fmt::format("cannot start '{}': {}", argv[0], strerror(rc)));
    }
    return pid;
}

int DecodeStatus(int status) {
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
}

}  // namespace

ProcessResult RunProcess(const std::vector<std::string>& argv) {
    Pipe out, err;
    pid_t pid = Spawn(argv, out.write, err.write);
    out.CloseWrite();
    err.CloseWrite();

    ProcessResult result;
    pollfd fds[2] = {{out.read, POLLIN, 0}, {err.read, POLLIN, 0}};
    std::string* sinks[2] = {&result.out, &result.err};
    int open_count = 2;
    char buf[4096];
    while (open_count > 0) {
        if (poll(fds, 2, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (int i = 0; i < 2; ++i) {
            if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            ssize_t n = read(fds[i].fd, buf, sizeof(buf));
            if (n > 0) {
                sinks[i]->append(buf, static_cast<std::size_t>(n));
            } else if (n == 0 || errno != EINTR) {
                fds[i].fd = -1;
                --open_count;
            }
        }
    }
    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.exit_code = DecodeStatus(status);
    return result;
}

LineProcess::LineProcess(const std::vector<std::string>& argv) {
    Pipe out;
    pid_ = Spawn(argv, out.write, -1);
    out.CloseWrite();
    fd_ = out.read;
    out.read = -1;
}

LineProcess::~LineProcess() {
    Kill();
    if (fd_ >= 0) close(fd_);
}

std::optional<std::string> LineProcess::ReadLine(std::stop_token stop) {
    for (;;) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        if (eof_) {
            if (buffer_.empty()) return std::nullopt;
            std::string line;
            line.swap(buffer_);
            return line;
        }
        if (stop.stop_requested()) return std::nullopt;
        pollfd pfd{fd_, POLLIN, 0};
        int rc = poll(&pfd, 1, 100);
        if (rc < 0 && errno != EINTR) {
            eof_ = true;
            continue;
        }
        if (rc <= 0) continue;
        char buf[4096];
        ssize_t n = read(fd_, buf, sizeof(buf));
        if (n > 0) {
            buffer_.append(buf, static_cast<std::size_t>(n));
        } else if (n == 0 || errno != EINTR) {
            eof_ = true;
        }
    }
}

std::optional<int> LineProcess::Wait() {
    if (status_ || pid_ < 0) return status_;
    int status = 0;
    while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
    if (WIFSIGNALED(status) && WTERMSIG(status) == SIGKILL) return std::nullopt;
    status_ = DecodeStatus(status);
    return status_;
}

void LineProcess::Kill() {
    if (pid_ < 0) return;
    kill(pid_, SIGKILL);
    int status = 0;
    while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
}

std::string ShellQuote(const std::string& arg) {
    if (!arg.empty() && arg.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                              "0123456789@%+=:,./_-") == std::string::npos) {
        return arg;
    }
    std::string out = "'";
    for (char c : arg) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

}  // namespace ctxmonkey
