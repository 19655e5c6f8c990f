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

#include "ctxmonkey/emulator_device.h"

#include <fmt/format.h>

#include "ctxmonkey/errors.h"
#include "ctxmonkey/strings.h"
#include "ctxmonkey/subprocess.h"

namespace ctxmonkey {

namespace {

class AdbLogcatStream : public LogcatStream {
  public:
    explicit AdbLogcatStream(const std::vector<std::string>& argv) : process_(argv) {}

    std::optional<std::string> Next(std::stop_token stop) override {
        auto line = process_.ReadLine(stop);
        if (!line && !stop.stop_requested()) {
            // adb exits when the device goes away.
            failed_ = true;
        }
        return line;
    }

    bool failed() const override { return failed_; }

  private:
    LineProcess process_;
    bool failed_ = false;
};

}  // namespace

EmulatorDevice::EmulatorDevice(EmulatorOptions options)
    : options_(std::move(options)),
      console_(options_.console_host, options_.console_port, options_.auth_token) {}

std::vector<std::string> EmulatorDevice::AdbArgv(const std::vector<std::string>& args) const {
    std::vector<std::string> argv = {options_.adb_path, "-s", options_.serial};
    argv.insert(argv.end(), args.begin(), args.end());
    return argv;
}

ConsoleResponse EmulatorDevice::ConsoleCommand(std::string_view cmd) {
    if (!console_.connected()) console_.Connect();
    return console_.Command(cmd);
}

ShellResult EmulatorDevice::Shell(const std::vector<std::string>& args) {
    std::string remote;
    for (const auto& a : args) {
        if (!remote.empty()) remote += ' ';
        remote += ShellQuote(a);
    }
    ProcessResult r = RunProcess(AdbArgv({"shell", remote}));
    if (r.exit_code != 0 && r.err.find("device") != std::string::npos &&
        (r.err.find("not found") != std::string::npos || r.err.find("offline") != std::string::npos)) {
        throw ConnectionLost(std::string(Trim(r.err)));
    }
    return ShellResult{.exit_code = r.exit_code, .out = std::move(r.out), .err = std::move(r.err)};
}

void EmulatorDevice::InstallApk(const std::string& apk_path) {
    ProcessResult r = RunProcess(AdbArgv({"install", apk_path}));
    if (r.exit_code != 0 || r.out.find("Success") == std::string::npos) {
        throw InstallError(fmt::format("adb install {}: {}", apk_path,
                                       Trim(r.err.empty() ? r.out : r.err)));
    }
}

void EmulatorDevice::UninstallPackage(const std::string& package_id) {
    ProcessResult r = RunProcess(AdbArgv({"uninstall", package_id}));
    if (r.exit_code != 0 || r.out.find("Success") == std::string::npos) {
        throw InstallError(fmt::format("adb uninstall {}: {}", package_id,
                                       Trim(r.err.empty() ? r.out : r.err)));
    }
}

std::unique_ptr<LogcatStream> EmulatorDevice::OpenLogcat() {
    return std::make_unique<AdbLogcatStream>(AdbArgv({"logcat", "-v", "threadtime"}));
}

}  // namespace ctxmonkey
