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
#include <optional>
#include <string>
#include <vector>

#include "ctxmonkey/console.h"
#include "ctxmonkey/device.h"

namespace ctxmonkey {

struct EmulatorOptions {
    std::string adb_path = "adb";
    std::string serial = "emulator-5554";
    std::string console_host = "127.0.0.1";
    std::uint16_t console_port = 5554;
    std::optional<std::string> auth_token;
};

// A running emulator reached through its console and the debug bridge.
class EmulatorDevice : public DeviceBackend {
  public:
    explicit EmulatorDevice(EmulatorOptions options);

    std::string Identity() const override { return options_.serial; }
    Capabilities capabilities() const override { return {.supports_console = true}; }
    Clock& clock() override { return clock_; }

    // Connects lazily on first use.
    ConsoleResponse ConsoleCommand(std::string_view cmd) override;
    ShellResult Shell(const std::vector<std::string>& args) override;
    void InstallApk(const std::string& apk_path) override;
    void UninstallPackage(const std::string& package_id) override;
    std::unique_ptr<LogcatStream> OpenLogcat() override;

    // `adb -s <serial> <args...>` as a host-side argv.
    std::vector<std::string> AdbArgv(const std::vector<std::string>& args) const;

  private:
    EmulatorOptions options_;
    SystemClock clock_;
    ConsoleClient console_;
};

}  // namespace ctxmonkey
