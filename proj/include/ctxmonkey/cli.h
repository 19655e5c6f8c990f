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

#include <iosfwd>
#include <string>
#include <vector>

namespace ctxmonkey {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,   // bad flags, bad config, unreadable inputs
    kExitDevice = 2,  // the device failed mid-run
    kExitFatal = 3,   // the run finished and the app crashed
};

/**
 * The `ctxmonkey` command line. |args| excludes the program name. Output that a
 * subcommand prints goes to |out|, diagnostics to |err|.
 *
 *     ctxmonkey generate (--apk APK | --badging FILE) [--seed N] [--config INI] [--out CSV]
 *     ctxmonkey run (--apk APK | --badging FILE) [--scenario CSV] [--config INI]
 *                   [--backend real|sim] [--sim-script JSON] [--out DIR] [--activity A]...
 *     ctxmonkey analyze --run-dir DIR [--window-before S] [--window-after S]
 *     ctxmonkey report --run-dir DIR [--format text|json|html] [--activity A]...
 *                      [--severity W|E|F]... [--out FILE]
 *     ctxmonkey ui-parse FILE
 */
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ctxmonkey
