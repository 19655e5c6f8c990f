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

#include "ctxmonkey/cli.h"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ctxmonkey/analysis.h"
#include "ctxmonkey/config.h"
#include "ctxmonkey/emulator_device.h"
#include "ctxmonkey/errors.h"
#include "ctxmonkey/executor.h"
#include "ctxmonkey/files.h"
#include "ctxmonkey/manifest.h"
#include "ctxmonkey/report.h"
#include "ctxmonkey/scenario.h"
#include "ctxmonkey/sim_device.h"
#include "ctxmonkey/strings.h"
#include "ctxmonkey/subprocess.h"
#include "ctxmonkey/uimodel.h"

namespace ctxmonkey {

namespace {

namespace fs = std::filesystem;

struct UsageError : Error {
    using Error::Error;
};

struct MetadataSource {
    std::string apk;
    std::string badging;
};

struct ConfigSource {
    std::string path;
    std::optional<std::uint64_t> seed;
};

// Flags beat the environment, which beats the file.
ToolConfig LoadToolConfig(const ConfigSource& src, bool seed_required) {
    EnvLookup env = [&src](const std::string& name) -> std::optional<std::string> {
        if (name == "CTXMONKEY_GENERATOR_SEED" && src.seed) return std::to_string(*src.seed);
        return ProcessEnv(name);
    };
    if (!src.path.empty()) return LoadConfig(src.path, env);

    std::string text;
    if (!src.seed && !ProcessEnv("CTXMONKEY_GENERATOR_SEED")) {
        if (seed_required) {
            throw UsageError("no seed given: pass --seed or a --config with generator.seed");
        }
        text = "[generator]\nseed = 0\n";
    }
    return ParseConfig(text, env);
}

AppMetadata LoadMetadata(const MetadataSource& src, const ToolConfig& config) {
    if (!src.badging.empty()) return ParseBadging(ReadTextFile(src.badging));
    if (src.apk.empty()) throw UsageError("one of --apk or --badging is required");
    ProcessResult badging = RunProcess({config.sdk.aapt, "dump", "badging", src.apk});
    if (badging.exit_code != 0) {
        throw Error(fmt::format("{} dump badging failed: {}", config.sdk.aapt, Trim(badging.err)));
    }
    ProcessResult tree =
            RunProcess({config.sdk.aapt, "dump", "xmltree", src.apk, "AndroidManifest.xml"});
    if (tree.exit_code != 0) {
        throw Error(fmt::format("{} dump xmltree failed: {}", config.sdk.aapt, Trim(tree.err)));
    }
    return ParseBadging(badging.out + "\n" + tree.out);
}

// Generator settings restricted to the kinds that apply to the app.
Scenario GenerateFor(const ToolConfig& config, const AppMetadata& metadata) {
    GeneratorConfig g = config.generator;
    EventKindSet applicable = ApplicableEventKinds(metadata);
    EventKindSet kinds;
    for (EventKind k : g.enabled_kinds) {
        if (applicable.contains(k)) kinds.insert(k);
    }
    if (kinds.empty()) return Scenario{.duration_secs = g.duration_secs, .sequences = {}};
    g.enabled_kinds = std::move(kinds);
    return GenerateScenario(g);
}

std::set<char> ParseSeverities(const std::vector<std::string>& flags) {
    std::set<char> out;
    for (const std::string& flag : flags) {
        for (std::string_view item : Split(flag, ',')) {
            std::string v(Trim(item));
            for (auto& c : v) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (v == "W" || v == "WARNING") {
                out.insert('W');
            } else if (v == "E" || v == "ERROR") {
                out.insert('E');
            } else if (v == "F" || v == "FATAL") {
                out.insert('F');
            } else {
                throw UsageError(fmt::format("unknown severity '{}'", item));
            }
        }
    }
    return out;
}

void PrintWarnings(const ToolConfig& config, std::ostream& err) {
    for (const auto& w : config.warnings) fmt::print(err, "warning: {}\n", w);
}

int CmdGenerate(const MetadataSource& meta, const ConfigSource& cfg, const std::string& out_path,
                std::ostream& out, std::ostream& err) {
    ToolConfig config = LoadToolConfig(cfg, true);
    PrintWarnings(config, err);
    AppMetadata metadata = LoadMetadata(meta, config);
    std::string csv = WriteScenarioCsv(GenerateFor(config, metadata));
    if (out_path.empty() || out_path == "-") {
        out << csv;
    } else {
        WriteTextFile(out_path, csv);
    }
    return kExitOk;
}

struct RunFlags {
    MetadataSource meta;
    ConfigSource cfg;
    std::string scenario;
    std::string backend = "sim";
    std::string sim_script;
    std::string out_dir;
    std::vector<std::string> activities;
    bool no_text_fuzz = false;
};

int CmdRun(const RunFlags& flags, std::ostream& out, std::ostream& err) {
    ToolConfig config = LoadToolConfig(flags.cfg, flags.scenario.empty());
    PrintWarnings(config, err);
    AppMetadata metadata = LoadMetadata(flags.meta, config);
    Scenario scenario = flags.scenario.empty() ? GenerateFor(config, metadata)
                                               : ParseScenarioCsv(ReadTextFile(flags.scenario));

    RunConfig rc;
    rc.text_fuzz = config.executor.text_fuzz && !flags.no_text_fuzz;
    rc.text_seed = config.executor.text_seed.value_or(config.generator.seed);
    rc.per_activity_duration_secs = config.executor.per_activity_duration_secs;
    rc.fatal_stop = config.executor.fatal_stop;
    rc.max_scrolls = config.executor.max_scrolls;
    rc.output_dir = flags.out_dir.empty() ? config.output_dir : fs::path(flags.out_dir);
    rc.apk_path = flags.meta.apk;
    rc.guided_activities = flags.activities.empty() ? config.executor.activities : flags.activities;
    rc.mode = rc.guided_activities.empty() ? RunMode::AllActivities : RunMode::Guided;

    std::unique_ptr<DeviceBackend> device;
    if (flags.backend == "sim") {
        SimScript script;
        if (flags.sim_script.empty()) {
            script = SimScript::DefaultFor(metadata);
            script.installed = true;
        } else {
            script = ParseSimScript(ReadTextFile(flags.sim_script));
        }
        if (script.package_id != metadata.package_id) {
            throw UsageError(fmt::format("sim script is for {}, the app is {}", script.package_id,
                                         metadata.package_id));
        }
        device = std::make_unique<SimDevice>(std::move(script));
    } else if (flags.backend == "real") {
        ValidateForRealBackend(config);
        std::string token_path = config.console.auth_token_path;
        if (token_path.empty()) {
            const char* home = std::getenv("HOME");
            token_path = fmt::format("{}/.emulator_console_auth_token", home ? home : "");
        }
        device = std::make_unique<EmulatorDevice>(EmulatorOptions{
                .adb_path = config.sdk.adb,
                .serial = config.sdk.serial,
                .console_host = config.console.host,
                .console_port = config.console.port,
                .auth_token = ReadAuthToken(token_path)});
    } else {
        throw UsageError(fmt::format("unknown backend '{}'", flags.backend));
    }

    RunArtifacts artifacts;
    try {
        artifacts = RunTest(*device, metadata, scenario, rc);
    } catch (const DeviceError& e) {
        fmt::print(err, "run aborted: {}\npartial artifacts in {}\n", e.what(),
                   rc.output_dir.string());
        return kExitDevice;
    }
    WriteTextFile(rc.output_dir / "scenario.csv", WriteScenarioCsv(scenario));

    fmt::print(out, "{}: {} activities, {} injection records, status {}\n", rc.output_dir.string(),
               artifacts.activity_markers.size(), artifacts.records.size(),
               RunStatusName(artifacts.status));
    for (const auto& w : artifacts.warnings) fmt::print(err, "warning: {}\n", w);
    if (artifacts.crash) {
        fmt::print(out, "FATAL in {} at {}\n", artifacts.crash->activity,
                   artifacts.crash->timestamp.FormatMillis());
        return kExitFatal;
    }
    return kExitOk;
}

struct AnalyzeFlags {
    std::string run_dir;
    ConfigSource cfg;
    std::optional<std::uint32_t> before;
    std::optional<std::uint32_t> after;
};

int CmdAnalyze(const AnalyzeFlags& flags, std::ostream& out, std::ostream& err) {
    ToolConfig config = LoadToolConfig(flags.cfg, false);
    PrintWarnings(config, err);
    AnalysisConfig ac;
    ac.window_before_secs = flags.before.value_or(config.analysis.window_before_secs);
    ac.window_after_secs = flags.after.value_or(config.analysis.window_after_secs);
    Analysis analysis = AnalyzeRunDir(flags.run_dir, ac);
    fs::path path = fs::path(flags.run_dir) / kAnalysisJsonName;
    WriteTextFile(path, WriteAnalysisJson(analysis));
    Summary s = Summarize(analysis.issues);
    fmt::print(out, "{}: {} issues (W {}, E {}, F {})\n", path.string(), s.total,
               s.by_severity['W'], s.by_severity['E'], s.by_severity['F']);
    return kExitOk;
}

struct ReportFlags {
    std::string run_dir;
    std::string format = "text";
    std::vector<std::string> activities;
    std::vector<std::string> severities;
    std::string out_path;
};

int CmdReport(const ReportFlags& flags, std::ostream& out) {
    fs::path dir = flags.run_dir;
    Analysis analysis = fs::exists(dir / kAnalysisJsonName)
                                ? ParseAnalysisJson(ReadTextFile(dir / kAnalysisJsonName))
                                : AnalyzeRunDir(dir, AnalysisConfig{});
    ReportFilter filter;
    if (!flags.activities.empty()) {
        filter.activities.emplace(flags.activities.begin(), flags.activities.end());
    }
    if (!flags.severities.empty()) filter.severities = ParseSeverities(flags.severities);

    std::string text;
    fs::path default_path;
    if (flags.format == "text") {
        text = RenderText(analysis, filter);
    } else if (flags.format == "json") {
        text = RenderJson(analysis, filter);
        default_path = dir / "report.json";
    } else if (flags.format == "html") {
        text = RenderHtml(analysis, filter);
        default_path = dir / "report.html";
    } else {
        throw UsageError(fmt::format("unknown format '{}'", flags.format));
    }

    fs::path target = flags.out_path.empty() ? default_path : fs::path(flags.out_path);
    if (target.empty() || target == "-") {
        out << text;
    } else {
        WriteTextFile(target, text);
        fmt::print(out, "{}\n", target.string());
    }
    return kExitOk;
}

int CmdUiParse(const std::string& path, std::ostream& out) {
    UiSnapshot snapshot = ParseUiDump(ReadTextFile(path), "");
    for (const auto& e : snapshot.elements) {
        fmt::print(out, "{} id={} text=\"{}\" [{},{}][{},{}]{}{}\n", e.class_name,
                   e.resource_id.empty() ? "-" : e.resource_id, e.text, e.bounds.left,
                   e.bounds.top, e.bounds.right, e.bounds.bottom, e.editable ? " editable" : "",
                   e.focused ? " focused" : "");
    }
    fmt::print(out, "{} elements, {} text fields\n", snapshot.elements.size(),
               TextFields(snapshot).size());
    return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Contextual fuzz testing for Android apps", "ctxmonkey"};
    app.require_subcommand(1);

    MetadataSource gen_meta;
    ConfigSource gen_cfg;
    std::string gen_out;
    CLI::App* generate = app.add_subcommand("generate", "Write a seeded scenario CSV");
    auto* gen_apk = generate->add_option("--apk", gen_meta.apk, "APK to read metadata from");
    generate->add_option("--badging", gen_meta.badging, "aapt badging/xmltree dump")
            ->excludes(gen_apk);
    generate->add_option("--seed", gen_cfg.seed, "Scenario seed");
    generate->add_option("--config", gen_cfg.path, "INI configuration");
    generate->add_option("--out", gen_out, "Output CSV (stdout when omitted)");

    RunFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "Inject a scenario into every activity");
    run->add_option("--apk", run_flags.meta.apk, "APK to install and test");
    run->add_option("--badging", run_flags.meta.badging, "aapt badging/xmltree dump");
    run->add_option("--scenario", run_flags.scenario, "Scenario CSV (generated when omitted)");
    run->add_option("--config", run_flags.cfg.path, "INI configuration");
    run->add_option("--seed", run_flags.cfg.seed, "Scenario seed");
    run->add_option("--backend", run_flags.backend, "real or sim")
            ->check(CLI::IsMember({"real", "sim"}));
    run->add_option("--sim-script", run_flags.sim_script, "Simulated device script (JSON)");
    run->add_option("--out", run_flags.out_dir, "Run directory");
    run->add_option("--activity", run_flags.activities, "Guided mode: activities to test");
    run->add_flag("--no-text-fuzz", run_flags.no_text_fuzz, "Do not type into text fields");

    AnalyzeFlags analyze_flags;
    CLI::App* analyze = app.add_subcommand("analyze", "Extract issues from a run directory");
    analyze->add_option("--run-dir", analyze_flags.run_dir, "Run directory")->required();
    analyze->add_option("--config", analyze_flags.cfg.path, "INI configuration");
    analyze->add_option("--window-before", analyze_flags.before, "Seconds before an issue");
    analyze->add_option("--window-after", analyze_flags.after, "Seconds after an issue");

    ReportFlags report_flags;
    CLI::App* report = app.add_subcommand("report", "Render the issues of a run");
    report->add_option("--run-dir", report_flags.run_dir, "Run directory")->required();
    report->add_option("--format", report_flags.format, "text, json or html")
            ->check(CLI::IsMember({"text", "json", "html"}));
    report->add_option("--activity", report_flags.activities, "Only these activities");
    report->add_option("--severity", report_flags.severities, "Only these severities (W,E,F)");
    report->add_option("--out", report_flags.out_path, "Output file ('-' for stdout)");

    std::string ui_file;
    CLI::App* ui_parse = app.add_subcommand("ui-parse", "List the elements of a hierarchy dump");
    ui_parse->add_option("file", ui_file, "uiautomator XML")->required();

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("ctxmonkey");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*generate) return CmdGenerate(gen_meta, gen_cfg, gen_out, out, err);
        if (*run) return CmdRun(run_flags, out, err);
        if (*analyze) return CmdAnalyze(analyze_flags, out, err);
        if (*report) return CmdReport(report_flags, out);
        if (*ui_parse) return CmdUiParse(ui_file, out);
    } catch (const DeviceError& e) {
        fmt::print(err, "device error: {}\n", e.what());
        return kExitDevice;
    } catch (const ConfigError& e) {
        fmt::print(err, "config error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace ctxmonkey
