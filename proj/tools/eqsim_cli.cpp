// Copyright 2026 The eqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// eqsim command-line driver. Exit codes: 0 success, 1 runtime error,
// 2 configuration error, 3 invariant failure.
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "eqsim/eqsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct ScenarioDeleter {
    void operator()(eqsim_scenario *s) const { eqsim_scenario_free(s); }
};
using ScenarioHandle = std::unique_ptr<eqsim_scenario, ScenarioDeleter>;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> grid_points;
    std::optional<std::uint64_t> shots;
};

int exit_code(eqsim_status status) {
    switch (status) {
        case EQSIM_OK:
            return kExitOk;
        case EQSIM_ERR_CONFIG:
        case EQSIM_ERR_UNKNOWN_SCENARIO:
            return kExitConfig;
        case EQSIM_ERR_INVARIANT:
            return kExitInvariant;
        default:
            return kExitRuntime;
    }
}

int report(eqsim_status status) {
    std::fprintf(stderr, "eqsim: %s: %s\n", eqsim_status_name(status), eqsim_last_error());
    return exit_code(status);
}

/// Loads the scenario and applies command-line overrides; returns an exit code.
int prepare(const std::string &target, const Overrides &overrides, ScenarioHandle &out) {
    eqsim_scenario *raw = nullptr;
    eqsim_status status = eqsim_scenario_load(target.c_str(), &raw);
    if (status != EQSIM_OK) return report(status);
    out.reset(raw);
    if (overrides.seed && (status = eqsim_scenario_set_seed(raw, *overrides.seed)) != EQSIM_OK) return report(status);
    if (overrides.grid_points && (status = eqsim_scenario_set_grid_points(raw, *overrides.grid_points)) != EQSIM_OK) {
        return report(status);
    }
    if (overrides.shots && (status = eqsim_scenario_set_shots(raw, *overrides.shots)) != EQSIM_OK) {
        return report(status);
    }
    if ((status = eqsim_scenario_validate(raw)) != EQSIM_OK) return report(status);
    return kExitOk;
}

int cmd_list() {
    for (std::size_t i = 0; i < eqsim_scenario_count(); ++i) {
        const char *name = eqsim_scenario_name(i);
        eqsim_scenario *raw = nullptr;
        const eqsim_status status = eqsim_scenario_load(name, &raw);
        if (status != EQSIM_OK) return report(status);
        ScenarioHandle s(raw);
        std::printf("%-22s %-12s %s\n", name, eqsim_scenario_get_kind(raw), eqsim_scenario_get_description(raw));
    }
    return kExitOk;
}

int cmd_validate(const std::string &target, const Overrides &overrides) {
    ScenarioHandle s;
    if (const int code = prepare(target, overrides, s); code != kExitOk) return code;
    std::printf("%s: ok\n", eqsim_scenario_get_name(s.get()));
    return kExitOk;
}

int cmd_run(const std::string &target, const Overrides &overrides, std::string out_dir) {
    ScenarioHandle s;
    if (const int code = prepare(target, overrides, s); code != kExitOk) return code;
    if (out_dir.empty()) out_dir = std::string("eqsim-out/") + eqsim_scenario_get_name(s.get());
    int passed = 0;
    const eqsim_status status = eqsim_scenario_run(s.get(), out_dir.c_str(), &passed);
    if (status != EQSIM_OK) return report(status);
    if (!passed) {
        std::fprintf(stderr, "eqsim: invariant check failed; see %s/manifest.json\n", out_dir.c_str());
        return kExitInvariant;
    }
    std::printf("%s: wrote %s\n", eqsim_scenario_get_name(s.get()), out_dir.c_str());
    return kExitOk;
}

void add_overrides(CLI::App *cmd, Overrides &o) {
    cmd->add_option("--seed", o.seed, "RNG seed for emulated tomography");
    cmd->add_option("--grid-points", o.grid_points, "Momentum grid size (packet scenarios, odd)");
    cmd->add_option("--shots", o.shots, "Shots per Pauli setting (scenarios with tomography)");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Majorana dynamics in an enlarged Dirac space"};
    app.set_version_flag("--version", std::string(eqsim_version()));
    app.require_subcommand(1);

    CLI::App *list = app.add_subcommand("list", "List built-in scenarios");

    std::string target;
    Overrides overrides;
    std::string out_dir;

    CLI::App *run = app.add_subcommand("run", "Run a scenario and write CSV series and a JSON manifest");
    run->add_option("scenario", target, "Built-in name or YAML file")->required();
    run->add_option("--out-dir", out_dir, "Output directory (default eqsim-out/<name>)");
    add_overrides(run, overrides);

    CLI::App *validate = app.add_subcommand("validate", "Check a scenario without writing files");
    validate->add_option("scenario", target, "Built-in name or YAML file")->required();
    add_overrides(validate, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (*list) return cmd_list();
    if (*validate) return cmd_validate(target, overrides);
    return cmd_run(target, overrides, out_dir);
}
