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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eqsim/core.hpp"
#include "eqsim/tomography.hpp"

namespace eqsim {

/// Version tag every scenario file must carry in its `schema` key.
inline constexpr const char *kScenarioSchema = "eqsim-scenario/1";
inline constexpr const char *kManifestSchema = "eqsim-manifest/1";

enum class ScenarioKind { PlaneWaves, Packet, Hardware };

std::string to_string(ScenarioKind kind);

struct TimeSpan {
    double start = 0.0;
    double end = 8.0;
    double dt = 0.05;

    /// start, start + dt, ..., end (end must be reached to 1e-9 dt).
    std::vector<double> samples() const;
};

struct GridSpec {
    std::size_t points = 65;
    double p_max = 4.0;
};

struct ScheduledOp {
    SymmetryLabel label = SymmetryLabel::T;
    double time = 0.0;
};

/// Emulated measurement. Error-bar series are produced every `stride`-th
/// sample from `runs` repetitions of `shots` shots per Pauli setting.
struct TomographySpec {
    bool enabled = false;
    std::uint64_t shots = kDefaultShots;
    std::size_t runs = 20;
    std::size_t stride = 10;
};

/// Target and sweep of the microwave calibration scenario. Frequencies in Hz.
struct HardwareSpec {
    double p = 1.0;
    double m = 1.0;
    double energy_unit_hz = 2.0e3;
    double raman_detuning_hz = 200.0e3;
    double cross_coupling = 0.0;
    std::vector<double> ratios{0.2, 0.1, 0.05};
};

struct Scenario {
    std::string name;
    std::string description;
    /// Where the text came from: `builtin:<name>` or a file path.
    std::string source;
    ScenarioKind kind = ScenarioKind::PlaneWaves;
    double mass = 1.0;
    TimeSpan time;
    std::uint64_t seed = 2017;

    /// Plane waves: one run per momentum, all sharing `spinor`.
    std::vector<double> momenta;
    Spinor spinor = Spinor(1.0, 0.0);
    /// Global phase of the partner state for `fidelity`.
    double theta = 1.5707963267948966;
    /// Times at which tomographic density matrices are written.
    std::vector<double> density_times;

    /// Packets.
    GridSpec grid;
    GaussianPacket packet;
    std::vector<ScheduledOp> schedule;
    std::vector<double> snapshots;

    std::vector<std::string> observables;
    TomographySpec tomography;
    HardwareSpec hardware;

    /// Throws Error(Config) naming the offending field.
    void validate() const;
};

/// Observables accepted by each kind.
std::vector<std::string> known_observables(ScenarioKind kind);

/// Parses YAML text. Errors are Error(Config) with a `field.path: message`
/// description.
Scenario parse_scenario(const std::string &text, const std::string &source);

/// Built-in name first, then a file path. Unknown names raise UnknownScenario.
Scenario load_scenario(const std::string &name_or_path);

std::vector<std::string> builtin_scenario_names();
/// Throws UnknownScenario.
const std::string &builtin_scenario_text(const std::string &name);

struct InvariantCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct RunResult {
    std::filesystem::path out_dir;
    /// Written files, relative to out_dir, in write order.
    std::vector<std::string> files;
    std::vector<InvariantCheck> invariants;

    bool invariants_passed() const;
};

/// Runs the scenario and writes CSV series, snapshots, manifest.json and
/// timings.json into out_dir. All outputs except timings.json are
/// byte-identical for identical scenario and seed. Invariant failures are
/// recorded, not thrown.
RunResult run_scenario(const Scenario &scenario, const std::filesystem::path &out_dir);

/// Plane-wave observable from the internal density matrix of mode +p:
/// (1/2) [Tr(S(p) M rho M^dag) + Tr(S(-p) M rho^* M^dag)], the mode -p
/// carrying the conjugate amplitude.
double plane_wave_expectation(const Matrix4c &rho, double p, const Matrix2c &sigma_p, const Matrix2c &sigma_minus_p);

/// Charge operator |u+><u+| - |u-><u-| of the Dirac basis at p.
Matrix2c charge_operator(double p, double m);

}  // namespace eqsim
