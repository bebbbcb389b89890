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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

#include "eqsim/linalg.hpp"

namespace eqsim {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Levels |1..4> of the 171Yb+ ground-state manifold, energies in rad/s:
/// E1 = 0, E2 = w_hf - w_z, E3 = w_hf + w_q, E4 = w_hf + w_z.
struct IonLevels {
    double omega_hf = 0.0;
    double omega_z = 0.0;
    double omega_q = 0.0;

    /// w_hf = 2 pi 12.642 GHz, w_z = 2 pi 13.5855 MHz, w_q = 2 pi 15.5 kHz.
    static IonLevels yb171();

    /// Energy of level 1..4.
    double energy(int level) const;
    /// Requires w_hf > w_z > w_q > 0.
    void validate() const;
};

/// Magnetic field of the experiment in gauss.
inline constexpr double kMagneticFieldGauss = 9.694;
/// Microwave local oscillator mixed with the AWG output, Hz.
inline constexpr double kAwgLocalOscillatorHz = 12442.8213e6;
inline constexpr double kAwgBandLowHz = 186e6;
inline constexpr double kAwgBandHighHz = 214e6;

/// Six-tone microwave program. Tone n (1..6) has frequency
///   w1 = E2 - d1,  w2 = E4 - d2,  w3 = E2 - D,
///   w4 = E3 - D - d3,  w5 = E3 + D,  w6 = E4 + D - d4,
/// and drives every 1 <-> j transition (j = 2..4) with Rabi amplitude
/// rabi[n-1][j-2] and phase phase[n-1].
struct DriveConfig {
    double raman_detuning = 0.0;
    std::array<double, 4> detuning{};
    std::array<std::array<double, 3>, 6> rabi{};
    std::array<double, 6> phase{};

    double rabi_of(int tone, int level) const { return rabi[static_cast<std::size_t>(tone - 1)][static_cast<std::size_t>(level - 2)]; }
    double &rabi_of(int tone, int level) { return rabi[static_cast<std::size_t>(tone - 1)][static_cast<std::size_t>(level - 2)]; }

    /// w_1..w_6 in rad/s.
    std::array<double, 6> frequencies(const IonLevels &levels) const;
    /// The same as offsets from w_hf, which keeps full precision for the small
    /// detunings.
    std::array<double, 6> frequency_offsets(const IonLevels &levels) const;

    /// Non-negative finite amplitudes, positive Raman detuning.
    void validate() const;
};

/// One second-order Stark term: tone n on transition 1 <-> j shifts level j by
/// +shift and level 1 by -shift, with shift = Omega^2 / (4 denominator).
struct StarkTerm {
    int tone = 0;
    int level = 0;
    double rabi = 0.0;
    double denominator = 0.0;
    double shift = 0.0;
};

struct StarkShifts {
    /// w_st^(1..4) in rad/s.
    std::array<double, 4> omega{};
    std::vector<StarkTerm> terms;
};

/// Sum of the sixteen off-resonant Stark terms (tone 1 on 1<->2 and tone 2 on
/// 1<->4 are the resonant carriers and carry no shift). Throws
/// InvalidArgument if any denominator is within 1e-3 w_z of zero.
StarkShifts stark_shifts(const DriveConfig &cfg, const IonLevels &levels);

/// d1 = st1 - st2, d2 = st1 - st4, d3 = st2 - st3, d4 = st3 - st4.
std::array<double, 4> detuning_residuals(const DriveConfig &cfg, const IonLevels &levels);

struct DetuningSolution {
    DriveConfig config;
    int iterations = 0;
    /// Max |residual| after each iteration, rad/s.
    std::vector<double> residual_history;
    double residual = 0.0;
};

inline constexpr int kMaxDetuningIterations = 100;
inline constexpr double kDetuningRelativeTolerance = 1e-9;

/// Fixed-point iteration d <- d(st(d)) from d = 0 until the largest relative
/// change is below 1e-9. Throws NotConverged (with the residual history in
/// the message) after 100 iterations or if the final residual exceeds
/// 1e-9 w_z.
DetuningSolution solve_detunings(const DriveConfig &cfg, const IonLevels &levels);

struct EffectiveCouplings {
    double c12 = 0.0;
    double c14 = 0.0;
    double c23 = 0.0;
    double c34 = 0.0;
};

/// Couplings with frequencies far below D that were dropped from the static
/// Hamiltonian: they oscillate at about 2 w_q.
struct ResidualTerm {
    std::string label;
    int row = 0;
    int col = 0;
    double amplitude = 0.0;
    double frequency = 0.0;
};

struct EffectiveHamiltonian {
    /// Static Hamiltonian in the frame rotating with H_A + H_st, rad/s.
    Matrix4c matrix;
    EffectiveCouplings couplings;
    std::vector<ResidualTerm> residuals;
};

EffectiveCouplings effective_couplings(const DriveConfig &cfg);
EffectiveHamiltonian effective_hamiltonian(const DriveConfig &cfg, const IonLevels &levels);

/// Default energy unit: 1 dimensionless energy = 2 pi 2 kHz.
inline constexpr double kDefaultEnergyUnit = kTwoPi * 2.0e3;

struct CalibrationOptions {
    double energy_unit = kDefaultEnergyUnit;
    /// Amplitude with which each tone also drives the two unintended
    /// transitions, relative to its intended one.
    double cross_coupling = 0.0;
};

struct Calibration {
    DriveConfig config;
    /// H_p scaled by the energy unit, rad/s.
    Matrix4c target;
    EffectiveHamiltonian achieved;
    /// max |achieved - target| / max |target|.
    double relative_error = 0.0;
    double detuning_residual = 0.0;
    int outer_iterations = 0;
};

/// Chooses tone amplitudes and phases so the effective Hamiltonian equals
/// epsilon H_p: carriers Omega_12^(1) = 2|p| eps, Omega_14^(2) = 2 m eps, and
/// equal Rabi rates inside each Raman pair (3,4) and (5,6). Phases
/// phi1 = 0 (pi for p < 0), phi2 = pi/2, phi4 - phi3 = -pi/2 and
/// phi6 - phi5 = pi (0 for p < 0) since the (5,6) coupling is negative.
/// Amplitudes and detunings are iterated to a joint fixed point. Rejects
/// targets whose couplings exceed D / 10.
Calibration calibrate(double p, double m, double raman_detuning, const IonLevels &levels,
                      const CalibrationOptions &options = {});

/// Largest RK4 step: 2 pi / (50 nu_max), nu_max being the fastest retained
/// drive frequency and at least w_z.
double max_drive_step(const DriveConfig &cfg, const IonLevels &levels);

struct FullDriveResult {
    /// Simulated state in the frame rotating with H_A + H_st.
    Bispinor state;
    Bispinor ideal;
    double fidelity = 0.0;
    double mean_infidelity = 0.0;
    double max_infidelity = 0.0;
    std::size_t steps = 0;
    double dt = 0.0;
};

/// RK4 integration of the six-tone drive in the interaction picture of H_A,
/// keeping the co-rotating term of every (tone, transition) pair. The state is
/// moved into the H_st frame and compared with exp(-i H_ideal t) chi0.
/// Infidelity statistics use `samples` evenly spaced checkpoints.
FullDriveResult simulate_full_drive(const DriveConfig &cfg, const IonLevels &levels, const Matrix4c &ideal_hamiltonian,
                                    const Bispinor &chi0, double t, double dt, std::size_t samples = 400);

/// CSV with header `tone,frequency_hz,amplitude_rad_s,phase_rad`, one row per
/// tone in order 1..6; amplitude is the intended-transition Rabi rate.
void write_tone_table(std::ostream &out, const DriveConfig &cfg, const IonLevels &levels);

struct AwgReport {
    /// Tone frequency minus the local oscillator, Hz.
    std::array<double, 6> offset_hz{};
    bool within_band = false;
};

AwgReport awg_band_check(const DriveConfig &cfg, const IonLevels &levels, double tolerance_hz = 0.0);

/// The transition each tone is meant to drive (2, 4, 2, 3, 3, 4).
int intended_level(int tone);

}  // namespace eqsim
