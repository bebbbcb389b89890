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

#include "eqsim/hardware.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "eqsim/dynamics.hpp"
#include "eqsim/error.hpp"

namespace eqsim {

namespace {

constexpr double kNearResonance = 1e-3;
constexpr int kMaxCalibrationIterations = 50;
constexpr double kCalibrationTolerance = 1e-13;

bool finite(double x) { return std::isfinite(x); }

/// E_j - w_hf for j = 1..4. Level 1 is far below and never needed here.
double level_offset(const IonLevels &levels, int level) {
    switch (level) {
        case 2:
            return -levels.omega_z;
        case 3:
            return levels.omega_q;
        case 4:
            return levels.omega_z;
        default:
            fail(ErrorCode::InvalidArgument, "level offset is defined for levels 2..4");
    }
}

/// nu = E_j - w_n for every tone and transition, from frequency offsets.
double drive_detuning(const DriveConfig &cfg, const IonLevels &levels, int tone, int level) {
    return level_offset(levels, level) - cfg.frequency_offsets(levels)[static_cast<std::size_t>(tone - 1)];
}

std::string format_history(const std::vector<double> &history) {
    std::ostringstream out;
    out << "residual history [rad/s]:";
    for (double r : history) {
        out << ' ' << r;
    }
    return out.str();
}

}  // namespace

IonLevels IonLevels::yb171() { return {kTwoPi * 12.642e9, kTwoPi * 13.5855e6, kTwoPi * 15.5e3}; }

double IonLevels::energy(int level) const {
    switch (level) {
        case 1:
            return 0.0;
        case 2:
            return omega_hf - omega_z;
        case 3:
            return omega_hf + omega_q;
        case 4:
            return omega_hf + omega_z;
        default:
            fail(ErrorCode::InvalidArgument, "ion levels are numbered 1..4");
    }
}

void IonLevels::validate() const {
    if (!finite(omega_hf) || !finite(omega_z) || !finite(omega_q)) {
        fail(ErrorCode::NonFinite, "ion level splittings must be finite");
    }
    require(omega_hf > omega_z && omega_z > omega_q && omega_q > 0.0,
            "ion levels need w_hf > w_z > w_q > 0");
}

std::array<double, 6> DriveConfig::frequency_offsets(const IonLevels &levels) const {
    const double z = levels.omega_z;
    const double q = levels.omega_q;
    const double d = raman_detuning;
    return {-z - detuning[0], z - detuning[1], -z - d, q - d - detuning[2], q + d, z + d - detuning[3]};
}

std::array<double, 6> DriveConfig::frequencies(const IonLevels &levels) const {
    std::array<double, 6> out = frequency_offsets(levels);
    for (double &w : out) {
        w += levels.omega_hf;
    }
    return out;
}

void DriveConfig::validate() const {
    if (!finite(raman_detuning)) {
        fail(ErrorCode::NonFinite, "Raman detuning must be finite");
    }
    require(raman_detuning > 0.0, "Raman detuning must be positive");
    for (double d : detuning) {
        if (!finite(d)) fail(ErrorCode::NonFinite, "detunings must be finite");
    }
    for (const auto &row : rabi) {
        for (double r : row) {
            if (!finite(r)) fail(ErrorCode::NonFinite, "Rabi frequencies must be finite");
            require(r >= 0.0, "Rabi frequencies must be non-negative");
        }
    }
    for (double ph : phase) {
        if (!finite(ph)) fail(ErrorCode::NonFinite, "tone phases must be finite");
    }
}

int intended_level(int tone) {
    static constexpr std::array<int, 6> kLevels{2, 4, 2, 3, 3, 4};
    require(tone >= 1 && tone <= 6, "tones are numbered 1..6");
    return kLevels[static_cast<std::size_t>(tone - 1)];
}

StarkShifts stark_shifts(const DriveConfig &cfg, const IonLevels &levels) {
    cfg.validate();
    levels.validate();
    const double z = levels.omega_z;
    const double q = levels.omega_q;
    const double D = cfg.raman_detuning;
    const auto &d = cfg.detuning;
    struct Entry {
        int tone;
        int level;
        double denominator;
    };
    const std::array<Entry, 16> table{{
        {1, 3, z + q + d[0]},
        {1, 4, 2.0 * z + d[0]},
        {2, 2, -(2.0 * z - d[1])},
        {2, 3, -(z - q - d[1])},
        {3, 2, D},
        {3, 3, z + q + D},
        {3, 4, 2.0 * z + D},
        {4, 2, -(z - D + q - d[2])},
        {4, 3, D + d[2]},
        {4, 4, z - q + D + d[2]},
        {5, 2, -(z + q + D)},
        {5, 3, -D},
        {5, 4, z - q - D},
        {6, 2, -(2.0 * z + D - d[3])},
        {6, 3, -(z + D - q - d[3])},
        {6, 4, -(D - d[3])},
    }};
    StarkShifts out;
    for (const Entry &e : table) {
        const double rabi = cfg.rabi_of(e.tone, e.level);
        if (rabi == 0.0) {
            continue;
        }
        if (std::abs(e.denominator) < kNearResonance * z) {
            fail(ErrorCode::InvalidArgument, "tone " + std::to_string(e.tone) + " is near resonance with 1<->" +
                                                 std::to_string(e.level) + "; the Stark expansion does not apply");
        }
        const double shift = rabi * rabi / (4.0 * e.denominator);
        out.terms.push_back({e.tone, e.level, rabi, e.denominator, shift});
        out.omega[static_cast<std::size_t>(e.level - 1)] += shift;
        out.omega[0] -= shift;
    }
    return out;
}

std::array<double, 4> detuning_residuals(const DriveConfig &cfg, const IonLevels &levels) {
    const auto st = stark_shifts(cfg, levels).omega;
    const std::array<double, 4> target{st[0] - st[1], st[0] - st[3], st[1] - st[2], st[2] - st[3]};
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = cfg.detuning[i] - target[i];
    }
    return out;
}

DetuningSolution solve_detunings(const DriveConfig &cfg, const IonLevels &levels) {
    DetuningSolution sol;
    sol.config = cfg;
    sol.config.detuning = {};
    for (int it = 1; it <= kMaxDetuningIterations; ++it) {
        std::array<double, 4> r{};
        try {
            r = detuning_residuals(sol.config, levels);
        } catch (const Error &e) {
            if (it == 1 || e.code() != ErrorCode::InvalidArgument) throw;
            fail(ErrorCode::NotConverged, "detuning iterate ran into resonance; " + format_history(sol.residual_history));
        }
        double change = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            const double next = sol.config.detuning[i] - r[i];
            change = std::max(change, std::abs(r[i]));
            scale = std::max(scale, std::abs(next));
            sol.config.detuning[i] = next;
        }
        sol.iterations = it;
        double residual = 0.0;
        try {
            for (double x : detuning_residuals(sol.config, levels)) {
                residual = std::max(residual, std::abs(x));
            }
        } catch (const Error &e) {
            if (e.code() != ErrorCode::InvalidArgument) throw;
            fail(ErrorCode::NotConverged, "detuning iterate ran into resonance; " + format_history(sol.residual_history));
        }
        sol.residual_history.push_back(residual);
        sol.residual = residual;
        if (change <= kDetuningRelativeTolerance * scale) {
            if (residual > kDetuningRelativeTolerance * levels.omega_z) {
                fail(ErrorCode::NotConverged, "detunings stalled above tolerance; " + format_history(sol.residual_history));
            }
            return sol;
        }
    }
    fail(ErrorCode::NotConverged, "detuning fixed point did not converge in " +
                                      std::to_string(kMaxDetuningIterations) + " iterations; " +
                                      format_history(sol.residual_history));
}

EffectiveCouplings effective_couplings(const DriveConfig &cfg) {
    cfg.validate();
    const double D = cfg.raman_detuning;
    EffectiveCouplings c;
    c.c12 = cfg.rabi_of(1, 2);
    c.c14 = cfg.rabi_of(2, 4);
    c.c23 = cfg.rabi_of(3, 2) * cfg.rabi_of(4, 3) / 4.0 * (1.0 / D + 1.0 / (D + cfg.detuning[2]));
    c.c34 = -cfg.rabi_of(5, 3) * cfg.rabi_of(6, 4) / 4.0 * (1.0 / D + 1.0 / (D - cfg.detuning[3]));
    return c;
}

EffectiveHamiltonian effective_hamiltonian(const DriveConfig &cfg, const IonLevels &levels) {
    levels.validate();
    EffectiveHamiltonian out;
    out.couplings = effective_couplings(cfg);
    const auto &ph = cfg.phase;
    Matrix4c h = Matrix4c::Zero();
    h(0, 1) = 0.5 * out.couplings.c12 * std::polar(1.0, ph[0]);
    h(0, 3) = 0.5 * out.couplings.c14 * std::polar(1.0, ph[1]);
    h(1, 2) = 0.5 * out.couplings.c23 * std::polar(1.0, ph[3] - ph[2]);
    h(2, 3) = 0.5 * out.couplings.c34 * std::polar(1.0, ph[5] - ph[4]);
    out.matrix = h + h.adjoint();

    // Pairs of off-resonant terms linking two excited levels at a small
    // difference frequency.
    const auto residual = [&](int ta, int ja, int tb, int jb) {
        const double na = drive_detuning(cfg, levels, ta, ja);
        const double nb = drive_detuning(cfg, levels, tb, jb);
        ResidualTerm r;
        r.label = "tones " + std::to_string(ta) + "," + std::to_string(tb) + " on |" + std::to_string(ja) + "><" +
                  std::to_string(jb) + "|";
        r.row = ja;
        r.col = jb;
        r.amplitude = cfg.rabi_of(ta, ja) * cfg.rabi_of(tb, jb) / 8.0 * (1.0 / na + 1.0 / nb);
        r.frequency = nb - na;
        out.residuals.push_back(r);
    };
    residual(3, 3, 4, 4);
    residual(5, 2, 6, 3);
    return out;
}

Calibration calibrate(double p, double m, double raman_detuning, const IonLevels &levels,
                      const CalibrationOptions &options) {
    levels.validate();
    if (!finite(p) || !finite(m) || !finite(raman_detuning) || !finite(options.energy_unit) ||
        !finite(options.cross_coupling)) {
        fail(ErrorCode::NonFinite, "calibration inputs must be finite");
    }
    require(m >= 0.0, "mass must be non-negative");
    require(raman_detuning > 0.0, "Raman detuning must be positive");
    require(options.energy_unit > 0.0, "energy unit must be positive");
    require(options.cross_coupling >= 0.0 && options.cross_coupling < 1.0, "cross coupling must lie in [0, 1)");
    const double eps = options.energy_unit;
    const double cp = 2.0 * std::abs(p) * eps;
    const double cm = 2.0 * m * eps;
    if (std::max(cp, cm) > raman_detuning / 10.0) {
        fail(ErrorCode::InvalidArgument, "target couplings exceed a tenth of the Raman detuning");
    }

    Calibration cal;
    cal.target = eps * enlarged_hamiltonian(p, m);
    DriveConfig cfg;
    cfg.raman_detuning = raman_detuning;
    cfg.phase = {p < 0.0 ? std::numbers::pi : 0.0, std::numbers::pi / 2.0, 0.0, -std::numbers::pi / 2.0, 0.0,
                 p < 0.0 ? 0.0 : std::numbers::pi};

    const auto set_tone = [&](int tone, double amplitude) {
        for (int j = 2; j <= 4; ++j) {
            cfg.rabi_of(tone, j) = j == intended_level(tone) ? amplitude : options.cross_coupling * amplitude;
        }
    };
    std::array<double, 4> detuning{};
    double previous = -1.0;
    for (int it = 1;; ++it) {
        const double D = raman_detuning;
        const double raman23 = std::sqrt(8.0 * m * eps / (1.0 / D + 1.0 / (D + detuning[2])));
        const double raman34 = std::sqrt(8.0 * std::abs(p) * eps / (1.0 / D + 1.0 / (D - detuning[3])));
        set_tone(1, cp);
        set_tone(2, cm);
        set_tone(3, raman23);
        set_tone(4, raman23);
        set_tone(5, raman34);
        set_tone(6, raman34);
        const DetuningSolution sol = solve_detunings(cfg, levels);
        cfg.detuning = sol.config.detuning;
        detuning = cfg.detuning;
        cal.detuning_residual = sol.residual;
        cal.outer_iterations = it;
        const double amplitude = raman23 + raman34;
        if (std::abs(amplitude - previous) <= kCalibrationTolerance * std::max(amplitude, 1.0)) {
            break;
        }
        if (it == kMaxCalibrationIterations) {
            fail(ErrorCode::NotConverged, "calibration amplitudes did not settle");
        }
        previous = amplitude;
    }
    cal.config = cfg;
    cal.achieved = effective_hamiltonian(cfg, levels);
    const double scale = cal.target.cwiseAbs().maxCoeff();
    const double diff = (cal.achieved.matrix - cal.target).cwiseAbs().maxCoeff();
    cal.relative_error = scale > 0.0 ? diff / scale : diff;
    return cal;
}

double max_drive_step(const DriveConfig &cfg, const IonLevels &levels) {
    double nu_max = levels.omega_z;
    for (int n = 1; n <= 6; ++n) {
        for (int j = 2; j <= 4; ++j) {
            if (cfg.rabi_of(n, j) != 0.0) {
                nu_max = std::max(nu_max, std::abs(drive_detuning(cfg, levels, n, j)));
            }
        }
    }
    return kTwoPi / (50.0 * nu_max);
}

FullDriveResult simulate_full_drive(const DriveConfig &cfg, const IonLevels &levels, const Matrix4c &ideal_hamiltonian,
                                    const Bispinor &chi0, double t, double dt, std::size_t samples) {
    cfg.validate();
    levels.validate();
    if (!finite(t) || !finite(dt) || !chi0.allFinite() || !ideal_hamiltonian.allFinite()) {
        fail(ErrorCode::NonFinite, "drive simulation inputs must be finite");
    }
    require(t > 0.0 && dt > 0.0, "duration and step must be positive");
    require(samples >= 1, "at least one checkpoint is required");
    require(std::abs(chi0.squaredNorm() - 1.0) < 1e-10, "initial state must be normalised");
    require(hermiticity_defect(ideal_hamiltonian) < 1e-9 * std::max(1.0, ideal_hamiltonian.cwiseAbs().maxCoeff()),
            "ideal Hamiltonian must be Hermitian");
    const double limit = max_drive_step(cfg, levels);
    if (dt > limit) {
        fail(ErrorCode::InvalidArgument, "step exceeds 2 pi / (50 nu_max) = " + std::to_string(limit) + " s");
    }

    struct Term {
        int index;
        double half_rabi;
        double phase;
        double nu;
    };
    std::vector<Term> terms;
    for (int n = 1; n <= 6; ++n) {
        for (int j = 2; j <= 4; ++j) {
            const double rabi = cfg.rabi_of(n, j);
            if (rabi != 0.0) {
                terms.push_back({j - 1, 0.5 * rabi, cfg.phase[static_cast<std::size_t>(n - 1)],
                                 drive_detuning(cfg, levels, n, j)});
            }
        }
    }
    const auto derivative = [&](double time, const Bispinor &psi) {
        std::array<cplx, 4> g{};
        for (const Term &term : terms) {
            g[static_cast<std::size_t>(term.index)] += term.half_rabi * std::polar(1.0, term.phase - term.nu * time);
        }
        Bispinor out = Bispinor::Zero();
        for (int k = 1; k < 4; ++k) {
            out(0) += g[static_cast<std::size_t>(k)] * psi(k);
            out(k) = std::conj(g[static_cast<std::size_t>(k)]) * psi(0);
        }
        return Bispinor(-kI * out);
    };

    const std::array<double, 4> st = stark_shifts(cfg, levels).omega;
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(0.5 * (ideal_hamiltonian + ideal_hamiltonian.adjoint()));
    const Bispinor coeffs = solver.eigenvectors().adjoint() * chi0;
    const auto ideal_at = [&](double time) {
        Bispinor phased;
        for (int k = 0; k < 4; ++k) {
            phased(k) = coeffs(k) * std::polar(1.0, -solver.eigenvalues()(k) * time);
        }
        return Bispinor(solver.eigenvectors() * phased);
    };
    const auto rotate = [&](const Bispinor &psi, double time) {
        Bispinor out;
        for (int k = 0; k < 4; ++k) {
            out(k) = psi(k) * std::polar(1.0, st[static_cast<std::size_t>(k)] * time);
        }
        return out;
    };

    FullDriveResult res;
    res.steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
    res.dt = t / static_cast<double>(res.steps);
    const std::size_t checkpoints = std::min(samples, res.steps);
    Bispinor psi = chi0;
    std::size_t next_checkpoint = 1;
    double infidelity_sum = 0.0;
    for (std::size_t s = 0; s < res.steps; ++s) {
        const double time = static_cast<double>(s) * res.dt;
        const double h = res.dt;
        const Bispinor k1 = derivative(time, psi);
        const Bispinor k2 = derivative(time + 0.5 * h, psi + 0.5 * h * k1);
        const Bispinor k3 = derivative(time + 0.5 * h, psi + 0.5 * h * k2);
        const Bispinor k4 = derivative(time + h, psi + h * k3);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((s + 1) * checkpoints >= next_checkpoint * res.steps) {
            const double now = static_cast<double>(s + 1) * res.dt;
            const double infidelity = 1.0 - std::norm(ideal_at(now).dot(rotate(psi, now)));
            infidelity_sum += infidelity;
            res.max_infidelity = std::max(res.max_infidelity, infidelity);
            ++next_checkpoint;
        }
    }
    if (!psi.allFinite()) {
        fail(ErrorCode::NonFinite, "drive simulation diverged");
    }
    res.state = rotate(psi, t);
    res.ideal = ideal_at(t);
    res.fidelity = std::norm(res.ideal.dot(res.state));
    res.mean_infidelity = infidelity_sum / static_cast<double>(next_checkpoint - 1);
    return res;
}

void write_tone_table(std::ostream &out, const DriveConfig &cfg, const IonLevels &levels) {
    cfg.validate();
    const auto freqs = cfg.frequencies(levels);
    out << "tone,frequency_hz,amplitude_rad_s,phase_rad\n";
    char line[160];
    for (int n = 1; n <= 6; ++n) {
        std::snprintf(line, sizeof line, "%d,%.17e,%.17e,%.17e\n", n, freqs[static_cast<std::size_t>(n - 1)] / kTwoPi,
                      cfg.rabi_of(n, intended_level(n)), cfg.phase[static_cast<std::size_t>(n - 1)]);
        out << line;
    }
    if (!out) {
        fail(ErrorCode::Io, "failed to write tone table");
    }
}

AwgReport awg_band_check(const DriveConfig &cfg, const IonLevels &levels, double tolerance_hz) {
    AwgReport report;
    report.within_band = true;
    const double base = levels.omega_hf / kTwoPi - kAwgLocalOscillatorHz;
    const auto offsets = cfg.frequency_offsets(levels);
    for (std::size_t n = 0; n < 6; ++n) {
        report.offset_hz[n] = base + offsets[n] / kTwoPi;
        report.within_band &= report.offset_hz[n] >= kAwgBandLowHz - tolerance_hz &&
                              report.offset_hz[n] <= kAwgBandHighHz + tolerance_hz;
    }
    return report;
}

}  // namespace eqsim
