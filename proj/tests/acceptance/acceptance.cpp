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

// Acceptance gate: one PASS/FAIL line per criterion with its runtime.
// Exit status is non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "eqsim/dynamics.hpp"
#include "eqsim/hardware.hpp"
#include "eqsim/observables.hpp"
#include "eqsim/tomography.hpp"

namespace {

using namespace eqsim;

struct Verdict {
    bool pass = false;
    std::string detail;
    /// Wall-clock budget in seconds; 0 means none.
    double budget = 0.0;
};

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

double plane_wave_charge(double p, double m, double t) {
    return charge(recover(evolve(embed(MajoranaState::plane_wave(p, Spinor(1.0, 0.0))), m, t)), m);
}

Verdict ac1() {
    double dc = 0.0, df = 0.0, dorth = 0.0;
    for (double t : linspace(0.0, 8.0, 801)) {
        dc = std::max(dc, std::abs(plane_wave_charge(0.0, 1.0, t) - std::cos(2.0 * t)));
        df = std::max(df, std::abs(fidelity_global_phase(0.0, 1.0, std::numbers::pi / 2, t) - std::pow(std::cos(2.0 * t), 2)));
        dorth = std::max(dorth, std::abs(orthogonality(0.0, 1.0, t, OrthogonalVariant::Opposite) - std::pow(std::sin(2.0 * t), 2)));
    }
    const double tol = 1e-8;
    return {dc < tol && df < tol && dorth < tol,
            fmt("max dev charge %.1e, fidelity %.1e, orthogonality %.1e (tol 1e-8, 801 times)", dc, df, dorth), 1.0};
}

Verdict ac2() {
    const std::vector<double> times = linspace(0.0, 8.0, 801);
    bool pass = true;
    std::string detail;
    double amplitude[2] = {0.0, 0.0};
    const double momenta[2] = {0.5, 1.0};
    for (int k = 0; k < 2; ++k) {
        const double p = momenta[k];
        const EnlargedState initial = embed(MajoranaState::plane_wave(p, Spinor(1.0, 0.0)));
        std::vector<double> values;
        for (double t : times) values.push_back(mean_momentum(evolve(initial, 1.0, t)));
        const OscillationFit fit = fit_oscillation(times, values);
        const double expected = 2.0 * std::sqrt(p * p + 1.0);
        const double rel = std::abs(fit.omega - expected) / expected;
        amplitude[k] = std::abs(fit.amplitude);
        pass = pass && rel < 5e-3;
        detail += fmt("p=%.1f: omega %.6f vs %.6f (rel %.1e), amplitude %.4f (%.4f of p); ", p, fit.omega, expected, rel,
                      amplitude[k], amplitude[k] / p);
    }
    const bool ordered = amplitude[0] > amplitude[1];
    detail += fmt("amplitude(0.5) > amplitude(1): %s", ordered ? "yes" : "no");
    return {pass && ordered, detail};
}

Verdict ac3() {
    double worst = 0.0;
    for (double t : linspace(0.0, 8.0, 160)) {
        worst = std::max(worst, orthogonality(1.0, 1.0, t, OrthogonalVariant::Same));
    }
    return {worst < 1e-10, fmt("max overlap %.1e over 160 times, p = m = 1 (tol 1e-10)", worst)};
}

Verdict ac4() {
    const MomentumAxis axis = MomentumAxis::grid(65, 4.0);
    const MajoranaState psi0 = MajoranaState::gaussian(axis, GaussianPacket{});
    const EnlargedState embedded = embed(psi0);
    double worst = 1.0;
    std::string detail;
    MajoranaState direct = psi0;
    double t_prev = 0.0;
    for (double t : {2.0, 4.0, 8.0}) {
        direct = evolve_majorana_direct(direct, 1.0, t - t_prev, 1e-3);
        t_prev = t;
        const double f = state_fidelity(recover(evolve(embedded, 1.0, t)), direct);
        worst = std::min(worst, f);
        detail += fmt("t=%g: 1-F = %.1e; ", t, 1.0 - f);
    }
    return {worst > 1.0 - 1e-6, detail + "N_P = 65, dt = 1e-3 (tol 1e-6)", 30.0};
}

Verdict ac5() {
    const MomentumAxis axis = MomentumAxis::grid(65, 4.0);
    const EnlargedState s0 = embed(MajoranaState::gaussian(axis, GaussianPacket{}));
    const EnlargedState s4 = evolve(s0, 1.0, 4.0);
    const EnlargedState flipped = apply_symmetry(s4, SymmetryOperator::time_reversal());
    const EnlargedState s8 = evolve(flipped, 1.0, 4.0);
    const double dx = std::abs(mean_position(s8, 1.0, 0.0) - mean_position(s0, 1.0, 0.0));
    const double dp = std::abs(mean_momentum(s8) + mean_momentum(s0));
    const double flip = std::abs(mean_momentum(flipped) + mean_momentum(s4));
    return {dx < 1e-6 && dp < 1e-6 && flip < 1e-10,
            fmt("|x(8)-x(0)| %.1e, |p(8)+p(0)| %.1e (tol 1e-6), flip at t=4 %.1e (tol 1e-10)", dx, dp, flip)};
}

Verdict ac6() {
    const double m = 1.0;
    const double h = 1e-4;
    const MomentumAxis axis = MomentumAxis::grid(65, 4.0);
    const EnlargedState s0 = embed(MajoranaState::gaussian(axis, GaussianPacket{}));
    const EnlargedState s4 = evolve(s0, m, 4.0);
    const EnlargedState after = apply_symmetry(s4, SymmetryOperator::charge_conjugation());
    const double flip = std::abs(mean_momentum(after) + mean_momentum(s4));

    // One-sided difference quotients of the position pipeline on either side of t = 4.
    const double x4 = mean_position(s4, m, 0.0);
    const double v_left = (x4 - mean_position(evolve(s0, m, 4.0 - h), m, 0.0)) / h;
    const double v_right = (mean_position(evolve(after, m, h), m, 0.0) - mean_position(after, m, 0.0)) / h;
    const double rel_v = std::abs(v_right - v_left) / std::abs(v_left);

    const Populations before = particle_antiparticle_populations(recover(s4), m);
    const Populations swapped = particle_antiparticle_populations(recover(after), m);
    const double swap = std::max(std::abs(before.particle - swapped.antiparticle),
                                 std::abs(before.antiparticle - swapped.particle));
    return {flip < 1e-10 && rel_v < 0.02 && swap < 1e-10,
            fmt("p flip %.1e (tol 1e-10); dx/dt left %.6f right %.6f (rel %.1e, tol 2%%); population swap %.1e "
                "(tol 1e-10)",
                flip, v_left, v_right, rel_v, swap)};
}

Verdict ac7() {
    const MomentumAxis axis = MomentumAxis::grid(33, 4.0);
    const EnlargedState s0 = embed(MajoranaState::gaussian(axis, GaussianPacket{}));
    double worst = 0.0, cross = 0.0;
    for (double t : linspace(0.0, 8.0, 20)) {
        const PositionEstimate e = mean_position_estimate(s0, 1.0, t);
        worst = std::max(worst, std::abs(e.pipeline - e.oracle));
        cross = std::max(cross, std::abs(e.cross_term));
    }
    return {worst < 1e-6 && cross < 1e-10,
            fmt("max |pipeline - oracle| %.1e (tol 1e-6), max cross term %.1e (tol 1e-10), 20 times, N_P = 33", worst,
                cross)};
}

Verdict ac8() {
    const IonLevels levels = IonLevels::yb171();
    const double eps = kDefaultEnergyUnit;
    const double p = 1.0, m = 1.0;
    const Bispinor chi0 = Bispinor(1.0, 0.0, cplx(0.0, -1.0), 0.0) / std::sqrt(2.0);
    const double t = std::numbers::pi / (2.0 * 2.0 * eps);

    double rel_err = 0.0, residual = 0.0, fidelity_01 = 0.0;
    std::vector<double> lx, ly;
    for (double ratio : {0.2, 0.1, 0.05}) {
        const Calibration cal = calibrate(p, m, 4.0 * m * eps / (ratio * ratio), levels);
        rel_err = std::max(rel_err, cal.relative_error);
        residual = std::max(residual, cal.detuning_residual);
        const FullDriveResult r =
            simulate_full_drive(cal.config, levels, cal.target, chi0, t, max_drive_step(cal.config, levels));
        if (ratio == 0.1) fidelity_01 = r.fidelity;
        lx.push_back(std::log(ratio));
        ly.push_back(std::log(r.mean_infidelity));
    }
    const double mx = (lx[0] + lx[1] + lx[2]) / 3.0, my = (ly[0] + ly[1] + ly[2]) / 3.0;
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < 3; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    const double residual_tol = 1e-9 * levels.omega_z;
    return {rel_err < 1e-3 && residual < residual_tol && fidelity_01 > 0.99 && std::abs(slope - 2.0) <= 0.3,
            fmt("H_p rel err %.1e (tol 1e-3); detuning residual %.1e rad/s (tol %.1e); fidelity %.5f at "
                "Omega/Delta = 0.1 (tol 0.99); slope %.3f (2 +/- 0.3)",
                rel_err, residual, residual_tol, fidelity_01, slope),
            300.0};
}

Verdict ac9() {
    // (|1> + |2>)/sqrt2 has <1 (x) sigma_z> = 0, the binomial worst case.
    const Bispinor chi = Bispinor(1.0, 1.0, 0.0, 0.0) / std::sqrt(2.0);
    const Matrix4c z = pauli_string({Pauli::I, Pauli::Z});
    const DensityObservable obs = [z](const Matrix4c &rho) { return (rho * z).trace().real(); };
    const std::size_t runs = 400;
    const std::uint64_t seed = 2017;

    std::string detail;
    bool pass = true;
    std::vector<double> lx, ly;
    for (std::uint64_t shots : {250u, 1000u, 4000u}) {
        const Estimate e = estimate_with_error(chi, obs, shots, runs, seed);
        const double ratio = e.error * std::sqrt(static_cast<double>(shots));
        pass = pass && std::abs(ratio - 1.0) <= 0.2;
        detail += fmt("N=%llu err %.4f (x sqrt N = %.3f); ", static_cast<unsigned long long>(shots), e.error, ratio);
        lx.push_back(std::log(static_cast<double>(shots)));
        ly.push_back(std::log(e.error));
    }
    const double slope = (ly[2] - ly[0]) / (lx[2] - lx[0]);
    pass = pass && std::abs(slope + 0.5) <= 0.1;

    const Estimate a = estimate_with_error(chi, obs, 1000, 20, 7);
    const Estimate b = estimate_with_error(chi, obs, 1000, 20, 7);
    const bool identical = a.runs == b.runs && a.mean == b.mean && a.error == b.error;
    const auto sa = sample(chi, all_pauli_settings(), 1000, 7);
    const auto sb = sample(chi, all_pauli_settings(), 1000, 7);
    bool counts_identical = sa.size() == sb.size();
    for (std::size_t i = 0; counts_identical && i < sa.size(); ++i) counts_identical = sa[i].counts == sb[i].counts;
    pass = pass && identical && counts_identical;
    return {pass, detail + fmt("slope %.3f (-0.5 +/- 0.1); seeded reruns identical: %s (%zu runs per point)", slope,
                               identical && counts_identical ? "yes" : "no", runs)};
}

Verdict ac10() {
    std::mt19937_64 engine(20171003);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Matrix4c t_op = SymmetryOperator::time_reversal().matrix().cast<cplx>();
    const Matrix4c c_op = SymmetryOperator::charge_conjugation().matrix().cast<cplx>();
    double unitarity = 0.0, reality = 0.0, norm = 0.0, t_defect = 0.0, c_defect = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        const double p = 3.0 * u(engine);
        const double m = 1.5 * (u(engine) + 1.0);
        const double t = 4.0 * (u(engine) + 1.0);
        const Bispinor chi = Bispinor(cplx(u(engine), u(engine)), cplx(u(engine), u(engine)),
                                      cplx(u(engine), u(engine)), cplx(u(engine), u(engine)))
                                 .normalized();
        const Spinor c = Spinor(cplx(u(engine), u(engine)), cplx(u(engine), u(engine))).normalized();

        const Matrix4c unitary = mode_propagator(p, m, t);
        unitarity = std::max({unitarity, (unitary.adjoint() * unitary - Matrix4c::Identity()).cwiseAbs().maxCoeff(),
                              std::abs((unitary * chi).norm() - 1.0)});

        const MajoranaState psi = MajoranaState::plane_wave(p, c);
        const EnlargedState evolved = evolve(embed(psi), m, t);
        reality = std::max(reality, evolved.reality_violation());
        norm = std::max(norm, std::abs(recover(evolved).norm() - psi.norm()));

        const Matrix4c h = enlarged_hamiltonian(p, m);
        t_defect = std::max(t_defect, (t_op * h * t_op.transpose() + h).cwiseAbs().maxCoeff());
        c_defect = std::max(c_defect, (c_op * h * c_op.transpose() + enlarged_hamiltonian(-p, m)).cwiseAbs().maxCoeff());
    }
    return {unitarity < 1e-12 && reality < 1e-10 && norm < 1e-8 && t_defect < 1e-14 && c_defect < 1e-14,
            fmt("100 draws: unitarity %.1e (tol 1e-12), realness %.1e (tol 1e-10), norm %.1e (tol 1e-8), "
                "|T H T^T + H_p| %.1e, |C H C^T + H_-p| %.1e (tol 1e-14)",
                unitarity, reality, norm, t_defect, c_defect)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10},
    };
    int failures = 0;
    for (const auto &[name, criterion] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criterion();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string budget;
        if (v.budget > 0.0) {
            budget = fmt(", budget %gs", v.budget);
            if (seconds >= v.budget) {
                v.pass = false;
                v.detail += "; over time budget";
            }
        }
        failures += v.pass ? 0 : 1;
        std::printf("%-4s %s  [%.3fs%s]  %s\n", name, v.pass ? "PASS" : "FAIL", seconds, budget.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
