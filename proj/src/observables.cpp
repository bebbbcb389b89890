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

#include "eqsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eqsim/dynamics.hpp"
#include "eqsim/fourier.hpp"

namespace eqsim {

void ObservableSeries::validate() const {
    require(times.size() == values.size(), "series '" + label + "': times and values differ in length");
    require(errors.empty() || errors.size() == values.size(),
            "series '" + label + "': errors and values differ in length");
    for (std::size_t i = 1; i < times.size(); ++i) {
        require(times[i] > times[i - 1], "series '" + label + "': times must be strictly increasing");
    }
}

DiracEigenbasis dirac_eigenbasis(double p, double m) {
    const double energy = std::hypot(p, m);
    require(energy > 0.0, "Dirac eigenbasis is undefined at p = m = 0");
    require(m >= 0.0, "Dirac eigenbasis expects a non-negative mass");
    const double sign = p < 0.0 ? -1.0 : 1.0;
    const double norm = 1.0 / std::sqrt(2.0 * energy);
    const double upper = std::sqrt(energy + m);
    const double lower = std::sqrt(std::max(0.0, energy - m));
    DiracEigenbasis basis;
    basis.p = p;
    basis.m = m;
    basis.energy = energy;
    basis.particle = norm * Spinor(upper, sign * lower);
    basis.antiparticle = norm * Spinor(lower, -sign * upper);
    return basis;
}

double expect_mode_operator(const EnlargedState &state, const std::function<Matrix2c(double)> &sigma) {
    const Matrix24c m = RecoveryMap::matrix();
    const MomentumAxis &axis = state.axis();
    double total = 0.0;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const Bispinor chi = state.internal(i);
        const Matrix4c rho = chi * chi.adjoint();
        const Matrix2c s = sigma(axis.momentum(i));
        const double trace = (rho * m.adjoint() * s * m).trace().real();
        total += axis.weight(i) * std::norm(state.envelope()(static_cast<Eigen::Index>(i))) * trace;
    }
    return total;
}

double expect_diagonal(const EnlargedState &state, const Matrix2c &sigma, const std::function<double(double)> &f) {
    if (hermiticity_defect(sigma) > 1e-12) {
        fail(ErrorCode::InvalidArgument, "diagonal observable needs a Hermitian Sigma");
    }
    return expect_mode_operator(state, [&](double p) -> Matrix2c { return f(p) * sigma; });
}

double mean_momentum(const EnlargedState &state) {
    return expect_diagonal(state, pauli::identity(), [](double p) { return p; });
}

ObservableSeries mean_momentum(const EnlargedState &initial, double m, std::span<const double> times) {
    ObservableSeries series;
    series.label = "mean_momentum";
    for (double t : times) {
        series.times.push_back(t);
        series.values.push_back(mean_momentum(evolve(initial, m, t)));
    }
    series.validate();
    return series;
}

namespace {

std::vector<DiracEigenbasis> bases_for(const MomentumAxis &axis, double m) {
    std::vector<DiracEigenbasis> bases;
    bases.reserve(axis.size());
    for (double p : axis.momenta()) {
        bases.push_back(dirac_eigenbasis(p, m));
    }
    return bases;
}

}  // namespace

double charge(const MajoranaState &psi, const std::vector<DiracEigenbasis> &bases) {
    const MomentumAxis &axis = psi.axis();
    if (bases.size() != axis.size()) {
        fail(ErrorCode::GridMismatch, "one Dirac basis per mode is required");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (std::abs(bases[i].p - axis.momentum(i)) > 1e-12) {
            fail(ErrorCode::GridMismatch, "Dirac basis momentum does not match the state's mode");
        }
        const Spinor amp = psi.amplitude(i);
        total += axis.weight(i) *
                 (std::norm(bases[i].particle.dot(amp)) - std::norm(bases[i].antiparticle.dot(amp)));
    }
    return total;
}

double charge(const MajoranaState &psi, double m) { return charge(psi, bases_for(psi.axis(), m)); }

PopulationDistributions particle_antiparticle_distributions(const MajoranaState &psi, double m) {
    const MomentumAxis &axis = psi.axis();
    PopulationDistributions out;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const DiracEigenbasis basis = dirac_eigenbasis(axis.momentum(i), m);
        const Spinor amp = psi.amplitude(i);
        out.momenta.push_back(axis.momentum(i));
        out.particle.push_back(std::norm(basis.particle.dot(amp)));
        out.antiparticle.push_back(std::norm(basis.antiparticle.dot(amp)));
    }
    return out;
}

Populations particle_antiparticle_populations(const MajoranaState &psi, double m) {
    const PopulationDistributions dist = particle_antiparticle_distributions(psi, m);
    Populations total;
    for (std::size_t i = 0; i < dist.momenta.size(); ++i) {
        total.particle += psi.axis().weight(i) * dist.particle[i];
        total.antiparticle += psi.axis().weight(i) * dist.antiparticle[i];
    }
    return total;
}

namespace {

MajoranaState evolve_via_embedding(const MajoranaState &psi, double m, double t) {
    return recover(evolve(embed(psi), m, t));
}

MajoranaState single_mode(const MomentumAxis &axis, double p, const Spinor &c) {
    SpinorField amplitudes = SpinorField::Zero(static_cast<Eigen::Index>(axis.size()), 2);
    amplitudes.row(static_cast<Eigen::Index>(axis.index_of(p))) = c.transpose();
    return MajoranaState(axis, std::move(amplitudes));
}

}  // namespace

double fidelity_global_phase(double p, double m, double theta, double t) {
    const MajoranaState psi = MajoranaState::plane_wave(p, Spinor(1.0, 0.0));
    const MajoranaState rotated = psi.scaled(std::polar(1.0, theta));
    return std::norm(inner_product(evolve_via_embedding(psi, m, t), evolve_via_embedding(rotated, m, t)));
}

double orthogonality(double p, double m, double t, OrthogonalVariant variant) {
    const MomentumAxis axis = MomentumAxis::plane_wave(p);
    const MajoranaState psi = single_mode(axis, p, Spinor(1.0, 0.0));
    const double partner_p = variant == OrthogonalVariant::Opposite ? -p : p;
    const MajoranaState partner = single_mode(axis, partner_p, Spinor(0.0, 1.0));
    return std::norm(inner_product(evolve_via_embedding(psi, m, t), evolve_via_embedding(partner, m, t)));
}

double mean_position_direct(const MajoranaState &psi) {
    const SpatialGrid grid = psi.axis().spatial_grid();
    const SpinorField values = psi.position_values();
    double total = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        total += grid.x(j) * values.row(static_cast<Eigen::Index>(j)).squaredNorm();
    }
    return total * grid.spacing();
}

double mean_velocity(const MajoranaState &psi) {
    const Matrix2c sx = pauli::x();
    double total = 0.0;
    for (std::size_t i = 0; i < psi.axis().size(); ++i) {
        const Spinor amp = psi.amplitude(i);
        total += psi.axis().weight(i) * amp.dot(sx * amp).real();
    }
    return total;
}

PositionEstimate mean_position_estimate(const EnlargedState &state, double m, double t) {
    const MomentumAxis &axis = state.axis();
    const SpatialGrid grid = axis.spatial_grid();
    const std::size_t n = axis.size();

    // kernel(k, k') = (1/2pi) sum_j dx x_j exp(-i (p_k - p_k') x_j), and the
    // same without the x_j weight for the pointwise cross-density check.
    const double scale = grid.spacing() / (2.0 * std::numbers::pi);
    Eigen::MatrixXcd kernel = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t kp = 0; kp < n; ++kp) {
            cplx sum = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                sum += grid.x(j) * std::polar(1.0, -(axis.momentum(k) - axis.momentum(kp)) * grid.x(j));
            }
            kernel(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(kp)) = scale * sum;
        }
    }

    std::vector<BlockPair> initial(n);
    for (std::size_t k = 0; k < n; ++k) {
        initial[k] = to_blocks(state.internal(k));
    }

    // Pair sweep: each (p, p') is evolved coherently per block sign, as a
    // four-level system would be.
    Eigen::MatrixXcd direct = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::MatrixXcd cross = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t kp = 0; kp < n; ++kp) {
            const double p = axis.momentum(k);
            const double pp = axis.momentum(kp);
            const auto [plus_p, plus_pp] = propagate_pair(initial[k].plus, initial[kp].plus, p, pp, m, t, BlockSign::Plus);
            const auto [minus_p, minus_pp] =
                propagate_pair(initial[k].minus, initial[kp].minus, p, pp, m, t, BlockSign::Minus);
            const cplx weight = axis.weight(k) * axis.weight(kp) *
                                std::conj(state.envelope()(static_cast<Eigen::Index>(k))) *
                                state.envelope()(static_cast<Eigen::Index>(kp));
            const auto r = static_cast<Eigen::Index>(k);
            const auto c = static_cast<Eigen::Index>(kp);
            direct(r, c) = weight * (plus_p.dot(plus_pp) + minus_p.dot(minus_pp));
            cross(r, c) = weight * (-kI) * (plus_p.dot(minus_pp) - minus_p.dot(plus_pp));
        }
    }

    PositionEstimate estimate;
    estimate.pipeline = (kernel.cwiseProduct(direct)).sum().real();
    estimate.cross_term = std::abs((kernel.cwiseProduct(cross)).sum());

    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        cplx density = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t kp = 0; kp < n; ++kp) {
                density += std::polar(1.0, -(axis.momentum(k) - axis.momentum(kp)) * grid.x(j)) *
                           cross(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(kp));
            }
        }
        worst = std::max(worst, std::abs(density) / (2.0 * std::numbers::pi));
    }
    estimate.cross_density = worst;

    estimate.oracle = mean_position_direct(recover(evolve(state, m, t)));
    return estimate;
}

double mean_position(const EnlargedState &state, double m, double t) {
    const PositionEstimate estimate = mean_position_estimate(state, m, t);
    if (std::abs(estimate.pipeline - estimate.oracle) > kPositionConsistencyTolerance) {
        fail(ErrorCode::Invariant, "pair-sweep <x> = " + std::to_string(estimate.pipeline) +
                                       " disagrees with the Fourier oracle <x> = " + std::to_string(estimate.oracle));
    }
    return estimate.pipeline;
}

DensitySnapshot density_distributions(const EnlargedState &state, double m, double t) {
    const EnlargedState evolved = evolve(state, m, t);
    const MajoranaState psi = recover(evolved);
    const MomentumAxis &axis = psi.axis();
    const SpatialGrid grid = axis.spatial_grid();
    DensitySnapshot snapshot;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        snapshot.momenta.push_back(axis.momentum(i));
        snapshot.momentum_density.push_back(psi.amplitude(i).squaredNorm());
        snapshot.enlarged_momentum_density.push_back(evolved.amplitude(i).squaredNorm());
    }
    const SpinorField values = psi.position_values();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        snapshot.positions.push_back(grid.x(j));
        snapshot.position_density.push_back(values.row(static_cast<Eigen::Index>(j)).squaredNorm());
    }
    return snapshot;
}

namespace {

struct LinearFit {
    double cos_coef = 0.0;
    double sin_coef = 0.0;
    double offset = 0.0;
    double residual = std::numeric_limits<double>::infinity();
};

LinearFit fit_at(std::span<const double> times, std::span<const double> values, double omega) {
    const auto n = static_cast<Eigen::Index>(times.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = times[static_cast<std::size_t>(i)];
        design(i, 0) = std::cos(omega * t);
        design(i, 1) = std::sin(omega * t);
        design(i, 2) = 1.0;
        rhs(i) = values[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
    LinearFit fit;
    fit.cos_coef = coef(0);
    fit.sin_coef = coef(1);
    fit.offset = coef(2);
    fit.residual = (design * coef - rhs).squaredNorm();
    return fit;
}

}  // namespace

OscillationFit fit_oscillation(std::span<const double> times, std::span<const double> values, double omega_min,
                               double omega_max) {
    require(times.size() == values.size() && times.size() >= 4, "oscillation fit needs at least four samples");
    require(omega_min > 0.0 && omega_max > omega_min, "invalid frequency search range");

    constexpr int kScan = 4000;
    const double step = (omega_max - omega_min) / kScan;
    int best = 0;
    double best_residual = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kScan; ++i) {
        const double r = fit_at(times, values, omega_min + step * i).residual;
        if (r < best_residual) {
            best_residual = r;
            best = i;
        }
    }

    double lo = omega_min + step * std::max(0, best - 1);
    double hi = omega_min + step * std::min(kScan, best + 1);
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - golden * (hi - lo);
    double b = lo + golden * (hi - lo);
    double fa = fit_at(times, values, a).residual;
    double fb = fit_at(times, values, b).residual;
    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - golden * (hi - lo);
            fa = fit_at(times, values, a).residual;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + golden * (hi - lo);
            fb = fit_at(times, values, b).residual;
        }
    }

    const double omega = 0.5 * (lo + hi);
    const LinearFit fit = fit_at(times, values, omega);
    OscillationFit out;
    out.omega = omega;
    out.amplitude = std::hypot(fit.cos_coef, fit.sin_coef);
    out.phase = std::atan2(-fit.sin_coef, fit.cos_coef);
    out.offset = fit.offset;
    out.rms_residual = std::sqrt(fit.residual / static_cast<double>(times.size()));
    return out;
}

}  // namespace eqsim
