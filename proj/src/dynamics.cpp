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

#include "eqsim/dynamics.hpp"

#include <cmath>

#include "eqsim/fourier.hpp"

namespace eqsim {

Matrix4c enlarged_hamiltonian(double p, double m) {
    return p * kron(pauli::identity(), pauli::x()) - m * kron(pauli::x(), pauli::y());
}

Matrix4c mode_propagator(double p, double m, double t) {
    if (!std::isfinite(p) || !std::isfinite(m) || !std::isfinite(t)) {
        fail(ErrorCode::NonFinite, "momentum, mass and time must be finite");
    }
    return expm_hermitian<4>(enlarged_hamiltonian(p, m), t);
}

Bispinor propagate_mode(const Bispinor &chi, double p, double m, double t) { return mode_propagator(p, m, t) * chi; }

EnlargedState evolve(const EnlargedState &state, double m, double t) {
    if (!std::isfinite(m) || !std::isfinite(t)) {
        fail(ErrorCode::NonFinite, "mass and time must be finite");
    }
    const MomentumAxis &axis = state.axis();
    BispinorField internal(static_cast<Eigen::Index>(axis.size()), 4);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        internal.row(static_cast<Eigen::Index>(i)) = propagate_mode(state.internal(i), axis.momentum(i), m, t).transpose();
    }
    return state.with_internal(std::move(internal));
}

Matrix4r block_basis() {
    Matrix4r s;
    s << 1, 0, 1, 0,  //
        0, 1, 0, 1,   //
        1, 0, -1, 0,  //
        0, 1, 0, -1;
    return s / std::sqrt(2.0);
}

BlockPair to_blocks(const Bispinor &chi) {
    const Bispinor rotated = block_basis().transpose().cast<cplx>() * chi;
    return {rotated.head<2>(), rotated.tail<2>()};
}

Bispinor from_blocks(const BlockPair &blocks) {
    Bispinor rotated;
    rotated << blocks.plus, blocks.minus;
    return block_basis().cast<cplx>() * rotated;
}

Eigen::Matrix2cd block_hamiltonian(double p, double m, BlockSign sign) {
    const double s = sign == BlockSign::Plus ? 1.0 : -1.0;
    Eigen::Matrix2cd h;
    h << 0.0, cplx(p, s * m), cplx(p, -s * m), 0.0;
    return h;
}

BlockPair propagate_blocks(const BlockPair &blocks, double p, double m, double t) {
    return {expm_hermitian<2>(block_hamiltonian(p, m, BlockSign::Plus), t) * blocks.plus,
            expm_hermitian<2>(block_hamiltonian(p, m, BlockSign::Minus), t) * blocks.minus};
}

std::pair<Eigen::Vector2cd, Eigen::Vector2cd> propagate_pair(const Eigen::Vector2cd &chi_p,
                                                             const Eigen::Vector2cd &chi_pprime, double p,
                                                             double pprime, double m, double t,
                                                             BlockSign sign) {
    Matrix4c h = Matrix4c::Zero();
    h.topLeftCorner<2, 2>() = block_hamiltonian(p, m, sign);
    h.bottomRightCorner<2, 2>() = block_hamiltonian(pprime, m, sign);
    Bispinor joint;
    joint << chi_p, chi_pprime;
    const Bispinor out = expm_hermitian<4>(h, t) * joint;
    return {out.head<2>(), out.tail<2>()};
}

double max_split_step(const MomentumAxis &axis, double m) {
    double p_max = 0.0;
    for (double p : axis.momenta()) {
        p_max = std::max(p_max, std::abs(p));
    }
    return 0.1 / std::sqrt(p_max * p_max + m * m);
}

namespace {

Eigen::Matrix2d rotation(double angle) {
    Eigen::Matrix2d r;
    r << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
    return r;
}

/// Applies the exact mass step to a field given by its real and imaginary
/// parts; both are N x 2 real-coefficient fields (possibly complex storage in
/// momentum space, where "real part" means the transform of the real part).
void mass_step(Eigen::MatrixXcd &re, Eigen::MatrixXcd &im, double m, double dt) {
    const Eigen::Matrix2cd forward = rotation(m * dt).cast<cplx>();
    const Eigen::Matrix2cd backward = rotation(-m * dt).cast<cplx>();
    const Eigen::MatrixXcd sum = (re + im) * forward.transpose();
    const Eigen::MatrixXcd diff = (re - im) * backward.transpose();
    re = 0.5 * (sum + diff);
    im = 0.5 * (sum - diff);
}

void kinetic_step(SpinorField &amplitudes, const MomentumAxis &axis, double dt) {
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const double angle = axis.momentum(i) * dt;
        const Eigen::Matrix2cd u = std::cos(angle) * pauli::identity() - kI * std::sin(angle) * pauli::x();
        const auto row = static_cast<Eigen::Index>(i);
        amplitudes.row(row) = (u * amplitudes.row(row).transpose()).transpose();
    }
}

}  // namespace

MajoranaState evolve_majorana_direct(const MajoranaState &psi, double m, double t, double dt) {
    require(std::isfinite(t) && t >= 0.0, "evolution time must be finite and non-negative");
    require(std::isfinite(dt) && dt > 0.0, "split step must be positive");
    const MomentumAxis &axis = psi.axis();
    const double limit = max_split_step(axis, m);
    if (dt > limit) {
        fail(ErrorCode::InvalidArgument, "split step " + std::to_string(dt) + " exceeds the accuracy limit " +
                                             std::to_string(limit));
    }
    const double count = std::round(t / dt);
    require(std::abs(count * dt - t) <= 1e-9 * std::max(1.0, t), "evolution time must be a multiple of the step");
    const auto steps = static_cast<long>(count);

    SpinorField amplitudes = psi.amplitudes();
    const auto n = static_cast<Eigen::Index>(axis.size());

    if (axis.is_grid()) {
        const GridTransform transform(axis);
        for (long s = 0; s < steps; ++s) {
            kinetic_step(amplitudes, axis, 0.5 * dt);
            const Eigen::MatrixXcd values = transform.to_position(amplitudes);
            Eigen::MatrixXcd re = values.real().cast<cplx>();
            Eigen::MatrixXcd im = values.imag().cast<cplx>();
            mass_step(re, im, m, dt);
            amplitudes = transform.to_momentum(re + kI * im);
            kinetic_step(amplitudes, axis, 0.5 * dt);
        }
    } else {
        Eigen::MatrixXcd re(n, 2);
        Eigen::MatrixXcd im(n, 2);
        for (long s = 0; s < steps; ++s) {
            kinetic_step(amplitudes, axis, 0.5 * dt);
            for (Eigen::Index i = 0; i < n; ++i) {
                const auto mirrored = amplitudes.row(static_cast<Eigen::Index>(axis.mirror(static_cast<std::size_t>(i)))).conjugate();
                re.row(i) = 0.5 * (amplitudes.row(i) + mirrored);
                im.row(i) = -0.5 * kI * (amplitudes.row(i) - mirrored);
            }
            mass_step(re, im, m, dt);
            amplitudes = re + kI * im;
            kinetic_step(amplitudes, axis, 0.5 * dt);
        }
    }
    return MajoranaState(axis, std::move(amplitudes));
}

Eigen::Matrix2cd dirac_hamiltonian(double p, double m) { return p * pauli::x() + m * pauli::z(); }

MajoranaState evolve_dirac(const MajoranaState &psi, double m, double t) {
    const MomentumAxis &axis = psi.axis();
    SpinorField amplitudes(static_cast<Eigen::Index>(axis.size()), 2);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const Eigen::Matrix2cd u = expm_hermitian<2>(dirac_hamiltonian(axis.momentum(i), m), t);
        amplitudes.row(static_cast<Eigen::Index>(i)) = (u * psi.amplitude(i)).transpose();
    }
    return MajoranaState(axis, std::move(amplitudes));
}

}  // namespace eqsim
