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
#include <numbers>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace eqsim;

namespace {

/// Taylor series of exp(-i H t), summed until the terms underflow.
Matrix4c taylor_propagator(const Matrix4c &h, double t) {
    Matrix4c total = Matrix4c::Identity();
    Matrix4c term = Matrix4c::Identity();
    for (int k = 1; k < 80; ++k) {
        term = term * (-kI * t * h) / static_cast<double>(k);
        total += term;
    }
    return total;
}

}  // namespace

TEST(dynamics, hamiltonian_is_hermitian_with_doubled_spectrum) {
    test_util::Draws draws(1);
    for (int trial = 0; trial < 20; ++trial) {
        const double p = draws.uniform(-4.0, 4.0);
        const double m = draws.uniform(0.0, 2.0);
        const Matrix4c h = enlarged_hamiltonian(p, m);
        EXPECT_LT(hermiticity_defect(h), 1e-14);
        Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h);
        const double e = std::hypot(p, m);
        EXPECT_NEAR(solver.eigenvalues()(0), -e, 1e-12);
        EXPECT_NEAR(solver.eigenvalues()(1), -e, 1e-12);
        EXPECT_NEAR(solver.eigenvalues()(2), e, 1e-12);
        EXPECT_NEAR(solver.eigenvalues()(3), e, 1e-12);
        // H^2 = (p^2 + m^2) 1.
        EXPECT_LT((h * h - e * e * Matrix4c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(dynamics, propagator_matches_taylor_series) {
    test_util::Draws draws(2);
    for (int trial = 0; trial < 10; ++trial) {
        const double p = draws.uniform(-2.0, 2.0);
        const double m = draws.uniform(0.0, 2.0);
        const double t = draws.uniform(-3.0, 3.0);
        const Matrix4c exact = taylor_propagator(enlarged_hamiltonian(p, m), t);
        EXPECT_LT((mode_propagator(p, m, t) - exact).cwiseAbs().maxCoeff(), 1e-11);
    }
}

TEST(dynamics, propagate_mode_unitarity_and_composition) {
    test_util::Draws draws(3);
    for (int trial = 0; trial < 100; ++trial) {
        const Bispinor chi = draws.bispinor();
        const double p = draws.uniform(-4.0, 4.0);
        const double m = draws.uniform(0.0, 2.0);
        const double t1 = draws.uniform(0.0, 5.0);
        const double t2 = draws.uniform(0.0, 5.0);
        const Bispinor out = propagate_mode(chi, p, m, t1);
        EXPECT_NEAR(out.squaredNorm(), 1.0, 1e-12);
        const Bispinor joint = propagate_mode(chi, p, m, t1 + t2);
        EXPECT_LT((propagate_mode(out, p, m, t2) - joint).norm(), 1e-10);
    }
    EXPECT_LT((propagate_mode(Bispinor(1, 2, 3, 4), 1.0, 1.0, 0.0) - Bispinor(1, 2, 3, 4)).norm(), 1e-15);
}

TEST(dynamics, rest_frame_closed_form) {
    for (double t : {0.3, 1.0, 2.5, 7.9}) {
        const EnlargedState state = evolve(embed(MajoranaState::plane_wave(0.0, Spinor(1.0, 0.0))), 1.0, t);
        const Spinor psi = recover(state).amplitude(0);
        EXPECT_LT((psi - Spinor(std::cos(t), -kI * std::sin(t))).norm(), 1e-13);
    }
}

TEST(dynamics, block_basis_decouples_hamiltonian) {
    const Matrix4r s = block_basis();
    EXPECT_LT((s.transpose() * s - Matrix4r::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    test_util::Draws draws(4);
    for (int trial = 0; trial < 20; ++trial) {
        const double p = draws.uniform(-3.0, 3.0);
        const double m = draws.uniform(0.0, 2.0);
        const Matrix4c rotated = s.transpose().cast<cplx>() * enlarged_hamiltonian(p, m) * s.cast<cplx>();
        const Eigen::Matrix2cd upper = rotated.topLeftCorner(2, 2);
        const Eigen::Matrix2cd lower = rotated.bottomRightCorner(2, 2);
        EXPECT_LT((upper - block_hamiltonian(p, m, BlockSign::Plus)).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LT((lower - block_hamiltonian(p, m, BlockSign::Minus)).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LT(rotated.topRightCorner(2, 2).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LT(rotated.bottomLeftCorner(2, 2).cwiseAbs().maxCoeff(), 1e-14);

        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> block(block_hamiltonian(p, m, BlockSign::Plus));
        EXPECT_NEAR(block.eigenvalues()(1), std::abs(cplx(p, m)), 1e-12);
        EXPECT_NEAR(block.eigenvalues()(0), -std::abs(cplx(p, m)), 1e-12);
    }
}

TEST(dynamics, blocks_reproduce_propagate_mode) {
    test_util::Draws draws(5);
    const Bispinor chi = draws.bispinor();
    const BlockPair blocks = to_blocks(chi);
    EXPECT_LT((from_blocks(blocks) - chi).norm(), 1e-15);
    const Bispinor via_blocks = from_blocks(propagate_blocks(blocks, 1.0, 1.0, 2.0));
    EXPECT_LT((via_blocks - propagate_mode(chi, 1.0, 1.0, 2.0)).norm(), 1e-12);
    const BlockPair same = propagate_blocks(blocks, 1.0, 1.0, 0.0);
    EXPECT_LT((same.plus - blocks.plus).norm() + (same.minus - blocks.minus).norm(), 1e-15);
}

TEST(dynamics, pair_marginals_equal_single_blocks) {
    test_util::Draws draws(6);
    const BlockPair a = to_blocks(draws.bispinor());
    const BlockPair b = to_blocks(draws.bispinor());
    for (BlockSign sign : {BlockSign::Plus, BlockSign::Minus}) {
        const auto [ap, bp] = propagate_pair(sign == BlockSign::Plus ? a.plus : a.minus,
                                             sign == BlockSign::Plus ? b.plus : b.minus, 0.5, 1.0, 1.0, 1.0, sign);
        const BlockPair ea = propagate_blocks(a, 0.5, 1.0, 1.0);
        const BlockPair eb = propagate_blocks(b, 1.0, 1.0, 1.0);
        EXPECT_LT((ap - (sign == BlockSign::Plus ? ea.plus : ea.minus)).norm(), 1e-12);
        EXPECT_LT((bp - (sign == BlockSign::Plus ? eb.plus : eb.minus)).norm(), 1e-12);
    }
    const auto [x, y] = propagate_pair(a.plus, a.plus, 0.7, 0.7, 1.0, 1.3, BlockSign::Plus);
    EXPECT_LT((x - y).norm(), 1e-15);
}

TEST(dynamics, pair_relative_phase_matches_eigenphases) {
    // Start each half in the positive-energy eigenvector of its block; the
    // relative phase after t is -(E' - E) t.
    const double p = 0.5;
    const double pp = 1.0;
    const double m = 1.0;
    const double t = 1.0;
    const auto eigvec = [&](double q) {
        const cplx z(q, m);
        Eigen::Vector2cd v(1.0, std::conj(z) / std::abs(z));
        return Eigen::Vector2cd(v / std::sqrt(2.0));
    };
    const auto [a, b] = propagate_pair(eigvec(p), eigvec(pp), p, pp, m, t, BlockSign::Plus);
    const cplx ratio = (eigvec(p).dot(a)) / (eigvec(pp).dot(b));
    const double expected = (std::hypot(pp, m) - std::hypot(p, m)) * t;
    EXPECT_NEAR(std::abs(ratio), 1.0, 1e-12);
    EXPECT_NEAR(std::arg(ratio), expected, 1e-12);
}

TEST(dynamics, time_reversal_identity) {
    const Matrix4c t = SymmetryOperator::time_reversal().matrix().cast<cplx>();
    test_util::Draws draws(7);
    for (int trial = 0; trial < 50; ++trial) {
        const double p = draws.uniform(-4.0, 4.0);
        const double m = draws.uniform(0.0, 2.0);
        const double time = draws.uniform(0.0, 8.0);
        const Matrix4c u = mode_propagator(p, m, time);
        EXPECT_LT((u * t * u - t).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(dynamics, evolution_preserves_reality) {
    const MomentumAxis axis = test_util::default_axis();
    const EnlargedState state = evolve(embed(test_util::default_packet(axis)), 1.0, 5.3);
    EXPECT_LT(state.reality_violation(), 1e-12);
    EXPECT_LT(state.position_values().imag().cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(state.norm(), 1.0, 1e-12);
}

TEST(dynamics, split_step_rest_frame) {
    const MajoranaState psi = MajoranaState::plane_wave(0.0, Spinor(1.0, 0.0));
    const double t = 1.5707;  // dt-divisible approximation of pi/2
    const MajoranaState out = evolve_majorana_direct(psi, 1.0, t, 1e-4);
    EXPECT_LT((out.amplitude(0) - Spinor(std::cos(t), -kI * std::sin(t))).norm(), 1e-8);
}

TEST(dynamics, split_step_quarter_period) {
    const MajoranaState psi = MajoranaState::plane_wave(0.0, Spinor(1.0, 0.0));
    const double t = std::numbers::pi / 2.0;
    const double dt = t / 1571.0;
    const MajoranaState out = evolve_majorana_direct(psi, 1.0, t, dt);
    EXPECT_LT((out.amplitude(0) - Spinor(0.0, -kI)).norm(), 1e-8);
}

TEST(dynamics, split_step_plane_wave_matches_embedding) {
    test_util::Draws draws(8);
    const Spinor c = draws.spinor();
    const MajoranaState psi = MajoranaState::plane_wave(1.0, c);
    const MajoranaState direct = evolve_majorana_direct(psi, 1.0, 2.0, 1e-3);
    const MajoranaState exact = recover(evolve(embed(psi), 1.0, 2.0));
    EXPECT_GT(state_fidelity(direct, exact), 1.0 - 1e-6);
    EXPECT_NEAR(direct.norm(), 1.0, 1e-8);
}

TEST(dynamics, split_step_massless_keeps_momentum_density) {
    const MomentumAxis axis = MomentumAxis::grid(33, 4.0);
    const MajoranaState psi = test_util::default_packet(axis);
    const MajoranaState out = evolve_majorana_direct(psi, 0.0, 1.0, 0.01);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        EXPECT_NEAR(out.amplitude(i).squaredNorm(), psi.amplitude(i).squaredNorm(), 1e-12);
    }
}

TEST(dynamics, split_step_norm_conservation) {
    const MomentumAxis axis = MomentumAxis::grid(33, 4.0);
    test_util::Draws draws(9);
    SpinorField values(33, 2);
    for (Eigen::Index j = 0; j < 33; ++j) {
        values(j, 0) = draws.complex();
        values(j, 1) = draws.complex();
    }
    const MajoranaState psi = MajoranaState::from_position(axis, values).normalized();
    const MajoranaState out = evolve_majorana_direct(psi, 1.3, 2.0, 0.01);
    EXPECT_NEAR(out.norm(), 1.0, 1e-8);
}

TEST(dynamics, split_step_refuses_coarse_steps) {
    const MomentumAxis axis = test_util::default_axis();
    const MajoranaState psi = test_util::default_packet(axis);
    EXPECT_THROW(evolve_majorana_direct(psi, 1.0, 1.0, 0.1), Error);
    EXPECT_THROW(evolve_majorana_direct(psi, 1.0, 1.0005, 1e-3), Error);
    EXPECT_THROW(evolve_majorana_direct(psi, 1.0, -1.0, 1e-3), Error);
}

TEST(dynamics, dirac_rest_frame_phase) {
    const MajoranaState psi = MajoranaState::plane_wave(0.0, Spinor(1.0, 0.0));
    for (double t : {0.5, 2.0, 6.0}) {
        const MajoranaState out = evolve_dirac(psi, 1.0, t);
        EXPECT_LT((out.amplitude(0) - std::polar(1.0, -t) * Spinor(1.0, 0.0)).norm(), 1e-14);
    }
}
