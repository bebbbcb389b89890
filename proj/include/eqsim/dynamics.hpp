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

#include <utility>

#include "eqsim/core.hpp"

namespace eqsim {

/// H_p = p (1 (x) sigma_x) - m (sigma_x (x) sigma_y), hbar = c = 1.
Matrix4c enlarged_hamiltonian(double p, double m);

/// exp(-i H_p t).
Matrix4c mode_propagator(double p, double m, double t);

Bispinor propagate_mode(const Bispinor &chi, double p, double m, double t);

/// Evolves every mode of an enlarged state; the envelope is time independent.
EnlargedState evolve(const EnlargedState &state, double m, double t);

// sigma_x basis of the first qubit --------------------------------------------

/// Internal state split into the two decoupled 2-vectors chi^+ and chi^-.
struct BlockPair {
    Eigen::Vector2cd plus;
    Eigen::Vector2cd minus;
};

enum class BlockSign { Plus, Minus };

/// The real orthogonal (and symmetric) change of basis S = H (x) 1.
Matrix4r block_basis();

/// chi^(+/-) = S^T chi.
BlockPair to_blocks(const Bispinor &chi);
Bispinor from_blocks(const BlockPair &blocks);

/// H_p^+ = [[0, p + i m], [p - i m, 0]], H_p^- its complex conjugate.
Eigen::Matrix2cd block_hamiltonian(double p, double m, BlockSign sign);

BlockPair propagate_blocks(const BlockPair &blocks, double p, double m, double t);

/// Coherent evolution of the chi^sign blocks of two momenta under the
/// four-level block-diagonal H_p^sign (+) H_p'^sign.
std::pair<Eigen::Vector2cd, Eigen::Vector2cd> propagate_pair(const Eigen::Vector2cd &chi_p,
                                                             const Eigen::Vector2cd &chi_pprime, double p,
                                                             double pprime, double m, double t,
                                                             BlockSign sign);

// Independent integrators ------------------------------------------------------

inline constexpr double kDefaultSplitStep = 1e-3;

/// Largest step the split-step integrator accepts on the given axis.
double max_split_step(const MomentumAxis &axis, double m);

/// Strang split-step integration of i psi' = sigma_x p psi - i m sigma_y psi*.
///
/// Kinetic half steps are diagonal in momentum; the mass step acts on the
/// real and imaginary parts a, b of psi(x) as (a +/- b)(dt) = R(+/- m dt)(a +/- b)
/// with R(theta) = [[cos, sin], [-sin, cos]]. On mode axes the mass step is
/// applied through the p <-> -p pairing instead of a spatial grid.
/// Requires t to be an integer multiple of dt.
MajoranaState evolve_majorana_direct(const MajoranaState &psi, double m, double t, double dt = kDefaultSplitStep);

/// Per-mode exact evolution under the Dirac Hamiltonian sigma_x p + m sigma_z.
MajoranaState evolve_dirac(const MajoranaState &psi, double m, double t);

Eigen::Matrix2cd dirac_hamiltonian(double p, double m);

}  // namespace eqsim
