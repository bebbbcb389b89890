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

#include <Eigen/Dense>
#include <complex>

namespace eqsim {

using cplx = std::complex<double>;

/// Two-component complex spinor of the original space.
using Spinor = Eigen::Vector2cd;
/// Four-component amplitude of the enlarged space at one momentum.
using Bispinor = Eigen::Vector4cd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Matrix4r = Eigen::Matrix4d;
using Matrix24c = Eigen::Matrix<cplx, 2, 4>;

inline constexpr cplx kI{0.0, 1.0};

namespace pauli {

inline Matrix2c identity() { return Matrix2c::Identity(); }

inline Matrix2c x() {
    Matrix2c m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline Matrix2c y() {
    Matrix2c m;
    m << 0.0, -kI, kI, 0.0;
    return m;
}

inline Matrix2c z() {
    Matrix2c m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

}  // namespace pauli

/// Kronecker product A ⊗ B of two 2x2 matrices; A acts on the high bit.
inline Matrix4c kron(const Matrix2c &a, const Matrix2c &b) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return out;
}

/// exp(-i H t) for Hermitian H, assembled as sum_k exp(-i l_k t) v_k v_k^dagger.
///
/// Degenerate eigenvalues contribute their full spectral projector whatever
/// basis the solver picks inside the eigenspace, so no eigenvector ordering
/// or phase convention leaks into the result.
template <int N>
Eigen::Matrix<cplx, N, N> expm_hermitian(const Eigen::Matrix<cplx, N, N> &h, double t) {
    if (t == 0.0) {
        return Eigen::Matrix<cplx, N, N>::Identity();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cplx, N, N>> solver(h);
    const auto &vectors = solver.eigenvectors();
    Eigen::Matrix<cplx, N, 1> phases;
    for (int k = 0; k < N; ++k) {
        phases(k) = std::exp(cplx(0.0, -solver.eigenvalues()(k) * t));
    }
    return vectors * phases.asDiagonal() * vectors.adjoint();
}

/// Largest absolute entry of A - A^dagger.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived> &a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace eqsim
