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

#include <cstddef>
#include <string>
#include <vector>

#include "eqsim/error.hpp"
#include "eqsim/linalg.hpp"

namespace eqsim {

/// Per-mode spinor storage, one row per momentum (or position) sample.
using SpinorField = Eigen::Matrix<cplx, Eigen::Dynamic, 2>;
using BispinorField = Eigen::Matrix<cplx, Eigen::Dynamic, 4>;

/// Uniform position grid x_j = (j - (N-1)/2) dx, symmetric about zero.
class SpatialGrid {
   public:
    SpatialGrid(std::size_t points, double spacing);

    std::size_t size() const noexcept { return points_; }
    double spacing() const noexcept { return spacing_; }
    double length() const noexcept { return spacing_ * static_cast<double>(points_); }
    double x(std::size_t j) const noexcept {
        return (static_cast<double>(j) - 0.5 * static_cast<double>(points_ - 1)) * spacing_;
    }

   private:
    std::size_t points_;
    double spacing_;
};

/// A finite set of momentum modes, sorted ascending and closed under p -> -p.
///
/// Two flavours exist. A grid axis has an odd number of uniformly spaced
/// points with weight dp each and a dual spatial grid (discrete Fourier pair
/// with L = 2 pi / dp). A mode axis holds a handful of discrete plane-wave
/// momenta with unit weight and no spatial representation.
class MomentumAxis {
   public:
    static MomentumAxis grid(std::size_t points, double p_max);
    static MomentumAxis plane_wave(double p);
    static MomentumAxis modes(std::vector<double> momenta);

    std::size_t size() const noexcept { return momenta_.size(); }
    double momentum(std::size_t i) const { return momenta_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double> &momenta() const noexcept { return momenta_; }
    /// Index of -p for the mode at index i.
    std::size_t mirror(std::size_t i) const noexcept { return momenta_.size() - 1 - i; }
    /// Index of the mode at momentum p; throws GridMismatch if absent.
    std::size_t index_of(double p) const;

    bool is_grid() const noexcept { return grid_; }
    double spacing() const;
    SpatialGrid spatial_grid() const;

    bool operator==(const MomentumAxis &other) const;

   private:
    MomentumAxis(std::vector<double> momenta, std::vector<double> weights, bool grid);

    std::vector<double> momenta_;
    std::vector<double> weights_;
    bool grid_;
};

/// Position-space Gaussian packet with momentum density centred at +momentum.
struct GaussianPacket {
    double center = 0.0;
    /// Standard deviation of the position density |psi(x)|^2.
    double width = 1.4142135623730951;
    double momentum = 1.0;
    Spinor spinor = Spinor(0.7071067811865476, 0.7071067811865476);
};

/// Original-space Majorana spinor field, stored in momentum representation.
class MajoranaState {
   public:
    MajoranaState(MomentumAxis axis, SpinorField amplitudes);

    /// Single plane wave c (x) |p> on a two-mode axis {-p, p} (or {0}).
    static MajoranaState plane_wave(double p, const Spinor &c);
    /// Samples psi(x) on the axis' dual spatial grid and transforms it.
    static MajoranaState from_position(const MomentumAxis &axis, const SpinorField &values);
    static MajoranaState gaussian(const MomentumAxis &axis, const GaussianPacket &packet);

    const MomentumAxis &axis() const noexcept { return axis_; }
    const SpinorField &amplitudes() const noexcept { return amplitudes_; }
    Spinor amplitude(std::size_t i) const { return amplitudes_.row(i).transpose(); }

    /// psi(x_j) on the dual spatial grid; grid axes only.
    SpinorField position_values() const;

    double norm() const;
    MajoranaState normalized() const;
    MajoranaState scaled(cplx factor) const;

   private:
    MomentumAxis axis_;
    SpinorField amplitudes_;
};

/// <a|b> summed over modes with the axis weights. Axes must match.
cplx inner_product(const MajoranaState &a, const MajoranaState &b);
/// |<a|b>|^2 / (<a|a><b|b>).
double state_fidelity(const MajoranaState &a, const MajoranaState &b);

/// Enlarged-space state: envelope Psi(p) times a unit internal 4-vector chi_p.
///
/// The physical amplitude at mode p is envelope(p) * chi_p. States produced
/// by embed() and anything evolved from them satisfy the reality condition
/// amplitude(-p) = conj(amplitude(p)), i.e. the position representation is
/// a real 4-vector field.
class EnlargedState {
   public:
    EnlargedState(MomentumAxis axis, Eigen::VectorXcd envelope, BispinorField internal);

    /// Factorises per-mode amplitudes into a real non-negative envelope and a
    /// unit internal state (e_1 where the amplitude vanishes).
    static EnlargedState from_amplitudes(MomentumAxis axis, const BispinorField &amplitudes);

    const MomentumAxis &axis() const noexcept { return axis_; }
    const Eigen::VectorXcd &envelope() const noexcept { return envelope_; }
    const BispinorField &internal() const noexcept { return internal_; }
    Bispinor internal(std::size_t i) const { return internal_.row(i).transpose(); }
    Bispinor amplitude(std::size_t i) const { return envelope_(i) * internal(i); }
    BispinorField amplitudes() const;

    /// Same envelope, new internal states.
    EnlargedState with_internal(BispinorField internal) const;

    /// Position representation on the dual grid; grid axes only. Complex
    /// storage so callers can check the imaginary part.
    BispinorField position_values() const;

    /// max_p |amplitude(-p) - conj(amplitude(p))|.
    double reality_violation() const;
    double norm() const;
    EnlargedState normalized() const;

   private:
    MomentumAxis axis_;
    Eigen::VectorXcd envelope_;
    BispinorField internal_;
};

/// The 2x4 matrix M = [[1,0,i,0],[0,1,0,i]] taking the enlarged bispinor back
/// to the original spinor.
struct RecoveryMap {
    static Matrix24c matrix();
    static Spinor apply(const Bispinor &v) { return matrix() * v; }
};

enum class SymmetryLabel { K, T, C };

std::string to_string(SymmetryLabel label);
SymmetryLabel parse_symmetry_label(const std::string &text);

/// An antiunitary original-space operation realised as a real orthogonal
/// 4x4 matrix on the enlarged space.
class SymmetryOperator {
   public:
    static SymmetryOperator make(SymmetryLabel label);
    /// K = sigma_z (x) 1, complex conjugation.
    static SymmetryOperator complex_conjugation() { return make(SymmetryLabel::K); }
    /// T = i sigma_z (x) sigma_y.
    static SymmetryOperator time_reversal() { return make(SymmetryLabel::T); }
    /// C = -sigma_z (x) sigma_x.
    static SymmetryOperator charge_conjugation() { return make(SymmetryLabel::C); }

    const Matrix4r &matrix() const noexcept { return matrix_; }
    SymmetryLabel label() const noexcept { return label_; }

   private:
    SymmetryOperator(Matrix4r matrix, SymmetryLabel label) : matrix_(std::move(matrix)), label_(label) {}

    Matrix4r matrix_;
    SymmetryLabel label_;
};

/// Maps psi to the real bispinor (Re psi_1, Re psi_2, Im psi_1, Im psi_2),
/// expressed per momentum mode.
EnlargedState embed(const MajoranaState &psi);

/// Inverse of embed: psi = M Psi. Rejects states whose reality violation
/// exceeds kRecoverRealityTolerance.
MajoranaState recover(const EnlargedState &state);

inline constexpr double kRecoverRealityTolerance = 1e-6;

EnlargedState apply_symmetry(const EnlargedState &state, const SymmetryOperator &op);

}  // namespace eqsim
