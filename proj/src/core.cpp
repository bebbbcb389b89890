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

#include "eqsim/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eqsim/fourier.hpp"

namespace eqsim {

namespace {

constexpr double kAxisTolerance = 1e-12;

void require_finite(const Eigen::MatrixXcd &values, const char *what) {
    if (!values.allFinite()) {
        fail(ErrorCode::NonFinite, std::string(what) + " contains non-finite values");
    }
}

}  // namespace

SpatialGrid::SpatialGrid(std::size_t points, double spacing) : points_(points), spacing_(spacing) {
    require(points >= 1, "spatial grid needs at least one point");
    require(std::isfinite(spacing) && spacing > 0.0, "spatial grid spacing must be positive");
}

MomentumAxis::MomentumAxis(std::vector<double> momenta, std::vector<double> weights, bool grid)
    : momenta_(std::move(momenta)), weights_(std::move(weights)), grid_(grid) {}

MomentumAxis MomentumAxis::grid(std::size_t points, double p_max) {
    require(points >= 3 && points % 2 == 1, "momentum grid needs an odd point count >= 3");
    require(std::isfinite(p_max) && p_max > 0.0, "momentum grid extent must be positive");
    const auto half = static_cast<long>(points / 2);
    const double dp = p_max / static_cast<double>(half);
    std::vector<double> momenta;
    momenta.reserve(points);
    for (long k = -half; k <= half; ++k) {
        momenta.push_back(static_cast<double>(k) * dp);
    }
    // Uniform weights: the trapezoid rule for periodic data, exact under the
    // discrete Fourier pair.
    std::vector<double> weights(points, dp);
    return MomentumAxis(std::move(momenta), std::move(weights), true);
}

MomentumAxis MomentumAxis::plane_wave(double p) {
    require(std::isfinite(p), "plane-wave momentum must be finite");
    if (p == 0.0) {
        return MomentumAxis({0.0}, {1.0}, false);
    }
    return MomentumAxis({-std::abs(p), std::abs(p)}, {1.0, 1.0}, false);
}

MomentumAxis MomentumAxis::modes(std::vector<double> momenta) {
    require(!momenta.empty(), "mode axis needs at least one momentum");
    for (double p : momenta) {
        require(std::isfinite(p), "mode momenta must be finite");
    }
    std::sort(momenta.begin(), momenta.end());
    for (std::size_t i = 0; i + 1 < momenta.size(); ++i) {
        require(momenta[i + 1] - momenta[i] > kAxisTolerance, "mode momenta must be distinct");
    }
    for (std::size_t i = 0; i < momenta.size(); ++i) {
        require(std::abs(momenta[i] + momenta[momenta.size() - 1 - i]) <= kAxisTolerance,
                "mode momenta must be symmetric under p -> -p");
    }
    std::vector<double> weights(momenta.size(), 1.0);
    return MomentumAxis(std::move(momenta), std::move(weights), false);
}

std::size_t MomentumAxis::index_of(double p) const {
    for (std::size_t i = 0; i < momenta_.size(); ++i) {
        if (std::abs(momenta_[i] - p) <= kAxisTolerance * std::max(1.0, std::abs(p))) {
            return i;
        }
    }
    fail(ErrorCode::GridMismatch, "momentum " + std::to_string(p) + " is not on the axis");
}

double MomentumAxis::spacing() const {
    if (!grid_) {
        fail(ErrorCode::GridMismatch, "mode axes have no uniform spacing");
    }
    return momenta_[1] - momenta_[0];
}

SpatialGrid MomentumAxis::spatial_grid() const {
    const double dp = spacing();
    const double length = 2.0 * std::numbers::pi / dp;
    return SpatialGrid(momenta_.size(), length / static_cast<double>(momenta_.size()));
}

bool MomentumAxis::operator==(const MomentumAxis &other) const {
    if (grid_ != other.grid_ || momenta_.size() != other.momenta_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < momenta_.size(); ++i) {
        if (std::abs(momenta_[i] - other.momenta_[i]) > kAxisTolerance ||
            std::abs(weights_[i] - other.weights_[i]) > kAxisTolerance) {
            return false;
        }
    }
    return true;
}

MajoranaState::MajoranaState(MomentumAxis axis, SpinorField amplitudes)
    : axis_(std::move(axis)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.rows()) != axis_.size()) {
        fail(ErrorCode::GridMismatch, "amplitude count does not match the momentum axis");
    }
    require_finite(amplitudes_, "Majorana state");
}

MajoranaState MajoranaState::plane_wave(double p, const Spinor &c) {
    MomentumAxis axis = MomentumAxis::plane_wave(p);
    SpinorField amplitudes = SpinorField::Zero(static_cast<Eigen::Index>(axis.size()), 2);
    amplitudes.row(static_cast<Eigen::Index>(axis.index_of(p))) = c.transpose();
    return MajoranaState(std::move(axis), std::move(amplitudes));
}

MajoranaState MajoranaState::from_position(const MomentumAxis &axis, const SpinorField &values) {
    if (!axis.is_grid()) {
        fail(ErrorCode::GridMismatch, "position samples need a grid momentum axis");
    }
    if (static_cast<std::size_t>(values.rows()) != axis.size()) {
        fail(ErrorCode::GridMismatch, "position sample count does not match the dual grid");
    }
    require_finite(values, "position samples");
    const GridTransform transform(axis);
    return MajoranaState(axis, transform.to_momentum(values));
}

MajoranaState MajoranaState::gaussian(const MomentumAxis &axis, const GaussianPacket &packet) {
    require(packet.width > 0.0, "packet width must be positive");
    require(packet.spinor.norm() > 0.0, "packet spinor must be non-zero");
    const SpatialGrid grid = axis.spatial_grid();
    const Spinor spinor = packet.spinor.normalized();
    const double prefactor = std::pow(2.0 * std::numbers::pi * packet.width * packet.width, -0.25);
    SpinorField values(static_cast<Eigen::Index>(grid.size()), 2);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double dx = grid.x(j) - packet.center;
        const cplx envelope = prefactor * std::exp(-dx * dx / (4.0 * packet.width * packet.width)) *
                              std::polar(1.0, packet.momentum * grid.x(j));
        values.row(static_cast<Eigen::Index>(j)) = (envelope * spinor).transpose();
    }
    return from_position(axis, values).normalized();
}

SpinorField MajoranaState::position_values() const {
    const GridTransform transform(axis_);
    return transform.to_position(amplitudes_);
}

double MajoranaState::norm() const {
    double total = 0.0;
    for (std::size_t i = 0; i < axis_.size(); ++i) {
        total += axis_.weight(i) * amplitudes_.row(static_cast<Eigen::Index>(i)).squaredNorm();
    }
    return total;
}

MajoranaState MajoranaState::normalized() const {
    const double n = norm();
    require(n > 0.0, "cannot normalise a zero state");
    return scaled(1.0 / std::sqrt(n));
}

MajoranaState MajoranaState::scaled(cplx factor) const { return MajoranaState(axis_, amplitudes_ * factor); }

cplx inner_product(const MajoranaState &a, const MajoranaState &b) {
    if (!(a.axis() == b.axis())) {
        fail(ErrorCode::GridMismatch, "inner product of states on different axes");
    }
    cplx total = 0.0;
    for (std::size_t i = 0; i < a.axis().size(); ++i) {
        total += a.axis().weight(i) * a.amplitude(i).dot(b.amplitude(i));
    }
    return total;
}

double state_fidelity(const MajoranaState &a, const MajoranaState &b) {
    return std::norm(inner_product(a, b)) / (a.norm() * b.norm());
}

EnlargedState::EnlargedState(MomentumAxis axis, Eigen::VectorXcd envelope, BispinorField internal)
    : axis_(std::move(axis)), envelope_(std::move(envelope)), internal_(std::move(internal)) {
    if (static_cast<std::size_t>(envelope_.size()) != axis_.size() ||
        static_cast<std::size_t>(internal_.rows()) != axis_.size()) {
        fail(ErrorCode::GridMismatch, "enlarged state size does not match the momentum axis");
    }
    require_finite(envelope_, "envelope");
    require_finite(internal_, "internal state");
}

EnlargedState EnlargedState::from_amplitudes(MomentumAxis axis, const BispinorField &amplitudes) {
    const auto n = amplitudes.rows();
    Eigen::VectorXcd envelope(n);
    BispinorField internal(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double size = amplitudes.row(i).norm();
        envelope(i) = size;
        if (size > 0.0) {
            internal.row(i) = amplitudes.row(i) / size;
        } else {
            internal.row(i) << 1.0, 0.0, 0.0, 0.0;
        }
    }
    return EnlargedState(std::move(axis), std::move(envelope), std::move(internal));
}

BispinorField EnlargedState::amplitudes() const { return envelope_.asDiagonal() * internal_; }

EnlargedState EnlargedState::with_internal(BispinorField internal) const {
    return EnlargedState(axis_, envelope_, std::move(internal));
}

BispinorField EnlargedState::position_values() const {
    const GridTransform transform(axis_);
    return transform.to_position(amplitudes());
}

double EnlargedState::reality_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < axis_.size(); ++i) {
        const Bispinor diff = amplitude(axis_.mirror(i)) - amplitude(i).conjugate();
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    return worst;
}

double EnlargedState::norm() const {
    double total = 0.0;
    for (std::size_t i = 0; i < axis_.size(); ++i) {
        total += axis_.weight(i) * amplitude(i).squaredNorm();
    }
    return total;
}

EnlargedState EnlargedState::normalized() const {
    const double n = norm();
    require(n > 0.0, "cannot normalise a zero state");
    return EnlargedState(axis_, envelope_ / std::sqrt(n), internal_);
}

Matrix24c RecoveryMap::matrix() {
    Matrix24c m;
    m << 1.0, 0.0, kI, 0.0, 0.0, 1.0, 0.0, kI;
    return m;
}

std::string to_string(SymmetryLabel label) {
    switch (label) {
        case SymmetryLabel::K:
            return "K";
        case SymmetryLabel::T:
            return "T";
        case SymmetryLabel::C:
            return "C";
    }
    return "?";
}

SymmetryLabel parse_symmetry_label(const std::string &text) {
    if (text == "K") return SymmetryLabel::K;
    if (text == "T") return SymmetryLabel::T;
    if (text == "C") return SymmetryLabel::C;
    fail(ErrorCode::InvalidArgument, "unknown symmetry operator '" + text + "' (expected K, T or C)");
}

SymmetryOperator SymmetryOperator::make(SymmetryLabel label) {
    Matrix4c m;
    switch (label) {
        case SymmetryLabel::K:
            m = kron(pauli::z(), pauli::identity());
            break;
        case SymmetryLabel::T:
            m = kI * kron(pauli::z(), pauli::y());
            break;
        case SymmetryLabel::C:
            m = -kron(pauli::z(), pauli::x());
            break;
    }
    return SymmetryOperator(m.real(), label);
}

EnlargedState embed(const MajoranaState &psi) {
    const MomentumAxis &axis = psi.axis();
    BispinorField amplitudes(static_cast<Eigen::Index>(axis.size()), 4);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        // The FT of conj(psi) at p is conj(psi~(-p)).
        const Spinor direct = psi.amplitude(i);
        const Spinor mirrored = psi.amplitude(axis.mirror(i)).conjugate();
        Bispinor v;
        v.head<2>() = 0.5 * (direct + mirrored);
        v.tail<2>() = 0.5 * kI * (mirrored - direct);
        amplitudes.row(static_cast<Eigen::Index>(i)) = v.transpose();
    }
    return EnlargedState::from_amplitudes(axis, amplitudes);
}

MajoranaState recover(const EnlargedState &state) {
    const double violation = state.reality_violation();
    if (violation > kRecoverRealityTolerance) {
        fail(ErrorCode::RealityViolation,
             "enlarged state violates the reality condition by " + std::to_string(violation));
    }
    const Matrix24c m = RecoveryMap::matrix();
    SpinorField amplitudes(static_cast<Eigen::Index>(state.axis().size()), 2);
    for (std::size_t i = 0; i < state.axis().size(); ++i) {
        amplitudes.row(static_cast<Eigen::Index>(i)) = (m * state.amplitude(i)).transpose();
    }
    return MajoranaState(state.axis(), std::move(amplitudes));
}

EnlargedState apply_symmetry(const EnlargedState &state, const SymmetryOperator &op) {
    const Matrix4c m = op.matrix().cast<cplx>();
    return state.with_internal(state.internal() * m.transpose());
}

}  // namespace eqsim
