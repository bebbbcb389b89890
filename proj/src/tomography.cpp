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

#include "eqsim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eqsim/core.hpp"

namespace eqsim {

namespace {

constexpr double kDensityTolerance = 1e-12;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::mt19937_64 &engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

Matrix2c single_pauli(Pauli p) {
    switch (p) {
        case Pauli::I:
            return pauli::identity();
        case Pauli::X:
            return pauli::x();
        case Pauli::Y:
            return pauli::y();
        case Pauli::Z:
            return pauli::z();
    }
    return pauli::identity();
}

/// Columns are the +1 and -1 eigenvectors read out as outcomes 0 and 1.
Matrix2c measurement_basis(Pauli p) {
    const double r = 1.0 / std::sqrt(2.0);
    Matrix2c b;
    switch (p) {
        case Pauli::X:
            b << r, r, r, -r;
            break;
        case Pauli::Y:
            b << r, r, r * kI, -r * kI;
            break;
        default:
            b = Matrix2c::Identity();
            break;
    }
    return b;
}

char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

}  // namespace

std::string PauliSetting::label() const { return std::string{pauli_char(first), pauli_char(second)}; }

PauliSetting PauliSetting::from_id(int id) {
    require(id >= 0 && id < 16, "Pauli setting id must be in [0, 16)");
    return {static_cast<Pauli>(id / 4), static_cast<Pauli>(id % 4)};
}

std::vector<PauliSetting> all_pauli_settings() {
    std::vector<PauliSetting> out;
    for (int id = 0; id < 16; ++id) {
        out.push_back(PauliSetting::from_id(id));
    }
    return out;
}

Matrix4c pauli_string(PauliSetting setting) { return kron(single_pauli(setting.first), single_pauli(setting.second)); }

std::array<double, 4> outcome_probabilities(const Matrix4c &rho, PauliSetting setting) {
    const Matrix4c basis = kron(measurement_basis(setting.first), measurement_basis(setting.second));
    std::array<double, 4> probs{};
    for (int b = 0; b < 4; ++b) {
        probs[b] = std::max(0.0, (basis.col(b).adjoint() * rho * basis.col(b))(0, 0).real());
    }
    return probs;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::vector<ShotRecord> sample_density(const Matrix4c &rho, std::span<const PauliSetting> settings,
                                       std::uint64_t shots, std::uint64_t seed) {
    require(shots >= 1, "at least one shot per setting is required");
    validate_density(rho);
    std::vector<ShotRecord> records;
    records.reserve(settings.size());
    for (const PauliSetting &setting : settings) {
        const std::array<double, 4> probs = outcome_probabilities(rho, setting);
        std::array<double, 4> cdf{};
        double running = 0.0;
        for (int b = 0; b < 4; ++b) {
            running += probs[b];
            cdf[b] = running;
        }
        ShotRecord record;
        record.setting = setting;
        record.shots = shots;
        record.seed = seed;
        std::mt19937_64 engine(derive_stream_seed(seed, static_cast<std::uint64_t>(setting.id())));
        for (std::uint64_t s = 0; s < shots; ++s) {
            const double u = uniform01(engine) * running;
            int outcome = 0;
            while (outcome < 3 && u >= cdf[outcome]) {
                ++outcome;
            }
            ++record.counts[outcome];
        }
        records.push_back(record);
    }
    return records;
}

std::vector<ShotRecord> sample(const Bispinor &chi, std::span<const PauliSetting> settings, std::uint64_t shots,
                               std::uint64_t seed) {
    if (!chi.allFinite() || std::abs(chi.squaredNorm() - 1.0) > 1e-10) {
        fail(ErrorCode::InvalidArgument, "sampling needs a normalised internal state");
    }
    const Bispinor unit = chi.normalized();
    return sample_density(unit * unit.adjoint(), settings, shots, seed);
}

double pauli_expectation(PauliSetting setting, const std::array<double, 4> &frequencies) {
    double total = 0.0;
    for (int b = 0; b < 4; ++b) {
        const int b1 = b >> 1;
        const int b2 = b & 1;
        const double s1 = setting.first == Pauli::I ? 1.0 : (b1 == 0 ? 1.0 : -1.0);
        const double s2 = setting.second == Pauli::I ? 1.0 : (b2 == 0 ? 1.0 : -1.0);
        total += s1 * s2 * frequencies[b];
    }
    return total;
}

std::vector<std::array<double, 4>> ideal_frequencies(const Matrix4c &rho) {
    std::vector<std::array<double, 4>> out;
    for (const PauliSetting &setting : all_pauli_settings()) {
        out.push_back(outcome_probabilities(rho, setting));
    }
    return out;
}

Matrix4c linear_inversion(std::span<const std::array<double, 4>> frequencies) {
    if (frequencies.size() != 16) {
        fail(ErrorCode::InvalidArgument, "reconstruction needs all 16 Pauli settings");
    }
    Matrix4c linear = Matrix4c::Zero();
    for (int id = 0; id < 16; ++id) {
        const PauliSetting setting = PauliSetting::from_id(id);
        const double value = id == 0 ? 1.0 : pauli_expectation(setting, frequencies[static_cast<std::size_t>(id)]);
        linear += 0.25 * value * pauli_string(setting);
    }
    return linear;
}

Matrix4c reconstruct_from_frequencies(std::span<const std::array<double, 4>> frequencies) {
    const Matrix4c out = project_to_physical(linear_inversion(frequencies));
    validate_density(out);
    return out;
}

std::vector<std::array<double, 4>> frequencies_by_setting(std::span<const ShotRecord> records) {
    std::vector<std::array<double, 4>> frequencies(16);
    std::array<bool, 16> seen{};
    for (const ShotRecord &record : records) {
        const int id = record.setting.id();
        if (seen[static_cast<std::size_t>(id)]) {
            fail(ErrorCode::InvalidArgument, "setting " + record.setting.label() + " appears more than once");
        }
        std::uint64_t total = 0;
        for (std::uint64_t c : record.counts) {
            total += c;
        }
        if (record.shots == 0 || total != record.shots) {
            fail(ErrorCode::InvalidArgument, "counts of setting " + record.setting.label() + " do not sum to shots");
        }
        seen[static_cast<std::size_t>(id)] = true;
        for (int b = 0; b < 4; ++b) {
            frequencies[static_cast<std::size_t>(id)][b] =
                static_cast<double>(record.counts[b]) / static_cast<double>(record.shots);
        }
    }
    for (int id = 0; id < 16; ++id) {
        if (!seen[static_cast<std::size_t>(id)]) {
            fail(ErrorCode::InvalidArgument,
                 "incomplete settings: " + PauliSetting::from_id(id).label() + " was not measured");
        }
    }
    return frequencies;
}

Matrix4c reconstruct(std::span<const ShotRecord> records) {
    return reconstruct_from_frequencies(frequencies_by_setting(records));
}

Matrix4c project_to_physical(const Matrix4c &rho) {
    const Matrix4c hermitian = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(hermitian);
    Eigen::Vector4d values = solver.eigenvalues().cwiseMax(0.0);
    const double trace = values.sum();
    if (!(trace > 0.0)) {
        fail(ErrorCode::Invariant, "reconstructed matrix has no positive spectrum");
    }
    values /= trace;
    Matrix4c out = solver.eigenvectors() * values.cast<cplx>().asDiagonal() * solver.eigenvectors().adjoint();
    return 0.5 * (out + out.adjoint());
}

void validate_density(const Eigen::MatrixXcd &rho) {
    if (rho.rows() != rho.cols()) {
        fail(ErrorCode::Invariant, "density matrix must be square");
    }
    if (!rho.allFinite()) {
        fail(ErrorCode::NonFinite, "density matrix contains non-finite entries");
    }
    if (hermiticity_defect(rho) > kDensityTolerance) {
        fail(ErrorCode::Invariant, "density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - cplx(1.0)) > kDensityTolerance) {
        fail(ErrorCode::Invariant, "density matrix does not have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
    if (solver.eigenvalues().minCoeff() < -kDensityTolerance) {
        fail(ErrorCode::Invariant, "density matrix has a negative eigenvalue");
    }
}

Matrix2c map_to_original(const Matrix4c &rho4) {
    const Matrix24c m = RecoveryMap::matrix();
    return m * rho4 * m.adjoint();
}

double trace_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        fail(ErrorCode::InvalidArgument, "trace distance of differently sized matrices");
    }
    const Eigen::MatrixXcd diff = a - b;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (diff + diff.adjoint()));
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

Estimate estimate_with_error(const Bispinor &chi, const DensityObservable &observable, std::uint64_t shots,
                             std::size_t runs, std::uint64_t seed, Estimator estimator) {
    if (runs < 2) {
        fail(ErrorCode::InvalidArgument, "error bars need at least two runs");
    }
    const std::vector<PauliSetting> settings = all_pauli_settings();
    Estimate estimate;
    for (std::size_t r = 0; r < runs; ++r) {
        const std::vector<ShotRecord> records = sample(chi, settings, shots, derive_stream_seed(seed, 1000 + r));
        const auto frequencies = frequencies_by_setting(records);
        estimate.runs.push_back(observable(estimator == Estimator::Linear ? linear_inversion(frequencies)
                                                                          : reconstruct_from_frequencies(frequencies)));
    }
    double sum = 0.0;
    for (double v : estimate.runs) {
        sum += v;
    }
    estimate.mean = sum / static_cast<double>(runs);
    double squares = 0.0;
    for (double v : estimate.runs) {
        squares += (v - estimate.mean) * (v - estimate.mean);
    }
    estimate.error = std::sqrt(squares / static_cast<double>(runs - 1));
    return estimate;
}

ObservableSeries error_bars(const std::string &label, std::span<const double> times,
                            std::span<const Bispinor> states, const DensityObservable &observable,
                            std::uint64_t shots, std::size_t runs, std::uint64_t seed, Estimator estimator) {
    require(times.size() == states.size(), "one state per sample time is required");
    ObservableSeries series;
    series.label = label;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Estimate e = estimate_with_error(states[i], observable, shots, runs, derive_stream_seed(seed, i), estimator);
        series.times.push_back(times[i]);
        series.values.push_back(e.mean);
        series.errors.push_back(e.error);
    }
    series.validate();
    return series;
}

}  // namespace eqsim
