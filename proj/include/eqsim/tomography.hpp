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

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eqsim/linalg.hpp"
#include "eqsim/observables.hpp"

namespace eqsim {

enum class Pauli : int { I = 0, X = 1, Y = 2, Z = 3 };

/// A two-qubit measurement setting. The first Pauli acts on the high bit, so
/// outcome index b = 2 b_1 + b_2 labels |1..4> = |00>, |01>, |10>, |11>.
/// An I factor is read out in the Z basis and marginalised.
struct PauliSetting {
    Pauli first = Pauli::I;
    Pauli second = Pauli::I;

    /// 0..15, first * 4 + second.
    int id() const noexcept { return 4 * static_cast<int>(first) + static_cast<int>(second); }
    std::string label() const;
    static PauliSetting from_id(int id);

    bool operator==(const PauliSetting &) const = default;
};

/// The 16 settings {I,X,Y,Z} x {I,X,Y,Z}, ordered by id.
std::vector<PauliSetting> all_pauli_settings();

Matrix4c pauli_string(PauliSetting setting);

inline constexpr std::uint64_t kDefaultShots = 1000;

struct ShotRecord {
    PauliSetting setting;
    std::array<std::uint64_t, 4> counts{};
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

/// Outcome probabilities of one setting; sums to Tr rho.
std::array<double, 4> outcome_probabilities(const Matrix4c &rho, PauliSetting setting);

/// Seed of the independent stream `stream` derived from a user seed
/// (SplitMix64 finaliser applied to seed and stream).
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Multinomial shot sampling for each setting. Each setting draws from its
/// own std::mt19937_64 stream seeded with derive_stream_seed(seed, id), using
/// 53-bit uniforms u = (x >> 11) 2^-53 and inverse-CDF outcome selection, so
/// counts are identical across platforms and independent of setting order.
std::vector<ShotRecord> sample(const Bispinor &chi, std::span<const PauliSetting> settings, std::uint64_t shots,
                               std::uint64_t seed);
std::vector<ShotRecord> sample_density(const Matrix4c &rho, std::span<const PauliSetting> settings,
                                       std::uint64_t shots, std::uint64_t seed);

/// Expectation of the setting's Pauli string from its outcome frequencies.
double pauli_expectation(PauliSetting setting, const std::array<double, 4> &frequencies);

/// Exact outcome probabilities of all 16 settings (the infinite-shot limit).
std::vector<std::array<double, 4>> ideal_frequencies(const Matrix4c &rho);

/// Linear inversion rho = 1/4 sum_P <P> P from per-setting frequencies indexed
/// by setting id. Unit trace and Hermitian, but not necessarily PSD.
Matrix4c linear_inversion(std::span<const std::array<double, 4>> frequencies);

/// Frequencies indexed by setting id; requires every setting exactly once.
std::vector<std::array<double, 4>> frequencies_by_setting(std::span<const ShotRecord> records);

/// Linear inversion followed by projection onto the
/// closest unit-trace PSD matrix (eigenvalue clipping and renormalisation).
/// Requires every one of the 16 settings exactly once.
Matrix4c reconstruct(std::span<const ShotRecord> records);
/// Same from per-setting frequencies indexed by setting id.
Matrix4c reconstruct_from_frequencies(std::span<const std::array<double, 4>> frequencies);

/// Clip negative eigenvalues to zero and renormalise the trace.
Matrix4c project_to_physical(const Matrix4c &rho);

/// Throws Invariant unless rho is Hermitian (1e-12), unit trace (1e-12) and
/// has eigenvalues >= -1e-12.
void validate_density(const Eigen::MatrixXcd &rho);

/// rho = M varrho M^dagger.
Matrix2c map_to_original(const Matrix4c &rho4);

/// (1/2) || a - b ||_1 for Hermitian a, b.
double trace_distance(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

using DensityObservable = std::function<double(const Matrix4c &)>;

/// Which reconstruction an observable is evaluated on. The linear estimate is
/// unbiased; the PSD projection shrinks expectation values by O(noise).
enum class Estimator { Linear, Projected };

struct Estimate {
    double mean = 0.0;
    /// Sample standard deviation of the per-run values, i.e. the spread of a
    /// single run at the given shot count.
    double error = 0.0;
    std::vector<double> runs;
};

/// Repeats sample -> reconstruct -> observable over `runs` seeded runs.
/// Run r uses seed derive_stream_seed(seed, 1000 + r).
Estimate estimate_with_error(const Bispinor &chi, const DensityObservable &observable, std::uint64_t shots,
                             std::size_t runs, std::uint64_t seed, Estimator estimator = Estimator::Linear);

/// Applies estimate_with_error at every sample of a trajectory.
ObservableSeries error_bars(const std::string &label, std::span<const double> times,
                            std::span<const Bispinor> states, const DensityObservable &observable,
                            std::uint64_t shots, std::size_t runs, std::uint64_t seed,
                            Estimator estimator = Estimator::Linear);

}  // namespace eqsim
