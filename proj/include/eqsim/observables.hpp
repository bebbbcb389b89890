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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eqsim/core.hpp"

namespace eqsim {

/// A sampled observable. `errors` is either empty or one standard error per
/// sample.
struct ObservableSeries {
    std::string label;
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> errors;

    /// Throws InvalidArgument unless lengths agree and times strictly increase.
    void validate() const;
};

/// Particle/antiparticle spinors of sigma_x p + m sigma_z at one momentum,
/// energies +/- sqrt(p^2 + m^2). sign(0) is taken as +1, so at p = 0 the
/// particle is (1, 0) and the antiparticle (0, -1).
struct DiracEigenbasis {
    double p = 0.0;
    double m = 0.0;
    double energy = 0.0;
    Spinor particle;
    Spinor antiparticle;
};

DiracEigenbasis dirac_eigenbasis(double p, double m);

// Momentum-diagonal observables -----------------------------------------------

/// sum_p w_p |Psi(p)|^2 f(p) Tr[rho_p M^dagger Sigma M] with rho_p = chi_p chi_p^dagger.
/// Sigma must be Hermitian.
double expect_diagonal(const EnlargedState &state, const Matrix2c &sigma, const std::function<double(double)> &f);

/// As expect_diagonal with a momentum-dependent Sigma(p).
double expect_mode_operator(const EnlargedState &state, const std::function<Matrix2c(double)> &sigma);

double mean_momentum(const EnlargedState &state);

/// <p>(t) for the given initial state and times.
ObservableSeries mean_momentum(const EnlargedState &initial, double m, std::span<const double> times);

// Charge -----------------------------------------------------------------------

struct Populations {
    double particle = 0.0;
    double antiparticle = 0.0;
};

/// Particle minus antiparticle population, projecting each mode onto the
/// Dirac eigenbasis at the same momentum.
double charge(const MajoranaState &psi, double m);

/// Same, with explicit bases (one per axis mode, matched by momentum).
double charge(const MajoranaState &psi, const std::vector<DiracEigenbasis> &bases);

Populations particle_antiparticle_populations(const MajoranaState &psi, double m);

/// Per-mode particle and antiparticle populations (weights not applied).
struct PopulationDistributions {
    std::vector<double> momenta;
    std::vector<double> particle;
    std::vector<double> antiparticle;
};

PopulationDistributions particle_antiparticle_distributions(const MajoranaState &psi, double m);

// Plane-wave overlap observables -----------------------------------------------

/// |<psi(t)|psi_theta(t)>|^2 for psi(0) = (1,0) (x) |p> and psi_theta(0) = e^{i theta} psi(0).
double fidelity_global_phase(double p, double m, double theta, double t);

enum class OrthogonalVariant {
    /// Partner starts as (0,1) (x) |-p>.
    Opposite,
    /// Partner starts as (0,1) (x) |p>.
    Same,
};

/// |<psi(t)|psi_perp(t)>|^2 with psi(0) = (1,0) (x) |p>.
double orthogonality(double p, double m, double t, OrthogonalVariant variant);

// Position-space observables ----------------------------------------------------

struct PositionEstimate {
    /// Sweep over (p, p') pairs evolved coherently in the sigma_x block basis.
    double pipeline = 0.0;
    /// Direct sum x |psi(x)|^2 of the recovered, inverse-transformed state.
    double oracle = 0.0;
    /// The -i(<chi+|chi'-> - <chi-|chi'+>) contribution with the same x kernel;
    /// vanishes for states obeying the reality condition.
    double cross_term = 0.0;
    /// Same cross contribution without the x weight, max over grid points.
    double cross_density = 0.0;
};

/// <x> of the state evolved by t, computed both ways. Grid axes only.
PositionEstimate mean_position_estimate(const EnlargedState &state, double m, double t);

inline constexpr double kPositionConsistencyTolerance = 1e-4;

/// The pipeline value of <x>; throws Invariant if the two routes disagree by
/// more than kPositionConsistencyTolerance.
double mean_position(const EnlargedState &state, double m, double t);

/// sum_j dx x_j |psi(x_j)|^2 of an original-space grid state.
double mean_position_direct(const MajoranaState &psi);

/// <sigma_x> = d<x>/dt of an original-space state.
double mean_velocity(const MajoranaState &psi);

struct DensitySnapshot {
    std::vector<double> momenta;
    /// |psi~(p)|^2 of the recovered state.
    std::vector<double> momentum_density;
    /// |Psi(p)|^2 |chi_p|^2, symmetric in p.
    std::vector<double> enlarged_momentum_density;
    std::vector<double> positions;
    std::vector<double> position_density;
};

/// Densities of the state evolved by t. Grid axes only.
DensitySnapshot density_distributions(const EnlargedState &state, double m, double t);

// Fitting -------------------------------------------------------------------------

struct OscillationFit {
    double omega = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double offset = 0.0;
    double rms_residual = 0.0;
};

/// Least-squares fit of A cos(omega t + phi) + B, scanning omega over
/// [omega_min, omega_max] and refining the best bracket by golden section.
OscillationFit fit_oscillation(std::span<const double> times, std::span<const double> values, double omega_min = 0.1,
                               double omega_max = 20.0);

}  // namespace eqsim
