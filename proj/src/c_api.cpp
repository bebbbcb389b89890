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

#include "eqsim/eqsim.h"

#include <exception>
#include <new>
#include <string>

#include "eqsim/dynamics.hpp"
#include "eqsim/observables.hpp"
#include "eqsim/scenario.hpp"

#ifndef EQSIM_VERSION
#define EQSIM_VERSION "unknown"
#endif

struct eqsim_state {
    eqsim::EnlargedState value;
};

struct eqsim_scenario {
    eqsim::Scenario value;
    std::string kind;
};

namespace {

thread_local std::string last_error;

template <typename F>
eqsim_status guarded(F &&body) {
    try {
        body();
        last_error.clear();
        return EQSIM_OK;
    } catch (const eqsim::Error &e) {
        last_error = e.what();
        return static_cast<eqsim_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
    } catch (const std::exception &e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown error";
    }
    return EQSIM_ERR_INTERNAL;
}

template <typename T>
void require_handle(const T *handle, const char *what) {
    eqsim::require(handle != nullptr, std::string(what) + " must not be NULL");
}

}  // namespace

extern "C" {

const char *eqsim_version(void) { return EQSIM_VERSION; }

const char *eqsim_last_error(void) { return last_error.c_str(); }

const char *eqsim_status_name(eqsim_status status) {
    switch (status) {
        case EQSIM_OK:
            return "ok";
        case EQSIM_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case EQSIM_ERR_GRID_MISMATCH:
            return "grid mismatch";
        case EQSIM_ERR_NON_FINITE:
            return "non-finite value";
        case EQSIM_ERR_REALITY_VIOLATION:
            return "reality violation";
        case EQSIM_ERR_NOT_CONVERGED:
            return "not converged";
        case EQSIM_ERR_CONFIG:
            return "configuration error";
        case EQSIM_ERR_INVARIANT:
            return "invariant violated";
        case EQSIM_ERR_IO:
            return "i/o error";
        case EQSIM_ERR_UNKNOWN_SCENARIO:
            return "unknown scenario";
        case EQSIM_ERR_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

eqsim_status eqsim_state_create_plane_wave(double p, double c0_re, double c0_im, double c1_re, double c1_im,
                                           eqsim_state **out) {
    return guarded([&] {
        require_handle(out, "out");
        *out = nullptr;
        const eqsim::Spinor c(eqsim::cplx(c0_re, c0_im), eqsim::cplx(c1_re, c1_im));
        *out = new eqsim_state{eqsim::embed(eqsim::MajoranaState::plane_wave(p, c))};
    });
}

eqsim_status eqsim_state_create_gaussian(size_t points, double p_max, double center, double width, double momentum,
                                         double c0_re, double c0_im, double c1_re, double c1_im, eqsim_state **out) {
    return guarded([&] {
        require_handle(out, "out");
        *out = nullptr;
        eqsim::GaussianPacket packet;
        packet.center = center;
        packet.width = width;
        packet.momentum = momentum;
        packet.spinor = eqsim::Spinor(eqsim::cplx(c0_re, c0_im), eqsim::cplx(c1_re, c1_im));
        const eqsim::MomentumAxis axis = eqsim::MomentumAxis::grid(points, p_max);
        *out = new eqsim_state{eqsim::embed(eqsim::MajoranaState::gaussian(axis, packet))};
    });
}

void eqsim_state_free(eqsim_state *state) { delete state; }

eqsim_status eqsim_state_evolve(eqsim_state *state, double mass, double t) {
    return guarded([&] {
        require_handle(state, "state");
        state->value = eqsim::evolve(state->value, mass, t);
    });
}

eqsim_status eqsim_state_apply_symmetry(eqsim_state *state, const char *label) {
    return guarded([&] {
        require_handle(state, "state");
        require_handle(label, "label");
        const auto op = eqsim::SymmetryOperator::make(eqsim::parse_symmetry_label(label));
        state->value = eqsim::apply_symmetry(state->value, op);
    });
}

eqsim_status eqsim_state_mean_momentum(const eqsim_state *state, double *out) {
    return guarded([&] {
        require_handle(state, "state");
        require_handle(out, "out");
        *out = eqsim::mean_momentum(state->value);
    });
}

eqsim_status eqsim_state_mean_position(const eqsim_state *state, double mass, double *out) {
    return guarded([&] {
        require_handle(state, "state");
        require_handle(out, "out");
        *out = eqsim::mean_position(state->value, mass, 0.0);
    });
}

eqsim_status eqsim_state_charge(const eqsim_state *state, double mass, double *out) {
    return guarded([&] {
        require_handle(state, "state");
        require_handle(out, "out");
        *out = eqsim::charge(eqsim::recover(state->value), mass);
    });
}

eqsim_status eqsim_state_norm(const eqsim_state *state, double *out) {
    return guarded([&] {
        require_handle(state, "state");
        require_handle(out, "out");
        *out = eqsim::recover(state->value).norm();
    });
}

eqsim_status eqsim_state_reality_violation(const eqsim_state *state, double *out) {
    return guarded([&] {
        require_handle(state, "state");
        require_handle(out, "out");
        *out = state->value.reality_violation();
    });
}

size_t eqsim_scenario_count(void) { return eqsim::builtin_scenario_names().size(); }

const char *eqsim_scenario_name(size_t index) {
    static const std::vector<std::string> names = eqsim::builtin_scenario_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

eqsim_status eqsim_scenario_load(const char *name_or_path, eqsim_scenario **out) {
    return guarded([&] {
        require_handle(out, "out");
        *out = nullptr;
        require_handle(name_or_path, "name_or_path");
        eqsim::Scenario s = eqsim::load_scenario(name_or_path);
        std::string kind = eqsim::to_string(s.kind);
        *out = new eqsim_scenario{std::move(s), std::move(kind)};
    });
}

void eqsim_scenario_free(eqsim_scenario *scenario) { delete scenario; }

const char *eqsim_scenario_get_name(const eqsim_scenario *scenario) {
    return scenario ? scenario->value.name.c_str() : nullptr;
}

const char *eqsim_scenario_get_description(const eqsim_scenario *scenario) {
    return scenario ? scenario->value.description.c_str() : nullptr;
}

const char *eqsim_scenario_get_kind(const eqsim_scenario *scenario) {
    return scenario ? scenario->kind.c_str() : nullptr;
}

eqsim_status eqsim_scenario_set_seed(eqsim_scenario *scenario, uint64_t seed) {
    return guarded([&] {
        require_handle(scenario, "scenario");
        scenario->value.seed = seed;
    });
}

eqsim_status eqsim_scenario_set_grid_points(eqsim_scenario *scenario, size_t points) {
    return guarded([&] {
        require_handle(scenario, "scenario");
        if (scenario->value.kind != eqsim::ScenarioKind::Packet) {
            eqsim::fail(eqsim::ErrorCode::Config, "grid.points: only packet scenarios have a momentum grid");
        }
        eqsim::Scenario updated = scenario->value;
        updated.grid.points = points;
        updated.validate();
        scenario->value = std::move(updated);
    });
}

eqsim_status eqsim_scenario_set_shots(eqsim_scenario *scenario, uint64_t shots) {
    return guarded([&] {
        require_handle(scenario, "scenario");
        if (scenario->value.kind == eqsim::ScenarioKind::Hardware) {
            eqsim::fail(eqsim::ErrorCode::Config, "tomography.shots: hardware scenarios have no tomography");
        }
        eqsim::Scenario updated = scenario->value;
        updated.tomography.shots = shots;
        updated.validate();
        scenario->value = std::move(updated);
    });
}

eqsim_status eqsim_scenario_validate(const eqsim_scenario *scenario) {
    return guarded([&] {
        require_handle(scenario, "scenario");
        scenario->value.validate();
    });
}

eqsim_status eqsim_scenario_run(const eqsim_scenario *scenario, const char *out_dir, int *invariants_passed) {
    return guarded([&] {
        require_handle(scenario, "scenario");
        require_handle(out_dir, "out_dir");
        const eqsim::RunResult result = eqsim::run_scenario(scenario->value, out_dir);
        if (invariants_passed) *invariants_passed = result.invariants_passed() ? 1 : 0;
    });
}

}  // extern "C"
