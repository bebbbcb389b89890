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

/* C interface to eqsim. Every function returning eqsim_status leaves a
 * description of the last failure in eqsim_last_error() (per thread). */
#ifndef EQSIM_EQSIM_H
#define EQSIM_EQSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(EQSIM_BUILDING_LIBRARY)
#define EQSIM_API __attribute__((visibility("default")))
#else
#define EQSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eqsim_status {
    EQSIM_OK = 0,
    EQSIM_ERR_INVALID_ARGUMENT = 1,
    EQSIM_ERR_GRID_MISMATCH = 2,
    EQSIM_ERR_NON_FINITE = 3,
    EQSIM_ERR_REALITY_VIOLATION = 4,
    EQSIM_ERR_NOT_CONVERGED = 5,
    EQSIM_ERR_CONFIG = 6,
    EQSIM_ERR_INVARIANT = 7,
    EQSIM_ERR_IO = 8,
    EQSIM_ERR_UNKNOWN_SCENARIO = 9,
    EQSIM_ERR_INTERNAL = 99
} eqsim_status;

typedef struct eqsim_state eqsim_state;
typedef struct eqsim_scenario eqsim_scenario;

EQSIM_API const char *eqsim_version(void);
/* Message of the last failed call on this thread; "" if none. */
EQSIM_API const char *eqsim_last_error(void);
EQSIM_API const char *eqsim_status_name(eqsim_status status);

/* States. Spinor components are given as (re, im) pairs. */
EQSIM_API eqsim_status eqsim_state_create_plane_wave(double p, double c0_re, double c0_im, double c1_re, double c1_im,
                                                     eqsim_state **out);
/* Gaussian packet on a grid of `points` (odd) momenta in [-p_max, p_max];
 * `width` is the standard deviation of the position density. */
EQSIM_API eqsim_status eqsim_state_create_gaussian(size_t points, double p_max, double center, double width,
                                                   double momentum, double c0_re, double c0_im, double c1_re,
                                                   double c1_im, eqsim_state **out);
EQSIM_API void eqsim_state_free(eqsim_state *state);

EQSIM_API eqsim_status eqsim_state_evolve(eqsim_state *state, double mass, double t);
/* label is "K", "T" or "C". */
EQSIM_API eqsim_status eqsim_state_apply_symmetry(eqsim_state *state, const char *label);

EQSIM_API eqsim_status eqsim_state_mean_momentum(const eqsim_state *state, double *out);
/* Grid states only. */
EQSIM_API eqsim_status eqsim_state_mean_position(const eqsim_state *state, double mass, double *out);
EQSIM_API eqsim_status eqsim_state_charge(const eqsim_state *state, double mass, double *out);
EQSIM_API eqsim_status eqsim_state_norm(const eqsim_state *state, double *out);
EQSIM_API eqsim_status eqsim_state_reality_violation(const eqsim_state *state, double *out);

/* Scenarios. */
EQSIM_API size_t eqsim_scenario_count(void);
/* Name of built-in scenario i, or NULL when out of range. */
EQSIM_API const char *eqsim_scenario_name(size_t index);
/* Built-in name or path to a YAML file. */
EQSIM_API eqsim_status eqsim_scenario_load(const char *name_or_path, eqsim_scenario **out);
EQSIM_API void eqsim_scenario_free(eqsim_scenario *scenario);

/* Borrowed strings, valid until the handle is freed. */
EQSIM_API const char *eqsim_scenario_get_name(const eqsim_scenario *scenario);
EQSIM_API const char *eqsim_scenario_get_description(const eqsim_scenario *scenario);
EQSIM_API const char *eqsim_scenario_get_kind(const eqsim_scenario *scenario);

EQSIM_API eqsim_status eqsim_scenario_set_seed(eqsim_scenario *scenario, uint64_t seed);
/* Packet scenarios only. */
EQSIM_API eqsim_status eqsim_scenario_set_grid_points(eqsim_scenario *scenario, size_t points);
/* Scenarios with tomography only. */
EQSIM_API eqsim_status eqsim_scenario_set_shots(eqsim_scenario *scenario, uint64_t shots);

EQSIM_API eqsim_status eqsim_scenario_validate(const eqsim_scenario *scenario);
/* Writes outputs into out_dir (created if missing). *invariants_passed is set
 * to 1 or 0 when the run completes; a failed invariant is not an error status. */
EQSIM_API eqsim_status eqsim_scenario_run(const eqsim_scenario *scenario, const char *out_dir,
                                          int *invariants_passed);

#ifdef __cplusplus
}
#endif

#endif /* EQSIM_EQSIM_H */
