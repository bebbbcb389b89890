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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>

namespace {

namespace fs = std::filesystem;

struct StateDeleter {
    void operator()(eqsim_state *s) const { eqsim_state_free(s); }
};
struct ScenarioDeleter {
    void operator()(eqsim_scenario *s) const { eqsim_scenario_free(s); }
};
using State = std::unique_ptr<eqsim_state, StateDeleter>;
using Scenario = std::unique_ptr<eqsim_scenario, ScenarioDeleter>;

State packet(size_t points = 65) {
    eqsim_state *raw = nullptr;
    EXPECT_EQ(eqsim_state_create_gaussian(points, 4.0, 0.0, std::sqrt(2.0), 1.0, M_SQRT1_2, 0.0, M_SQRT1_2, 0.0, &raw),
              EQSIM_OK)
        << eqsim_last_error();
    return State(raw);
}

Scenario load(const char *name) {
    eqsim_scenario *raw = nullptr;
    EXPECT_EQ(eqsim_scenario_load(name, &raw), EQSIM_OK) << eqsim_last_error();
    return Scenario(raw);
}

TEST(CApi, PlaneWaveChargeAtZeroMomentum) {
    eqsim_state *raw = nullptr;
    ASSERT_EQ(eqsim_state_create_plane_wave(0.0, 1.0, 0.0, 0.0, 0.0, &raw), EQSIM_OK);
    State s(raw);
    for (double t : {0.0, 0.3, 1.1}) {
        State copy;
        ASSERT_EQ(eqsim_state_create_plane_wave(0.0, 1.0, 0.0, 0.0, 0.0, &raw), EQSIM_OK);
        copy.reset(raw);
        ASSERT_EQ(eqsim_state_evolve(copy.get(), 1.0, t), EQSIM_OK);
        double q = 0.0;
        ASSERT_EQ(eqsim_state_charge(copy.get(), 1.0, &q), EQSIM_OK);
        EXPECT_NEAR(q, std::cos(2.0 * t), 1e-12);
    }
}

TEST(CApi, PacketObservables) {
    State s = packet();
    double norm = 0.0, x0 = 0.0, x = 0.0, p = 0.0;
    ASSERT_EQ(eqsim_state_norm(s.get(), &norm), EQSIM_OK);
    EXPECT_NEAR(norm, 1.0, 1e-8);
    ASSERT_EQ(eqsim_state_mean_position(s.get(), 1.0, &x0), EQSIM_OK);
    ASSERT_EQ(eqsim_state_evolve(s.get(), 1.0, 4.0), EQSIM_OK);
    ASSERT_EQ(eqsim_state_mean_position(s.get(), 1.0, &x), EQSIM_OK);
    ASSERT_EQ(eqsim_state_mean_momentum(s.get(), &p), EQSIM_OK);
    ASSERT_EQ(eqsim_state_apply_symmetry(s.get(), "T"), EQSIM_OK);
    ASSERT_EQ(eqsim_state_evolve(s.get(), 1.0, 4.0), EQSIM_OK);
    double x_back = 0.0;
    ASSERT_EQ(eqsim_state_mean_position(s.get(), 1.0, &x_back), EQSIM_OK);
    EXPECT_NEAR(x_back, x0, 1e-6);
    EXPECT_GT(std::abs(x - x0), 0.1);
}

TEST(CApi, ErrorsMapToStatusCodes) {
    eqsim_state *raw = nullptr;
    EXPECT_EQ(eqsim_state_create_gaussian(64, 4.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, &raw),
              EQSIM_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(raw, nullptr);
    EXPECT_NE(std::string(eqsim_last_error()), "");

    State s = packet(33);
    EXPECT_EQ(eqsim_state_apply_symmetry(s.get(), "Q"), EQSIM_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(eqsim_state_evolve(s.get(), 1.0, NAN), EQSIM_ERR_NON_FINITE);
    double v = 0.0;
    EXPECT_EQ(eqsim_state_norm(nullptr, &v), EQSIM_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(eqsim_state_norm(s.get(), &v), EQSIM_OK);
    EXPECT_STREQ(eqsim_last_error(), "");

    eqsim_scenario *sc = nullptr;
    EXPECT_EQ(eqsim_scenario_load("definitely-not-a-scenario", &sc), EQSIM_ERR_UNKNOWN_SCENARIO);
    EXPECT_EQ(sc, nullptr);
    EXPECT_STREQ(eqsim_status_name(EQSIM_ERR_CONFIG), "configuration error");
    eqsim_state_free(nullptr);
    eqsim_scenario_free(nullptr);
}

TEST(CApi, LastErrorIsPerThread) {
    eqsim_scenario *sc = nullptr;
    ASSERT_NE(eqsim_scenario_load("nope", &sc), EQSIM_OK);
    std::string other;
    std::thread([&] { other = eqsim_last_error(); }).join();
    EXPECT_EQ(other, "");
    EXPECT_NE(std::string(eqsim_last_error()), "");
}

TEST(CApi, ScenarioCatalogue) {
    ASSERT_GE(eqsim_scenario_count(), 8u);
    EXPECT_EQ(eqsim_scenario_name(eqsim_scenario_count()), nullptr);
    for (size_t i = 0; i < eqsim_scenario_count(); ++i) {
        Scenario s = load(eqsim_scenario_name(i));
        ASSERT_TRUE(s);
        EXPECT_STREQ(eqsim_scenario_get_name(s.get()), eqsim_scenario_name(i));
        EXPECT_EQ(eqsim_scenario_validate(s.get()), EQSIM_OK);
    }
}

TEST(CApi, OverridesAreValidated) {
    Scenario packet_scenario = load("fig3-timereversal");
    EXPECT_EQ(eqsim_scenario_set_grid_points(packet_scenario.get(), 33), EQSIM_OK);
    EXPECT_EQ(eqsim_scenario_set_grid_points(packet_scenario.get(), 32), EQSIM_ERR_CONFIG);
    EXPECT_EQ(eqsim_scenario_set_shots(packet_scenario.get(), 0), EQSIM_ERR_CONFIG);
    EXPECT_EQ(eqsim_scenario_validate(packet_scenario.get()), EQSIM_OK);

    Scenario plane = load("fig2a");
    EXPECT_EQ(eqsim_scenario_set_grid_points(plane.get(), 33), EQSIM_ERR_CONFIG);
    EXPECT_EQ(eqsim_scenario_set_shots(plane.get(), 250), EQSIM_OK);
    EXPECT_EQ(eqsim_scenario_set_seed(plane.get(), 7), EQSIM_OK);

    Scenario hw = load("hardware-calibration");
    EXPECT_EQ(eqsim_scenario_set_shots(hw.get(), 100), EQSIM_ERR_CONFIG);
}

TEST(CApi, RunWritesManifest) {
    Scenario s = load("fig2d");
    const fs::path dir = fs::temp_directory_path() / "eqsim_capi_run";
    fs::remove_all(dir);
    int passed = -1;
    ASSERT_EQ(eqsim_scenario_run(s.get(), dir.string().c_str(), &passed), EQSIM_OK) << eqsim_last_error();
    EXPECT_EQ(passed, 1);
    EXPECT_TRUE(fs::exists(dir / "manifest.json"));
    EXPECT_TRUE(fs::exists(dir / "orthogonality_p1.csv"));
    EXPECT_EQ(eqsim_scenario_run(s.get(), nullptr, &passed), EQSIM_ERR_INVALID_ARGUMENT);
}

}  // namespace
