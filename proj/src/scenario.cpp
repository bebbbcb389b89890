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

#include "eqsim/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "eqsim/dynamics.hpp"
#include "eqsim/hardware.hpp"
#include "eqsim/observables.hpp"
#include "json.hpp"

#ifndef EQSIM_VERSION
#define EQSIM_VERSION "unknown"
#endif

namespace eqsim {

namespace detail {
const std::vector<std::pair<std::string, std::string>> &builtin_scenario_table();
}  // namespace detail

namespace {

using Json = nlohmann::ordered_json;

constexpr double kGridTolerance = 1e-9;
constexpr std::size_t kMaxSamples = 1000000;

[[noreturn]] void config_error(const std::string &path, const std::string &message) {
    fail(ErrorCode::Config, (path.empty() ? std::string("<root>") : path) + ": " + message);
}

/// A YAML node together with its dotted path, for error messages.
class Field {
   public:
    Field(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {}

    const std::string &path() const { return path_; }
    bool has(const std::string &key) const { return node_[key].IsDefined() && !node_[key].IsNull(); }

    Field child(const std::string &key) const {
        return Field(node_[key], path_.empty() ? key : path_ + "." + key);
    }

    void expect_map(std::initializer_list<const char *> allowed) const {
        if (!node_.IsMap()) {
            config_error(path_, "expected a mapping");
        }
        for (const auto &entry : node_) {
            const std::string key = entry.first.as<std::string>();
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; })) {
                config_error(path_.empty() ? key : path_ + "." + key, "unknown key");
            }
        }
    }

    std::vector<Field> items() const {
        if (!node_.IsSequence()) {
            config_error(path_, "expected a list");
        }
        std::vector<Field> out;
        for (std::size_t i = 0; i < node_.size(); ++i) {
            out.emplace_back(node_[i], path_ + "[" + std::to_string(i) + "]");
        }
        return out;
    }

    std::string text() const {
        if (!node_.IsScalar()) {
            config_error(path_, "expected a scalar");
        }
        return node_.Scalar();
    }

    double number() const {
        double value = 0.0;
        try {
            value = node_.as<double>();
        } catch (const YAML::Exception &) {
            config_error(path_, "expected a number, got '" + (node_.IsScalar() ? node_.Scalar() : "<non-scalar>") + "'");
        }
        if (!std::isfinite(value)) {
            config_error(path_, "must be finite");
        }
        return value;
    }

    std::uint64_t count() const {
        const std::string s = text();
        if (s.empty() || s.size() > 19 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            config_error(path_, "expected a non-negative integer, got '" + s + "'");
        }
        return std::stoull(s);
    }

    bool flag() const {
        try {
            return node_.as<bool>();
        } catch (const YAML::Exception &) {
            config_error(path_, "expected true or false");
        }
    }

    std::vector<double> numbers() const {
        std::vector<double> out;
        for (const Field &f : items()) {
            out.push_back(f.number());
        }
        return out;
    }

    cplx complex() const {
        if (node_.IsSequence()) {
            const auto parts = items();
            if (parts.size() != 2) {
                config_error(path_, "complex numbers are written as [re, im]");
            }
            return {parts[0].number(), parts[1].number()};
        }
        return {number(), 0.0};
    }

    Spinor spinor() const {
        const auto parts = items();
        if (parts.size() != 2) {
            config_error(path_, "a spinor has two components");
        }
        return {parts[0].complex(), parts[1].complex()};
    }

   private:
    YAML::Node node_;
    std::string path_;
};

ScenarioKind parse_kind(const Field &f) {
    const std::string s = f.text();
    if (s == "plane_waves") return ScenarioKind::PlaneWaves;
    if (s == "packet") return ScenarioKind::Packet;
    if (s == "hardware") return ScenarioKind::Hardware;
    config_error(f.path(), "unknown kind '" + s + "' (plane_waves, packet, hardware)");
}

bool on_time_grid(const TimeSpan &span, double t) {
    const double k = std::round((t - span.start) / span.dt);
    return std::abs(span.start + k * span.dt - t) <= kGridTolerance * span.dt;
}

bool near(double a, double b, double dt) { return std::abs(a - b) <= kGridTolerance * dt; }

bool contains_time(const std::vector<double> &list, double t, double dt) {
    return std::any_of(list.begin(), list.end(), [&](double x) { return near(x, t, dt); });
}

void check_times(const std::vector<double> &list, const TimeSpan &span, const std::string &path) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!std::isfinite(list[i]) || list[i] < span.start - kGridTolerance * span.dt ||
            list[i] > span.end + kGridTolerance * span.dt) {
            config_error(p, "time lies outside the time span");
        }
        if (!on_time_grid(span, list[i])) {
            config_error(p, "time is not a multiple of time.dt from time.start");
        }
        if (i > 0 && list[i] <= list[i - 1]) {
            config_error(p, "times must be strictly increasing");
        }
    }
}

std::string format_tag(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

bool has_observable(const Scenario &s, const std::string &name) {
    return std::find(s.observables.begin(), s.observables.end(), name) != s.observables.end();
}

Json spinor_json(const Spinor &s) {
    return Json::array({Json::array({s(0).real(), s(0).imag()}), Json::array({s(1).real(), s(1).imag()})});
}

Json scenario_json(const Scenario &s) {
    Json j;
    j["schema"] = kScenarioSchema;
    j["name"] = s.name;
    j["description"] = s.description;
    j["kind"] = to_string(s.kind);
    j["seed"] = s.seed;
    if (s.kind == ScenarioKind::Hardware) {
        const HardwareSpec &h = s.hardware;
        j["hardware"] = {{"p", h.p},
                         {"m", h.m},
                         {"energy_unit_hz", h.energy_unit_hz},
                         {"raman_detuning_hz", h.raman_detuning_hz},
                         {"cross_coupling", h.cross_coupling},
                         {"ratios", h.ratios}};
        return j;
    }
    j["mass"] = s.mass;
    j["time"] = {{"start", s.time.start}, {"end", s.time.end}, {"dt", s.time.dt}};
    if (s.kind == ScenarioKind::PlaneWaves) {
        j["momenta"] = s.momenta;
        j["spinor"] = spinor_json(s.spinor);
        j["theta"] = s.theta;
        j["density_times"] = s.density_times;
    } else {
        j["grid"] = {{"points", s.grid.points}, {"p_max", s.grid.p_max}};
        j["packet"] = {{"center", s.packet.center},
                       {"width", s.packet.width},
                       {"momentum", s.packet.momentum},
                       {"spinor", spinor_json(s.packet.spinor)}};
        Json schedule = Json::array();
        for (const ScheduledOp &op : s.schedule) {
            schedule.push_back({{"op", to_string(op.label)}, {"time", op.time}});
        }
        j["schedule"] = schedule;
        j["snapshots"] = s.snapshots;
    }
    j["observables"] = s.observables;
    j["tomography"] = {{"enabled", s.tomography.enabled},
                       {"shots", s.tomography.shots},
                       {"runs", s.tomography.runs},
                       {"stride", s.tomography.stride}};
    return j;
}

/// Collects outputs and invariant checks of one run.
class Recorder {
   public:
    explicit Recorder(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string &name, const std::string &content) {
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) {
            fail(ErrorCode::Io, "cannot write " + (dir_ / name).string());
        }
        files_.push_back(name);
    }

    void series(const std::string &name, const ObservableSeries &s) {
        s.validate();
        std::string text = "time,value,stderr\n";
        for (std::size_t i = 0; i < s.times.size(); ++i) {
            text += format_number(s.times[i]) + "," + format_number(s.values[i]) + "," +
                    format_number(s.errors.empty() ? 0.0 : s.errors[i]) + "\n";
        }
        write(name, text);
        series_.push_back({{"file", name},
                           {"label", s.label},
                           {"samples", s.times.size()},
                           {"stderr", s.errors.empty() ? "exact" : "tomography"}});
    }

    void distribution(const std::string &name, const std::string &label, const std::vector<double> &coordinates,
                      const std::vector<double> &density) {
        require(coordinates.size() == density.size(), "distribution columns differ in length");
        std::string text = "coordinate,density\n";
        for (std::size_t i = 0; i < coordinates.size(); ++i) {
            text += format_number(coordinates[i]) + "," + format_number(density[i]) + "\n";
        }
        write(name, text);
        snapshots_.push_back({{"file", name}, {"label", label}});
    }

    void check(const std::string &name, double value, double tolerance) {
        for (InvariantCheck &c : checks_) {
            if (c.name == name) {
                c.value = std::max(c.value, value);
                c.passed = std::isfinite(c.value) && c.value <= c.tolerance;
                return;
            }
        }
        checks_.push_back({name, value, tolerance, std::isfinite(value) && value <= tolerance});
    }

    const std::vector<std::string> &files() const { return files_; }
    const std::vector<InvariantCheck> &checks() const { return checks_; }
    Json &results() { return results_; }
    Json series_index() const { return series_; }
    Json snapshot_index() const { return snapshots_; }

   private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
    std::vector<InvariantCheck> checks_;
    Json series_ = Json::array();
    Json snapshots_ = Json::array();
    Json results_ = Json::object();
};

double unitarity_defect(double p, double m, double t) {
    const Matrix4c u = mode_propagator(p, m, t);
    return (u.adjoint() * u - Matrix4c::Identity()).cwiseAbs().maxCoeff();
}

/// Matrix rows for the density-matrix CSV.
void append_matrix(std::string &text, const std::string &prefix, const Eigen::MatrixXcd &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            text += prefix + "," + std::to_string(r + 1) + "," + std::to_string(c + 1) + "," +
                    format_number(m(r, c).real()) + "," + format_number(m(r, c).imag()) + "\n";
        }
    }
}

void run_plane_waves(const Scenario &s, Recorder &rec) {
    const std::vector<double> times = s.time.samples();
    const double m = s.mass;
    const Spinor spinor = s.spinor.normalized();
    const std::vector<PauliSetting> settings = all_pauli_settings();
    std::string density_text = "state,momentum,time,space,source,row,col,re,im\n";
    bool density_written = false;

    for (std::size_t pi = 0; pi < s.momenta.size(); ++pi) {
        const double p = s.momenta[pi];
        const std::string tag = "_p" + format_tag(p);
        const EnlargedState initial = embed(MajoranaState::plane_wave(p, spinor));
        const std::size_t mode = initial.axis().index_of(p);
        const double norm0 = recover(initial).norm();

        std::vector<EnlargedState> states;
        for (double t : times) {
            states.push_back(evolve(initial, m, t));
            const EnlargedState &st = states.back();
            rec.check("reality", st.reality_violation(), 1e-10);
            rec.check("original_norm", std::abs(recover(st).norm() - norm0), 1e-8);
            rec.check("internal_norm", std::abs(st.internal(mode).norm() - 1.0), 1e-12);
        }
        rec.check("unitarity", unitarity_defect(p, m, s.time.dt), 1e-12);

        const auto make_series = [&](const std::string &label, const auto &value) {
            ObservableSeries series;
            series.label = label;
            for (std::size_t k = 0; k < times.size(); ++k) {
                series.times.push_back(times[k]);
                series.values.push_back(value(k));
            }
            return series;
        };
        const auto tomography_series = [&](const std::string &label, std::uint64_t stream,
                                           const DensityObservable &observable) {
            std::vector<double> ts;
            std::vector<Bispinor> chis;
            for (std::size_t k = 0; k < times.size(); k += s.tomography.stride) {
                ts.push_back(times[k]);
                chis.push_back(states[k].internal(mode));
            }
            const ObservableSeries series = error_bars(label, ts, chis, observable, s.tomography.shots,
                                                       s.tomography.runs, derive_stream_seed(s.seed, stream));
            rec.series(label + "_tomography" + tag + ".csv", series);
        };

        for (std::size_t oi = 0; oi < s.observables.size(); ++oi) {
            const std::string &obs = s.observables[oi];
            const std::uint64_t stream = 100 * pi + oi;
            if (obs == "momentum") {
                rec.series("momentum" + tag + ".csv",
                           make_series("momentum", [&](std::size_t k) { return mean_momentum(states[k]); }));
                if (s.tomography.enabled) {
                    const Matrix2c plus = p * pauli::identity();
                    tomography_series("momentum", stream, [p, plus](const Matrix4c &rho) {
                        return plane_wave_expectation(rho, p, plus, -plus);
                    });
                }
            } else if (obs == "charge") {
                rec.series("charge" + tag + ".csv",
                           make_series("charge", [&](std::size_t k) { return charge(recover(states[k]), m); }));
                if (s.tomography.enabled) {
                    const Matrix2c qp = charge_operator(p, m);
                    const Matrix2c qm = charge_operator(-p, m);
                    tomography_series("charge", stream, [p, qp, qm](const Matrix4c &rho) {
                        return plane_wave_expectation(rho, p, qp, qm);
                    });
                }
            } else if (obs == "populations") {
                std::vector<Populations> pops;
                for (const EnlargedState &st : states) {
                    pops.push_back(particle_antiparticle_populations(recover(st), m));
                }
                rec.series("particle" + tag + ".csv",
                           make_series("particle", [&](std::size_t k) { return pops[k].particle; }));
                rec.series("antiparticle" + tag + ".csv",
                           make_series("antiparticle", [&](std::size_t k) { return pops[k].antiparticle; }));
            } else if (obs == "fidelity") {
                rec.series("fidelity" + tag + ".csv", make_series("fidelity", [&](std::size_t k) {
                               return fidelity_global_phase(p, m, s.theta, times[k]);
                           }));
            } else if (obs == "orthogonality") {
                rec.series("orthogonality" + tag + ".csv", make_series("orthogonality", [&](std::size_t k) {
                               return orthogonality(p, m, times[k], OrthogonalVariant::Opposite);
                           }));
            } else if (obs == "orthogonality_same") {
                ObservableSeries series = make_series("orthogonality_same", [&](std::size_t k) {
                    return orthogonality(p, m, times[k], OrthogonalVariant::Same);
                });
                // At p = 0 the partner (0,1) x |p> is also (0,1) x |-p>, so the
                // overlap is the oscillating one and only p != 0 must vanish.
                if (p != 0.0) {
                    for (double v : series.values) {
                        rec.check("orthogonality_same_zero", v, 1e-10);
                    }
                }
                rec.series("orthogonality_same" + tag + ".csv", series);
            }
        }

        // Density matrices of the evolved state and, for the fidelity
        // protocol, of its phase-shifted partner.
        std::vector<std::pair<std::string, EnlargedState>> preparations{{"psi", initial}};
        if (has_observable(s, "fidelity")) {
            preparations.emplace_back("psi_theta", embed(MajoranaState::plane_wave(p, std::polar(1.0, s.theta) * spinor)));
        }
        for (std::size_t ti = 0; ti < s.density_times.size(); ++ti) {
            const double t = s.density_times[ti];
            for (std::size_t si = 0; si < preparations.size(); ++si) {
                const Bispinor chi = evolve(preparations[si].second, m, t).internal(mode);
                const Matrix4c exact = chi * chi.adjoint();
                const std::uint64_t seed = derive_stream_seed(s.seed, 1000000 + 1000 * pi + 10 * ti + si);
                const Matrix4c measured = reconstruct(sample(chi, settings, s.tomography.shots, seed));
                const std::string prefix = preparations[si].first + "," + format_number(p) + "," + format_number(t);
                append_matrix(density_text, prefix + ",enlarged,exact", exact);
                append_matrix(density_text, prefix + ",enlarged,tomography", measured);
                append_matrix(density_text, prefix + ",original,exact", map_to_original(exact));
                append_matrix(density_text, prefix + ",original,tomography", map_to_original(measured));
                rec.results()["density_trace_distance"].push_back(
                    {{"state", preparations[si].first}, {"momentum", p}, {"time", t},
                     {"enlarged", trace_distance(exact, measured)},
                     {"original", trace_distance(map_to_original(exact), map_to_original(measured))}});
                density_written = true;
            }
        }
    }
    if (density_written) {
        rec.write("density_matrices.csv", density_text);
    }
}

struct PacketSummary {
    double momentum = 0.0;
    double position = 0.0;
    double velocity = 0.0;
    double charge = 0.0;
    double particle = 0.0;
    double antiparticle = 0.0;
};

PacketSummary summarize(const EnlargedState &state, double m) {
    const MajoranaState psi = recover(state);
    const Populations pops = particle_antiparticle_populations(psi, m);
    return {mean_momentum(state), mean_position_direct(psi), mean_velocity(psi), charge(psi, m), pops.particle,
            pops.antiparticle};
}

Json summary_json(const PacketSummary &s) {
    return {{"momentum", s.momentum}, {"position", s.position},         {"velocity", s.velocity},
            {"charge", s.charge},     {"particle", s.particle},         {"antiparticle", s.antiparticle}};
}

/// <p> from independently reconstructed per-mode density matrices.
double tomographic_momentum(const EnlargedState &state, std::uint64_t shots, std::uint64_t seed) {
    const std::vector<PauliSetting> settings = all_pauli_settings();
    const Matrix24c mm = RecoveryMap::matrix();
    const MomentumAxis &axis = state.axis();
    double total = 0.0;
    for (std::size_t k = 0; k < axis.size(); ++k) {
        const Matrix4c rho =
            linear_inversion(frequencies_by_setting(sample(state.internal(k), settings, shots, derive_stream_seed(seed, k))));
        const double trace = (mm * rho * mm.adjoint()).trace().real();
        total += axis.weight(k) * std::norm(state.envelope()(static_cast<Eigen::Index>(k))) * axis.momentum(k) * trace;
    }
    return total;
}

void run_packet(const Scenario &s, Recorder &rec) {
    const std::vector<double> times = s.time.samples();
    const double m = s.mass;
    const MomentumAxis axis = MomentumAxis::grid(s.grid.points, s.grid.p_max);
    GaussianPacket packet = s.packet;
    packet.spinor = packet.spinor.normalized();
    const EnlargedState initial = embed(MajoranaState::gaussian(axis, packet));
    const double norm0 = recover(initial).norm();
    for (double p : axis.momenta()) {
        rec.check("unitarity", unitarity_defect(p, m, s.time.dt), 1e-12);
    }

    std::map<std::string, ObservableSeries> series;
    const auto push = [&](const std::string &label, double t, double v) {
        ObservableSeries &out = series[label];
        out.label = label;
        out.times.push_back(t);
        out.values.push_back(v);
    };
    ObservableSeries tomo;
    tomo.label = "momentum";
    Json operations = Json::array();

    EnlargedState current = initial;
    double t_ref = s.time.start;
    std::size_t next_op = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const EnlargedState state = evolve(current, m, t - t_ref);
        const MajoranaState psi = recover(state);
        rec.check("reality", state.reality_violation(), 1e-10);
        rec.check("original_norm", std::abs(psi.norm() - norm0), 1e-8);

        for (const std::string &obs : s.observables) {
            if (obs == "momentum") {
                push("momentum", t, mean_momentum(state));
            } else if (obs == "position") {
                const PositionEstimate e = mean_position_estimate(state, m, 0.0);
                rec.check("position_pipeline_vs_oracle", std::abs(e.pipeline - e.oracle), 1e-6);
                rec.check("position_cross_term", std::abs(e.cross_term), 1e-10);
                push("position", t, e.pipeline);
            } else if (obs == "velocity") {
                push("velocity", t, mean_velocity(psi));
            } else if (obs == "charge") {
                push("charge", t, charge(psi, m));
            } else if (obs == "populations") {
                const Populations pops = particle_antiparticle_populations(psi, m);
                push("particle", t, pops.particle);
                push("antiparticle", t, pops.antiparticle);
            }
        }
        if (s.tomography.enabled && has_observable(s, "momentum") && k % s.tomography.stride == 0) {
            std::vector<double> runs;
            for (std::size_t r = 0; r < s.tomography.runs; ++r) {
                runs.push_back(tomographic_momentum(state, s.tomography.shots,
                                                    derive_stream_seed(s.seed, 1000 * k + r)));
            }
            double mean = 0.0;
            for (double v : runs) mean += v;
            mean /= static_cast<double>(runs.size());
            double var = 0.0;
            for (double v : runs) var += (v - mean) * (v - mean);
            tomo.times.push_back(t);
            tomo.values.push_back(mean);
            tomo.errors.push_back(std::sqrt(var / static_cast<double>(runs.size() - 1)));
        }
        if (contains_time(s.snapshots, t, s.time.dt)) {
            const std::string tag = "_t" + format_tag(t) + ".csv";
            const DensitySnapshot snap = density_distributions(state, m, 0.0);
            rec.distribution("momentum_density" + tag, "momentum density at t = " + format_tag(t), snap.momenta,
                             snap.momentum_density);
            rec.distribution("position_density" + tag, "position density at t = " + format_tag(t), snap.positions,
                             snap.position_density);
            if (has_observable(s, "populations")) {
                const PopulationDistributions d = particle_antiparticle_distributions(psi, m);
                rec.distribution("particle_density" + tag, "particle momentum density", d.momenta, d.particle);
                rec.distribution("antiparticle_density" + tag, "antiparticle momentum density", d.momenta,
                                 d.antiparticle);
            }
        }
        while (next_op < s.schedule.size() && near(s.schedule[next_op].time, t, s.time.dt)) {
            const ScheduledOp &op = s.schedule[next_op];
            const PacketSummary before = summarize(state, m);
            current = apply_symmetry(state, SymmetryOperator::make(op.label));
            t_ref = t;
            const PacketSummary after = summarize(current, m);
            rec.check("reality", current.reality_violation(), 1e-10);
            rec.check("original_norm", std::abs(recover(current).norm() - norm0), 1e-8);
            operations.push_back(
                {{"op", to_string(op.label)}, {"time", t}, {"before", summary_json(before)}, {"after", summary_json(after)}});
            ++next_op;
        }
    }
    for (auto &[label, s_out] : series) {
        rec.series(label + ".csv", s_out);
    }
    if (!tomo.times.empty()) {
        rec.series("momentum_tomography.csv", tomo);
    }
    rec.results()["operations"] = operations;
}

void run_hardware(const Scenario &s, Recorder &rec) {
    const HardwareSpec &h = s.hardware;
    const IonLevels levels = IonLevels::yb171();
    CalibrationOptions options;
    options.energy_unit = kTwoPi * h.energy_unit_hz;
    options.cross_coupling = h.cross_coupling;
    const double eps = options.energy_unit;
    const double scale = std::max(std::abs(h.p), h.m);

    const Calibration cal = calibrate(h.p, h.m, kTwoPi * h.raman_detuning_hz, levels, options);
    std::ostringstream table;
    write_tone_table(table, cal.config, levels);
    rec.write("tone_table.csv", table.str());
    rec.check("detuning_residual", cal.detuning_residual, 1e-9 * levels.omega_z);
    rec.check("calibration_relative_error", cal.relative_error, 1e-3);
    rec.check("effective_hermiticity",
              hermiticity_defect(cal.achieved.matrix) / std::max(1.0, cal.achieved.matrix.cwiseAbs().maxCoeff()), 1e-14);

    Json matrix = Json::array();
    for (int r = 0; r < 4; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 4; ++c) {
            row.push_back({cal.achieved.matrix(r, c).real() / eps, cal.achieved.matrix(r, c).imag() / eps});
        }
        matrix.push_back(row);
    }
    Json residuals = Json::array();
    for (const ResidualTerm &t : cal.achieved.residuals) {
        residuals.push_back({{"label", t.label}, {"amplitude_rad_s", t.amplitude}, {"frequency_rad_s", t.frequency}});
    }
    const AwgReport awg = awg_band_check(cal.config, levels);
    const auto &st = stark_shifts(cal.config, levels).omega;
    rec.results()["calibration"] = {
        {"raman_detuning_rad_s", cal.config.raman_detuning},
        {"detunings_rad_s", cal.config.detuning},
        {"stark_shifts_rad_s", st},
        {"effective_hamiltonian_units", matrix},
        {"relative_error", cal.relative_error},
        {"detuning_residual_rad_s", cal.detuning_residual},
        {"outer_iterations", cal.outer_iterations},
        {"residual_terms", residuals},
        {"awg_offsets_hz", awg.offset_hz},
        {"awg_within_band", awg.within_band},
    };

    // Omega/Delta sweep with the Raman pair sized for the larger coupling.
    const MajoranaState psi0 = MajoranaState::plane_wave(h.p, Spinor(1.0, 0.0));
    const EnlargedState embedded = embed(psi0);
    const Bispinor chi0 = embedded.internal(embedded.axis().index_of(h.p));
    const double t = std::numbers::pi / (2.0 * 2.0 * eps * scale);
    std::string sweep = "ratio,raman_detuning_rad_s,fidelity,mean_infidelity,max_infidelity,steps\n";
    std::vector<double> xs;
    std::vector<double> ys;
    Json points = Json::array();
    for (double ratio : h.ratios) {
        const double delta = 4.0 * scale * eps / (ratio * ratio);
        const Calibration c = calibrate(h.p, h.m, delta, levels, options);
        const FullDriveResult r = simulate_full_drive(c.config, levels, c.target, chi0, t, max_drive_step(c.config, levels));
        rec.check("full_drive_norm", std::abs(r.state.norm() - 1.0), 1e-6);
        sweep += format_number(ratio) + "," + format_number(delta) + "," + format_number(r.fidelity) + "," +
                 format_number(r.mean_infidelity) + "," + format_number(r.max_infidelity) + "," +
                 std::to_string(r.steps) + "\n";
        xs.push_back(std::log(ratio));
        ys.push_back(std::log(r.mean_infidelity));
        points.push_back({{"ratio", ratio}, {"fidelity", r.fidelity}, {"mean_infidelity", r.mean_infidelity}});
    }
    rec.write("full_drive_sweep.csv", sweep);
    double slope = 0.0;
    if (xs.size() >= 2) {
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        slope = sxy / sxx;
    }
    rec.results()["full_drive"] = {{"duration_s", t}, {"initial_state", spinor_json(Spinor(1.0, 0.0))},
                                   {"points", points}, {"loglog_slope", slope}};
}

std::string compiler_id() {
#if defined(__clang__)
    return std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
    return std::string("gcc ") + __VERSION__;
#else
    return "unknown";
#endif
}

}  // namespace

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::PlaneWaves:
            return "plane_waves";
        case ScenarioKind::Packet:
            return "packet";
        case ScenarioKind::Hardware:
            return "hardware";
    }
    return "unknown";
}

std::vector<double> TimeSpan::samples() const {
    const double steps = std::round((end - start) / dt);
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(steps);
    out.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        out.push_back(k == n ? end : start + static_cast<double>(k) * dt);
    }
    return out;
}

std::vector<std::string> known_observables(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::PlaneWaves:
            return {"momentum", "charge", "populations", "fidelity", "orthogonality", "orthogonality_same"};
        case ScenarioKind::Packet:
            return {"momentum", "position", "velocity", "charge", "populations"};
        case ScenarioKind::Hardware:
            return {};
    }
    return {};
}

void Scenario::validate() const {
    if (name.empty()) {
        config_error("name", "must not be empty");
    }
    if (!std::all_of(name.begin(), name.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
        })) {
        config_error("name", "may only contain letters, digits, '-', '_' and '.'");
    }
    if (kind == ScenarioKind::Hardware) {
        const HardwareSpec &h = hardware;
        if (!std::isfinite(h.p)) config_error("hardware.p", "must be finite");
        if (!(h.m >= 0.0) || !std::isfinite(h.m)) config_error("hardware.m", "must be finite and non-negative");
        if (std::max(std::abs(h.p), h.m) == 0.0) config_error("hardware", "p and m cannot both vanish");
        if (!(h.energy_unit_hz > 0.0)) config_error("hardware.energy_unit_hz", "must be positive");
        if (!(h.raman_detuning_hz > 0.0)) config_error("hardware.raman_detuning_hz", "must be positive");
        if (!(h.cross_coupling >= 0.0 && h.cross_coupling < 1.0)) config_error("hardware.cross_coupling", "must lie in [0, 1)");
        if (h.ratios.empty()) config_error("hardware.ratios", "must not be empty");
        for (std::size_t i = 0; i < h.ratios.size(); ++i) {
            if (!(h.ratios[i] > 0.0 && h.ratios[i] < 1.0)) {
                config_error("hardware.ratios[" + std::to_string(i) + "]", "must lie in (0, 1)");
            }
        }
        return;
    }
    if (!std::isfinite(mass) || mass < 0.0) config_error("mass", "must be finite and non-negative");
    if (!std::isfinite(time.start) || !std::isfinite(time.end) || !std::isfinite(time.dt)) {
        config_error("time", "start, end and dt must be finite");
    }
    if (!(time.dt > 0.0)) config_error("time.dt", "must be positive");
    if (!(time.end > time.start)) config_error("time.end", "must exceed time.start");
    const double steps = (time.end - time.start) / time.dt;
    if (steps > static_cast<double>(kMaxSamples)) config_error("time.dt", "too many samples");
    if (std::abs(steps - std::round(steps)) > kGridTolerance * std::max(1.0, steps)) {
        config_error("time.end", "time span must be a whole number of time.dt steps");
    }
    if (observables.empty()) config_error("observables", "must list at least one observable");
    const std::vector<std::string> known = known_observables(kind);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < observables.size(); ++i) {
        const std::string path = "observables[" + std::to_string(i) + "]";
        if (std::find(known.begin(), known.end(), observables[i]) == known.end()) {
            config_error(path, "unknown observable '" + observables[i] + "' for kind " + to_string(kind));
        }
        if (!seen.insert(observables[i]).second) config_error(path, "duplicate observable");
    }
    if (tomography.shots < 1) config_error("tomography.shots", "must be at least 1");
    if (tomography.runs < 2) config_error("tomography.runs", "must be at least 2");
    if (tomography.stride < 1) config_error("tomography.stride", "must be at least 1");

    if (kind == ScenarioKind::PlaneWaves) {
        if (momenta.empty()) config_error("momenta", "must list at least one momentum");
        for (std::size_t i = 0; i < momenta.size(); ++i) {
            if (!std::isfinite(momenta[i])) config_error("momenta[" + std::to_string(i) + "]", "must be finite");
            if (std::hypot(momenta[i], mass) == 0.0) {
                config_error("momenta[" + std::to_string(i) + "]", "p = m = 0 has no particle/antiparticle basis");
            }
        }
        if (!spinor.allFinite() || spinor.norm() == 0.0) config_error("spinor", "must be finite and non-zero");
        const Spinor unit = spinor.normalized();
        const bool standard_preparation = std::abs(unit(0) - cplx(1.0)) < 1e-12 && std::abs(unit(1)) < 1e-12;
        if (!standard_preparation && (has_observable(*this, "fidelity") || has_observable(*this, "orthogonality") ||
                                   has_observable(*this, "orthogonality_same"))) {
            config_error("spinor", "fidelity and orthogonality are defined for the preparation [1, 0]");
        }
        if (!std::isfinite(theta)) config_error("theta", "must be finite");
        check_times(density_times, time, "density_times");
    } else {
        if (grid.points < 3 || grid.points % 2 == 0 || grid.points > 1025) {
            config_error("grid.points", "must be odd and within [3, 1025]");
        }
        if (!(grid.p_max > 0.0) || !std::isfinite(grid.p_max)) config_error("grid.p_max", "must be positive");
        if (!std::isfinite(packet.center)) config_error("packet.center", "must be finite");
        if (!(packet.width > 0.0) || !std::isfinite(packet.width)) config_error("packet.width", "must be positive");
        if (!std::isfinite(packet.momentum)) config_error("packet.momentum", "must be finite");
        if (!packet.spinor.allFinite() || packet.spinor.norm() == 0.0) {
            config_error("packet.spinor", "must be finite and non-zero");
        }
        if (mass == 0.0 && (has_observable(*this, "charge") || has_observable(*this, "populations"))) {
            config_error("mass", "charge needs m > 0 (the p = 0 mode has no Dirac basis at m = 0)");
        }
        std::vector<double> op_times;
        for (const ScheduledOp &op : schedule) op_times.push_back(op.time);
        check_times(op_times, time, "schedule");
        check_times(snapshots, time, "snapshots");
    }
}

Scenario parse_scenario(const std::string &text, const std::string &source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException &e) {
        fail(ErrorCode::Config, source + ": YAML syntax error at line " + std::to_string(e.mark.line + 1) +
                                    ", column " + std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    const Field top(root, "");
    top.expect_map({"schema", "name", "description", "kind", "mass", "time", "seed", "momenta", "spinor", "theta",
                    "density_times", "grid", "packet", "schedule", "snapshots", "observables", "tomography",
                    "hardware"});
    Scenario s;
    s.source = source;
    if (!top.has("schema")) config_error("schema", "missing (expected '" + std::string(kScenarioSchema) + "')");
    if (top.child("schema").text() != kScenarioSchema) {
        config_error("schema", "unsupported schema '" + top.child("schema").text() + "' (expected '" +
                                   kScenarioSchema + "')");
    }
    if (!top.has("name")) config_error("name", "missing");
    s.name = top.child("name").text();
    if (top.has("description")) s.description = top.child("description").text();
    if (!top.has("kind")) config_error("kind", "missing");
    s.kind = parse_kind(top.child("kind"));
    if (top.has("seed")) s.seed = top.child("seed").count();

    if (s.kind == ScenarioKind::Hardware) {
        for (const char *key : {"mass", "time", "momenta", "spinor", "theta", "density_times", "grid", "packet",
                                "schedule", "snapshots", "observables", "tomography"}) {
            if (top.has(key)) config_error(key, "not used by kind hardware");
        }
        if (top.has("hardware")) {
            const Field h = top.child("hardware");
            h.expect_map({"p", "m", "energy_unit_hz", "raman_detuning_hz", "cross_coupling", "ratios"});
            if (h.has("p")) s.hardware.p = h.child("p").number();
            if (h.has("m")) s.hardware.m = h.child("m").number();
            if (h.has("energy_unit_hz")) s.hardware.energy_unit_hz = h.child("energy_unit_hz").number();
            if (h.has("raman_detuning_hz")) s.hardware.raman_detuning_hz = h.child("raman_detuning_hz").number();
            if (h.has("cross_coupling")) s.hardware.cross_coupling = h.child("cross_coupling").number();
            if (h.has("ratios")) s.hardware.ratios = h.child("ratios").numbers();
        }
        s.validate();
        return s;
    }
    if (top.has("hardware")) config_error("hardware", "only used by kind hardware");

    if (top.has("mass")) s.mass = top.child("mass").number();
    if (top.has("time")) {
        const Field t = top.child("time");
        t.expect_map({"start", "end", "dt"});
        if (t.has("start")) s.time.start = t.child("start").number();
        if (t.has("end")) s.time.end = t.child("end").number();
        if (t.has("dt")) s.time.dt = t.child("dt").number();
    }
    if (top.has("observables")) {
        for (const Field &f : top.child("observables").items()) s.observables.push_back(f.text());
    }
    if (top.has("tomography")) {
        const Field t = top.child("tomography");
        t.expect_map({"enabled", "shots", "runs", "stride"});
        if (t.has("enabled")) s.tomography.enabled = t.child("enabled").flag();
        if (t.has("shots")) s.tomography.shots = t.child("shots").count();
        if (t.has("runs")) s.tomography.runs = t.child("runs").count();
        if (t.has("stride")) s.tomography.stride = t.child("stride").count();
    }

    if (s.kind == ScenarioKind::PlaneWaves) {
        for (const char *key : {"grid", "packet", "schedule", "snapshots"}) {
            if (top.has(key)) config_error(key, "not used by kind plane_waves");
        }
        if (!top.has("momenta")) config_error("momenta", "missing");
        s.momenta = top.child("momenta").numbers();
        if (top.has("spinor")) s.spinor = top.child("spinor").spinor();
        if (top.has("theta")) s.theta = top.child("theta").number();
        if (top.has("density_times")) s.density_times = top.child("density_times").numbers();
    } else {
        for (const char *key : {"momenta", "spinor", "theta", "density_times"}) {
            if (top.has(key)) config_error(key, "not used by kind packet");
        }
        if (top.has("grid")) {
            const Field g = top.child("grid");
            g.expect_map({"points", "p_max"});
            if (g.has("points")) s.grid.points = g.child("points").count();
            if (g.has("p_max")) s.grid.p_max = g.child("p_max").number();
        }
        if (top.has("packet")) {
            const Field p = top.child("packet");
            p.expect_map({"center", "width", "momentum", "spinor"});
            if (p.has("center")) s.packet.center = p.child("center").number();
            if (p.has("width")) s.packet.width = p.child("width").number();
            if (p.has("momentum")) s.packet.momentum = p.child("momentum").number();
            if (p.has("spinor")) s.packet.spinor = p.child("spinor").spinor();
        }
        if (top.has("schedule")) {
            for (const Field &f : top.child("schedule").items()) {
                f.expect_map({"op", "time"});
                if (!f.has("op")) config_error(f.path() + ".op", "missing");
                if (!f.has("time")) config_error(f.path() + ".time", "missing");
                ScheduledOp op;
                try {
                    op.label = parse_symmetry_label(f.child("op").text());
                } catch (const Error &) {
                    config_error(f.path() + ".op", "unknown operation '" + f.child("op").text() + "' (K, T, C)");
                }
                op.time = f.child("time").number();
                s.schedule.push_back(op);
            }
        }
        if (top.has("snapshots")) s.snapshots = top.child("snapshots").numbers();
    }
    s.validate();
    return s;
}

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> out;
    for (const auto &entry : detail::builtin_scenario_table()) out.push_back(entry.first);
    return out;
}

const std::string &builtin_scenario_text(const std::string &name) {
    for (const auto &entry : detail::builtin_scenario_table()) {
        if (entry.first == name) return entry.second;
    }
    fail(ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
}

Scenario load_scenario(const std::string &name_or_path) {
    for (const auto &entry : detail::builtin_scenario_table()) {
        if (entry.first == name_or_path) return parse_scenario(entry.second, "builtin:" + entry.first);
    }
    std::error_code ec;
    if (!std::filesystem::is_regular_file(name_or_path, ec)) {
        fail(ErrorCode::UnknownScenario,
             "unknown scenario '" + name_or_path + "': neither a built-in name nor a readable file");
    }
    std::ifstream in(name_or_path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) fail(ErrorCode::Io, "cannot read " + name_or_path);
    return parse_scenario(buffer.str(), name_or_path);
}

bool RunResult::invariants_passed() const {
    return std::all_of(invariants.begin(), invariants.end(), [](const InvariantCheck &c) { return c.passed; });
}

RunResult run_scenario(const Scenario &scenario, const std::filesystem::path &out_dir) {
    scenario.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());

    const auto start = std::chrono::steady_clock::now();
    Recorder rec(out_dir);
    switch (scenario.kind) {
        case ScenarioKind::PlaneWaves:
            run_plane_waves(scenario, rec);
            break;
        case ScenarioKind::Packet:
            run_packet(scenario, rec);
            break;
        case ScenarioKind::Hardware:
            run_hardware(scenario, rec);
            break;
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    RunResult result;
    result.out_dir = out_dir;
    result.invariants = rec.checks();

    Json manifest;
    manifest["schema"] = kManifestSchema;
    manifest["scenario"] = scenario.name;
    manifest["source"] = scenario.source;
    manifest["config_schema"] = kScenarioSchema;
    manifest["config"] = scenario_json(scenario);
    manifest["versions"] = {
        {"eqsim", EQSIM_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"compiler", compiler_id()},
    };
    Json invariants = Json::array();
    for (const InvariantCheck &c : result.invariants) {
        invariants.push_back({{"name", c.name}, {"max_value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    }
    manifest["invariants"] = invariants;
    manifest["invariants_passed"] = result.invariants_passed();
    manifest["series"] = rec.series_index();
    manifest["snapshots"] = rec.snapshot_index();
    manifest["results"] = rec.results();
    manifest["timings_file"] = "timings.json";
    std::vector<std::string> files = rec.files();
    files.push_back("manifest.json");
    files.push_back("timings.json");
    manifest["files"] = files;
    rec.write("manifest.json", manifest.dump(2) + "\n");

    const Json timings = {{"scenario", scenario.name}, {"wall_seconds", elapsed}};
    rec.write("timings.json", timings.dump(2) + "\n");
    result.files = rec.files();
    return result;
}

double plane_wave_expectation(const Matrix4c &rho, double p, const Matrix2c &sigma_p, const Matrix2c &sigma_minus_p) {
    const Matrix24c m = RecoveryMap::matrix();
    if (p == 0.0) {
        return (sigma_p * m * rho * m.adjoint()).trace().real();
    }
    const double plus = (sigma_p * m * rho * m.adjoint()).trace().real();
    const double minus = (sigma_minus_p * m * rho.conjugate() * m.adjoint()).trace().real();
    return 0.5 * (plus + minus);
}

Matrix2c charge_operator(double p, double m) {
    const DiracEigenbasis b = dirac_eigenbasis(p, m);
    return b.particle * b.particle.adjoint() - b.antiparticle * b.antiparticle.adjoint();
}

}  // namespace eqsim
