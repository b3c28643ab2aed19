// Copyright 2026 The nmrsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "nmrsim/experiment.hpp"

#include "nmrsim/errors.hpp"
#include "nmrsim/rng.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <thread>

namespace nmrsim {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kAxisStream[2] = {0x58, 0x59};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::size_t axis_slot(MagnetizationAxis a) { return a == MagnetizationAxis::X ? 0 : 1; }

/// Logical observed spins as physical qubits of a transpiled circuit.
std::vector<int> physical_observed(const Circuit &c, const std::vector<int> &observed) {
    if (c.final_layout.empty()) {
        return observed;
    }
    std::vector<int> out;
    for (int q : observed) {
        out.push_back(c.final_layout[static_cast<std::size_t>(q)]);
    }
    return out;
}

template <class F> void parallel_for(std::size_t n, int threads, F &&body) {
    const auto n_workers = static_cast<std::size_t>(std::max(1, threads));
    if (n_workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(n_workers, n); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mu);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = n;
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::string report_csv(const TranspileReport &r) {
    return std::to_string(r.width) + ',' + std::to_string(r.two_qubit_depth) + ',' +
           std::to_string(r.one_qubit_gate_count) + ',' +
           std::to_string(r.two_qubit_gate_count) + ',' + std::to_string(r.swap_count) + ',' +
           std::to_string(r.dd_gates_inserted);
}

} // namespace

double usual_ppm_span(std::string_view symbol) {
    static const std::map<std::string, double, std::less<>> spans = {
        {"1H", 20.0}, {"13C", 250.0}, {"15N", 1000.0}, {"19F", 500.0}, {"31P", 500.0}};
    const auto it = spans.find(symbol);
    return it == spans.end() ? 0.0 : it->second;
}

double auto_spectral_width(const SpinSystem &sys, const FieldConfig &field,
                           const std::vector<int> &observed) {
    const auto &iso = sys.isotopes[static_cast<std::size_t>(observed.front())];
    const double nu = larmor_hz(iso, field);
    double sw = usual_ppm_span(iso.symbol) * 1e-6 * std::abs(nu);
    // Widen when an observed line or its couplings would fold back.
    const auto omega = offset_frequencies(sys, field);
    for (int k : observed) {
        double span = std::abs(omega[static_cast<std::size_t>(k)]) / (2.0 * std::numbers::pi);
        for (const auto &[pair, j] : sys.couplings_hz) {
            if (pair.first == k || pair.second == k) {
                span += std::abs(j);
            }
        }
        sw = std::max(sw, 2.5 * span);
    }
    return std::max(sw, 1.0);
}

ResolvedExperiment resolve_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    ResolvedExperiment ex;
    ex.system = load_spin_system(cfg.resolve(cfg.system));
    if (!cfg.subsystem.empty()) {
        ex.system = subsystem(ex.system, cfg.subsystem);
    }
    ex.field = cfg.b0_tesla ? FieldConfig{*cfg.b0_tesla}
                            : FieldConfig::from_proton_mhz(*cfg.proton_mhz);
    ex.hamiltonian = build_rotating_hamiltonian(ex.system, ex.field);
    ex.observed = ex.system.spins_of(cfg.observe);
    if (ex.observed.empty()) {
        throw ArgumentError("no spin of isotope '" + cfg.observe + "' in " +
                            cfg.system.generic_string());
    }
    const auto iso = ex.system.isotopes[static_cast<std::size_t>(ex.observed.front())];
    ex.reference_hz = larmor_hz(iso, ex.field);
    const double sw = cfg.spectral_width_hz > 0.0
                          ? cfg.spectral_width_hz
                          : auto_spectral_width(ex.system, ex.field, ex.observed);
    ex.dwell_time = 1.0 / sw;

    if (cfg.noise == "superconducting") {
        ex.noise = NoiseModel::superconducting_defaults();
    } else if (cfg.noise == "trapped-ion") {
        ex.noise = NoiseModel::trapped_ion_defaults();
    } else if (cfg.noise != "none") {
        ex.noise = load_noise_model(cfg.resolve(cfg.noise));
    }

    if (!cfg.map.empty()) {
        ex.map = load_coupling_map(cfg.resolve(cfg.map));
    } else if (cfg.target == TargetKind::HeavyHex) {
        ex.map = heavy_hex_map();
    } else if (cfg.target == TargetKind::AllToAll) {
        ex.map = all_to_all_map(std::max(36, ex.system.n_spins));
    }
    if (ex.map && ex.noise) {
        // DD windows must be cut with the same clock the noise model uses.
        ex.map->durations = ex.noise->durations;
    }
    return ex;
}

NoiseModel restrict_noise(const NoiseModel &nm, const std::vector<int> &kept) {
    if (nm.qubit_overrides.empty()) {
        return nm;
    }
    NoiseModel out = nm;
    out.qubit_overrides.clear();
    for (int p : kept) {
        const auto up = static_cast<std::size_t>(p);
        out.qubit_overrides.push_back(up < nm.qubit_overrides.size()
                                          ? nm.qubit_overrides[up]
                                          : QubitNoise{nm.p1, nm.p_ro, nm.t2_idle});
    }
    return out;
}

TimePointEstimator::TimePointEstimator(const ExperimentConfig &cfg,
                                       const ResolvedExperiment &ex, bool cache)
    : cfg_(cfg), ex_(ex), cache_(cache), prepared_(2 * cfg.points) {}

double TimePointEstimator::time_of(std::size_t k) const {
    return static_cast<double>(k) * ex_.dwell_time;
}

complex_t TimePointEstimator::exact(std::size_t k) const {
    check_width(ex_.system.n_spins, cfg_.max_width);
    const Statevector s = run_circuit(trotter_step(ex_.hamiltonian, time_of(k)),
                                      RunOptions{cfg_.max_width, true});
    return transverse_magnetization(s, ex_.observed);
}

std::shared_ptr<const TimePointEstimator::Prepared>
TimePointEstimator::prepare(std::size_t k, MagnetizationAxis axis) const {
    const std::size_t slot = 2 * k + axis_slot(axis);
    if (cache_) {
        std::lock_guard lock(mu_);
        if (prepared_[slot]) {
            return prepared_[slot];
        }
    }
    auto p = std::make_shared<Prepared>();
    const Circuit c = measurement_circuit(ex_.hamiltonian, time_of(k), axis, ex_.observed);
    TranspileOptions topt;
    topt.target = cfg_.target;
    topt.basis = cfg_.basis;
    topt.dynamical_decoupling = cfg_.dd;
    topt.seed = derive_seed(cfg_.seed, static_cast<std::uint64_t>(RngPurpose::Layout), k);
    TranspileResult tr = transpile(c, ex_.map ? &*ex_.map : nullptr, topt);
    p->circuit = std::move(tr.circuit);
    p->kept = std::move(tr.kept);
    p->report = tr.final;
    if (cache_ && !ex_.noise) {
        p->state = std::make_shared<const Statevector>(
            run_circuit(p->circuit, RunOptions{cfg_.max_width, true}));
    }
    if (cache_) {
        std::lock_guard lock(mu_);
        prepared_[slot] = p;
    }
    return p;
}

double TimePointEstimator::sampled_axis(std::size_t k, MagnetizationAxis axis,
                                        std::uint64_t shots, std::uint64_t seed,
                                        std::uint64_t run_index,
                                        TranspileReport *report) const {
    const auto p = prepare(k, axis);
    if (report != nullptr) {
        *report = p->report;
    }
    const auto &measured = p->circuit.measured_qubits();
    const RunOptions ropt{cfg_.max_width, true};
    ShotCounts counts;
    NoiseModel nm;
    if (ex_.noise) {
        nm = restrict_noise(ex_.noise->at_run(run_index), p->kept);
        counts = noisy_run(p->circuit, nm, shots, seed, ropt);
    } else if (p->state) {
        counts = sample_shots(*p->state, measured, shots, seed);
    } else {
        counts = sample_shots(run_circuit(p->circuit, ropt), measured, shots, seed);
    }
    if (!cfg_.mitigation) {
        return magnetization_from_counts(counts, measured, true);
    }
    const auto groups = contiguous_groups(measured, cfg_.group_size);
    const ConfusionModel cm =
        cfg_.calibration_shots > 0
            ? calibrate_confusion(nm, measured, groups, cfg_.calibration_shots,
                                  derive_seed(seed, static_cast<std::uint64_t>(RngPurpose::Calibration)))
            : analytic_confusion(nm, measured, groups);
    const auto q = rescale_low_confidence(mitigate_counts(counts, cm), cfg_.rescale_tau);
    return magnetization_from_distribution(q, measured);
}

complex_t TimePointEstimator::estimate(std::size_t k, std::uint64_t shots,
                                       std::uint64_t seed, std::uint64_t run_index,
                                       TranspileReport *report) const {
    if (!cfg_.shots) {
        check_width(ex_.system.n_spins, cfg_.max_width);
        const Circuit logical = trotter_step(ex_.hamiltonian, time_of(k));
        if (cfg_.target == TargetKind::Logical) {
            if (report != nullptr) {
                *report = make_report(logical);
            }
            return transverse_magnetization(run_circuit(logical, RunOptions{cfg_.max_width, true}),
                                            ex_.observed);
        }
        TranspileOptions topt;
        topt.target = cfg_.target;
        topt.basis = cfg_.basis;
        topt.seed = derive_seed(cfg_.seed, static_cast<std::uint64_t>(RngPurpose::Layout), k);
        const TranspileResult tr = transpile(logical, ex_.map ? &*ex_.map : nullptr, topt);
        if (report != nullptr) {
            *report = tr.final;
        }
        const Statevector s = run_circuit(tr.circuit, RunOptions{cfg_.max_width, true});
        return transverse_magnetization(s, physical_observed(tr.circuit, ex_.observed));
    }
    const double mx = sampled_axis(k, MagnetizationAxis::X, shots,
                                   derive_seed(seed, kAxisStream[0]), 2 * run_index, report);
    const double my = sampled_axis(k, MagnetizationAxis::Y, shots,
                                   derive_seed(seed, kAxisStream[1]), 2 * run_index + 1, nullptr);
    return {mx, my};
}

SimulationResult run_simulation(const ExperimentConfig &cfg,
                                const ResolvedExperiment &ex) {
    // Refuse oversized systems before any work is scheduled.
    check_width(ex.system.n_spins, cfg.max_width);
    const auto t0 = Clock::now();
    SimulationResult res;
    const std::size_t k_total = cfg.points;
    if (cfg.randomized()) {
        res.execution_order = randomized_time_ordering(k_total, cfg.seed);
    } else {
        res.execution_order.resize(k_total);
        std::iota(res.execution_order.begin(), res.execution_order.end(), std::size_t{0});
    }
    const TimePointEstimator est(cfg, ex, false);
    res.points.resize(k_total);
    parallel_for(k_total, cfg.threads, [&](std::size_t pos) {
        const std::size_t k = res.execution_order[pos];
        const auto start = Clock::now();
        TimePointRecord r;
        r.index = k;
        r.t = est.time_of(k);
        r.run_index = pos;
        r.value = est.estimate(k, cfg.shots.value_or(0), derive_seed(cfg.seed, 0x7469, k), pos,
                               &r.report);
        r.wall_seconds = seconds_since(start);
        res.points[k] = r;
    });
    res.fid.dwell_time = ex.dwell_time;
    res.fid.label = ex.system.label;
    for (const auto &r : res.points) {
        res.fid.samples.push_back(r.value);
    }
    res.wall_seconds = seconds_since(t0);
    return res;
}

void write_simulation_outputs(const ExperimentConfig &cfg,
                              const ResolvedExperiment &ex,
                              const SimulationResult &res) {
    const auto dir = cfg.resolve(cfg.output);
    write_fid_csv(res.fid, dir / "fid.csv");
    std::string timings = "time_index,run_index,wall_seconds,width,two_qubit_depth,"
                          "one_qubit_gates,two_qubit_gates,swaps,dd_gates\n";
    for (const auto &r : res.points) {
        timings += std::to_string(r.index) + ',' + std::to_string(r.run_index) + ',' +
                   text::fmt_double(r.wall_seconds) + ',' + report_csv(r.report) + '\n';
    }
    text::write_file(dir / "timings.csv", timings);

    nlohmann::ordered_json m;
    m["tool"] = "nmrsim";
    m["version"] = NMRSIM_VERSION;
    m["config_hash"] = config_hash(cfg);
    m["config"] = format_config(cfg);
    m["system"] = {{"label", ex.system.label},
                   {"n_spins", ex.system.n_spins},
                   {"nonzero_couplings", ex.system.nonzero_coupling_count()}};
    m["observed"] = ex.observed;
    m["reference_hz"] = ex.reference_hz;
    m["b0_tesla"] = ex.field.b0_tesla;
    m["dwell_time"] = ex.dwell_time;
    m["points"] = cfg.points;
    m["mode"] = cfg.shots ? "sampled" : "exact";
    m["seeds"] = {{"base", cfg.seed},
                  {"time_point", "derive_seed(base, 0x7469, time_index)"},
                  {"layout", "derive_seed(base, layout, time_index)"}};
    m["randomized_order"] = cfg.randomized();
    if (cfg.randomized()) {
        m["execution_order"] = res.execution_order;
    }
    double sum = 0.0;
    for (const auto &r : res.points) {
        sum += r.wall_seconds;
    }
    m["wall_clock"] = {{"total_seconds", res.wall_seconds},
                       {"circuit_seconds_sum", sum},
                       {"circuit_seconds_mean", sum / static_cast<double>(res.points.size())},
                       {"threads", cfg.threads}};
    m["files"] = {"fid.csv", "timings.csv"};
    text::write_file(dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<DepthRow> run_depth_stats(const ExperimentConfig &cfg,
                                      const ResolvedExperiment &ex) {
    std::vector<std::array<DepthRow, 3>> per(cfg.points);
    const CouplingMap *map = ex.map ? &*ex.map : nullptr;
    parallel_for(cfg.points, cfg.threads, [&](std::size_t k) {
        const double t = static_cast<double>(k) * ex.dwell_time;
        const Circuit c = trotter_step(ex.hamiltonian, t);
        TranspileOptions topt;
        topt.target = cfg.target;
        topt.basis = cfg.basis;
        topt.dynamical_decoupling = cfg.dd;
        topt.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(RngPurpose::Layout), k);
        const TranspileResult tr = transpile(c, map, topt);
        per[k] = {DepthRow{k, t, "logical", tr.logical}, DepthRow{k, t, "routed", tr.routed},
                  DepthRow{k, t, "consolidated", tr.final}};
    });
    std::vector<DepthRow> rows;
    for (auto &p : per) {
        rows.insert(rows.end(), p.begin(), p.end());
    }
    return rows;
}

void write_depth_outputs(const ExperimentConfig &cfg, const std::vector<DepthRow> &rows) {
    const auto dir = cfg.resolve(cfg.output);
    std::string out = "time_index,t_seconds,stage,width,two_qubit_depth,one_qubit_gates,"
                      "two_qubit_gates,swaps,dd_gates\n";
    std::map<std::string, std::vector<int>> depths;
    for (const auto &r : rows) {
        out += std::to_string(r.index) + ',' + text::fmt_double(r.t) + ',' + r.stage + ',' +
               report_csv(r.report) + '\n';
        depths[r.stage].push_back(r.report.two_qubit_depth);
    }
    text::write_file(dir / "depth_stats.csv", out);
    std::string hist = "stage,two_qubit_depth,count\n";
    std::string summary = "stage,mean,stddev,min,max\n";
    for (const char *stage : {"logical", "routed", "consolidated"}) {
        const auto it = depths.find(stage);
        if (it == depths.end()) {
            continue;
        }
        const auto s = depth_statistics(it->second);
        for (const auto &[d, n] : s.histogram) {
            hist += std::string(stage) + ',' + std::to_string(d) + ',' + std::to_string(n) + '\n';
        }
        summary += std::string(stage) + ',' + text::fmt_double(s.mean) + ',' +
                   text::fmt_double(s.stddev) + ',' + std::to_string(s.min) + ',' +
                   std::to_string(s.max) + '\n';
    }
    text::write_file(dir / "depth_histogram.csv", hist);
    text::write_file(dir / "depth_summary.csv", summary);
}

ShotSweepResult run_shot_protocol(const ExperimentConfig &cfg,
                                  const ResolvedExperiment &ex) {
    if (!cfg.shots) {
        throw ArgumentError("the shot protocol needs sampled mode (shots = <n>)");
    }
    check_width(ex.system.n_spins, cfg.max_width);
    ShotSweepConfig sc;
    sc.grid = cfg.sweep_grid.empty() ? ShotSweepConfig::default_grid() : cfg.sweep_grid;
    sc.n_points = std::min(cfg.sweep_points, cfg.points);
    sc.repeats = cfg.sweep_repeats;
    sc.epsilon = cfg.sweep_epsilon;
    sc.seed = cfg.seed;
    const TimePointEstimator est(cfg, ex, true);
    std::vector<complex_t> reference(cfg.points);
    const auto picks = sample_time_points(cfg.points, sc.n_points, sc.seed);
    parallel_for(picks.size(), cfg.threads,
                 [&](std::size_t i) { reference[picks[i]] = est.exact(picks[i]); });
    return shot_budget_sweep(sc, reference,
                             [&](std::size_t k, std::uint64_t shots, std::uint64_t seed) {
                                 return est.estimate(k, shots, seed, 0);
                             });
}

void write_shot_outputs(const ExperimentConfig &cfg, const ShotSweepResult &res) {
    const auto dir = cfg.resolve(cfg.output);
    std::string rows = "shots,repeat,time_index,estimate_re,estimate_im,reference_re,reference_im\n";
    for (const auto &r : res.rows) {
        rows += std::to_string(r.shots) + ',' + std::to_string(r.repeat) + ',' +
                std::to_string(r.time_index) + ',' + text::fmt_double(r.estimate.real()) + ',' +
                text::fmt_double(r.estimate.imag()) + ',' + text::fmt_double(r.reference.real()) +
                ',' + text::fmt_double(r.reference.imag()) + '\n';
    }
    text::write_file(dir / "shot_rows.csv", rows);
    std::string curve = "shots,mse,fit\n";
    for (std::size_t i = 0; i < res.grid.size(); ++i) {
        curve += std::to_string(res.grid[i]) + ',' + text::fmt_double(res.mse[i]) + ',' +
                 text::fmt_double(res.fit_a + res.fit_b / static_cast<double>(res.grid[i])) + '\n';
    }
    text::write_file(dir / "shot_curve.csv", curve);
    nlohmann::ordered_json m;
    m["selected_shots"] = res.selected;
    m["fit_a"] = res.fit_a;
    m["fit_b"] = res.fit_b;
    m["time_indices"] = res.time_indices;
    m["config_hash"] = config_hash(cfg);
    m["config"] = format_config(cfg);
    text::write_file(dir / "shot_protocol.json", m.dump(2) + "\n");
}

} // namespace nmrsim
