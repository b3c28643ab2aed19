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
/**
 * @file
 * End-to-end experiment driver: one Trotter circuit per FID sample, executed
 * exactly, by sampling, or under synthetic noise, with optional transpilation
 * and readout mitigation. Also hosts the depth-statistics and shot-budget
 * workflows.
 */
#pragma once

#include "nmrsim/config.hpp"
#include "nmrsim/coupling_map.hpp"
#include "nmrsim/hamiltonian.hpp"
#include "nmrsim/mitigation.hpp"
#include "nmrsim/noise.hpp"
#include "nmrsim/spectrum.hpp"
#include "nmrsim/spin_system.hpp"
#include "nmrsim/transpiler.hpp"
#include "nmrsim/trotter.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmrsim {

struct ResolvedExperiment {
    SpinSystem system;
    FieldConfig field;
    PauliTermList hamiltonian;
    std::vector<int> observed;
    double reference_hz = 0.0;
    double dwell_time = 0.0;
    std::optional<NoiseModel> noise;
    std::optional<CouplingMap> map;
};

/// Customary chemical-shift window of a nucleus in ppm (0 when unknown).
double usual_ppm_span(std::string_view symbol);

/// The usual ppm window of the observed nucleus, widened to 2.5 times the
/// largest offset-plus-coupling reach of any observed spin.
double auto_spectral_width(const SpinSystem &sys, const FieldConfig &field,
                           const std::vector<int> &observed);

/// Loads the spin system, noise model and coupling map named by `cfg`.
ResolvedExperiment resolve_experiment(const ExperimentConfig &cfg);

/// Noise seen by a compacted circuit whose qubit i is map qubit kept[i].
NoiseModel restrict_noise(const NoiseModel &nm, const std::vector<int> &kept);

/**
 * @brief Produces <M_X> + i<M_Y> for single time points.
 *
 * Transpiled circuits and noiseless states are cached per (time index, axis)
 * when caching is enabled, so repeated sampling at different shot counts only
 * redraws outcomes. Safe to call from several threads.
 */
class TimePointEstimator {
  public:
    TimePointEstimator(const ExperimentConfig &cfg, const ResolvedExperiment &ex,
                       bool cache = false);

    [[nodiscard]] double time_of(std::size_t k) const;

    /// Noiseless expectation from the logical circuit.
    [[nodiscard]] complex_t exact(std::size_t k) const;

    /// Expectation in the configured mode (exact or sampled). `run_index`
    /// drives the drift schedule; `report` receives the X-axis circuit report.
    complex_t estimate(std::size_t k, std::uint64_t shots, std::uint64_t seed,
                       std::uint64_t run_index,
                       TranspileReport *report = nullptr) const;

  private:
    struct Prepared {
        Circuit circuit;
        std::vector<int> kept;
        TranspileReport report;
        std::shared_ptr<const Statevector> state; ///< noiseless, pre-measurement
    };

    std::shared_ptr<const Prepared> prepare(std::size_t k, MagnetizationAxis axis) const;
    double sampled_axis(std::size_t k, MagnetizationAxis axis, std::uint64_t shots,
                        std::uint64_t seed, std::uint64_t run_index,
                        TranspileReport *report) const;

    const ExperimentConfig &cfg_;
    const ResolvedExperiment &ex_;
    bool cache_;
    mutable std::mutex mu_;
    mutable std::vector<std::shared_ptr<const Prepared>> prepared_;
};

struct TimePointRecord {
    std::size_t index = 0;
    double t = 0.0;
    complex_t value;
    std::size_t run_index = 0;
    double wall_seconds = 0.0;
    TranspileReport report;
};

struct SimulationResult {
    FidSeries fid;
    std::vector<TimePointRecord> points; ///< in time order
    std::vector<std::size_t> execution_order;
    double wall_seconds = 0.0;
};

/// Time points are spread over cfg.threads workers; results do not depend
/// on the worker count.
SimulationResult run_simulation(const ExperimentConfig &cfg,
                                const ResolvedExperiment &ex);

/// Writes fid.csv, timings.csv and manifest.json into the output directory.
void write_simulation_outputs(const ExperimentConfig &cfg,
                              const ResolvedExperiment &ex,
                              const SimulationResult &res);

struct DepthRow {
    std::size_t index = 0;
    double t = 0.0;
    std::string stage; ///< logical | routed | consolidated
    TranspileReport report;
};

std::vector<DepthRow> run_depth_stats(const ExperimentConfig &cfg,
                                      const ResolvedExperiment &ex);
void write_depth_outputs(const ExperimentConfig &cfg,
                         const std::vector<DepthRow> &rows);

ShotSweepResult run_shot_protocol(const ExperimentConfig &cfg,
                                  const ResolvedExperiment &ex);
void write_shot_outputs(const ExperimentConfig &cfg, const ShotSweepResult &res);

} // namespace nmrsim
