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
 * Synthetic device noise: depolarizing gate errors, idle dephasing with
 * dynamical-decoupling suppression, readout flips and linear drift, sampled
 * by Pauli trajectories.
 *
 * Noise file format (line-oriented, '#' comments, every directive optional):
 *
 *     P1 <p>  P2 <p>  PRO <p>          global error probabilities
 *     T2IDLE <seconds|inf>             idle dephasing time
 *     DDSUPP <factor in [0,1]>         dephasing multiplier in DD windows
 *     DRIFT <dp1> <dp2> <dpro>         added per run index
 *     SEED <uint64>
 *     DUR <t_1q> <t_2q> <t_readout>
 *     Q <i> <err1q> <err_ro> <t1> <t2> per-qubit override of p1, p_ro, T2
 */
#pragma once

#include "nmrsim/circuit.hpp"
#include "nmrsim/coupling_map.hpp"
#include "nmrsim/statevector.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmrsim {

struct DriftSchedule {
    double dp1 = 0.0;
    double dp2 = 0.0;
    double dpro = 0.0;
};

struct QubitNoise {
    double p1 = 0.0;
    double p_ro = 0.0;
    double t2 = std::numeric_limits<double>::infinity();
};

struct NoiseModel {
    double p1 = 0.0;
    double p2 = 0.0;
    double p_ro = 0.0;
    double t2_idle = std::numeric_limits<double>::infinity();
    double dd_suppression = 1.0;
    std::optional<DriftSchedule> drift;
    std::uint64_t seed = 0;
    GateDurations durations;
    /// Indexed by circuit qubit; overrides p1, p_ro and t2_idle when present.
    std::vector<QubitNoise> qubit_overrides;

    /// Throws ValidationError when a probability leaves [0, 1].
    void validate() const;
    /// Model with drift applied for the given run index, clamped to [0, 1].
    [[nodiscard]] NoiseModel at_run(std::uint64_t run_index) const;
    [[nodiscard]] double p1_of(int q) const;
    [[nodiscard]] double p_ro_of(int q) const;
    [[nodiscard]] double t2_of(int q) const;
    [[nodiscard]] bool is_noiseless() const;

    /// Median calibration of a superconducting (CZ) device.
    static NoiseModel superconducting_defaults();
    /// Median calibration of a trapped-ion (MS) device.
    static NoiseModel trapped_ion_defaults();
};

NoiseModel parse_noise_model(std::string_view text);
NoiseModel load_noise_model(const std::filesystem::path &path);

/// Probability of an idle Z error over a window of length tau.
double dephasing_probability(double tau, double t2);

/**
 * @brief Samples n_shots trajectories of `c` under `nm`.
 *
 * Each shot decides from its own stream whether it is error-free (with the
 * exact product probability). Error-free shots reuse the sample_shots stream,
 * so a noiseless model reproduces sample_shots exactly.
 */
ShotCounts noisy_run(const Circuit &c, const NoiseModel &nm,
                     std::uint64_t n_shots, std::uint64_t seed,
                     const RunOptions &opt = {});

/// Applies per-qubit readout flips to a marginal distribution exactly.
std::vector<double> apply_readout_noise(const std::vector<double> &p,
                                        const std::vector<int> &measured,
                                        const NoiseModel &nm);

std::vector<std::size_t> randomized_time_ordering(std::size_t k,
                                                  std::uint64_t seed);

struct ShotSweepConfig {
    std::vector<std::uint64_t> grid; ///< ascending
    std::size_t n_points = 20;
    std::size_t repeats = 1;
    double epsilon = 0.1;
    std::uint64_t seed = 0;

    static std::vector<std::uint64_t> default_grid();
};

struct ShotSweepRow {
    std::size_t time_index = 0;
    std::uint64_t shots = 0;
    std::size_t repeat = 0;
    complex_t estimate;
    complex_t reference;
};

struct ShotSweepResult {
    std::vector<std::size_t> time_indices;
    std::vector<std::uint64_t> grid;
    std::vector<double> mse; ///< per grid value, averaged over repeats
    std::vector<ShotSweepRow> rows;
    double fit_a = 0.0; ///< MSE(n) ~ fit_a + fit_b / n
    double fit_b = 0.0;
    std::uint64_t selected = 0;
};

/// `n` distinct indices from [0, k) in ascending order, seed-deterministic.
std::vector<std::size_t> sample_time_points(std::size_t k, std::size_t n,
                                            std::uint64_t seed);

/// estimate(time_index, shots, seed) returns a sampled magnetization;
/// reference[time_index] is the noiseless value. Time points are drawn
/// without replacement from [0, reference.size()).
ShotSweepResult shot_budget_sweep(
    const ShotSweepConfig &cfg, const std::vector<complex_t> &reference,
    const std::function<complex_t(std::size_t, std::uint64_t, std::uint64_t)>
        &estimate);

/// Smallest grid value whose fitted MSE is within (1 + epsilon) of the fit
/// at the largest grid value.
std::uint64_t select_plateau(const std::vector<std::uint64_t> &grid,
                             double fit_a, double fit_b, double epsilon);

void fit_inverse_law(const std::vector<std::uint64_t> &grid,
                     const std::vector<double> &mse, double &a, double &b);

} // namespace nmrsim
