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
 * Statevector execution engine: gate kernels, a fusing circuit runner,
 * exact magnetization expectations and shot sampling.
 */
#pragma once

#include "nmrsim/circuit.hpp"
#include "nmrsim/statevector_type.hpp"
#include "nmrsim/trotter.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nmrsim {

inline constexpr int kDefaultMaxWidth = 26;

/// Purpose ids separating the random streams of different consumers.
enum class RngPurpose : std::uint64_t {
    Sampling = 1,
    NoiseSelect = 2,
    NoiseEvents = 3,
    Readout = 4,
    Layout = 5,
    TimeOrder = 6,
    TimeSample = 7,
    Calibration = 8,
};

struct RunOptions {
    int max_width = kDefaultMaxWidth;
    /// Merge gate runs on the same qubit or pair into 2x2 / 4x4 passes.
    bool fuse = true;
};

void apply_gate(Statevector &state, const Gate &g);
void apply_matrix_1q(Statevector &state, int q, const Mat2 &m);
/// `a` is the high bit of the local basis of `m`.
void apply_matrix_2q(Statevector &state, int a, int b, const Mat4 &m);

/// Throws CapabilityError if `width` exceeds `max_width`.
void check_width(int width, int max_width);

Statevector run_circuit(const Circuit &c, const RunOptions &opt = {});
Statevector run_circuit(const Circuit &c, const Statevector &initial,
                        const RunOptions &opt = {});

/// Sum over observed j of <sigma_j^X>/2 + i <sigma_j^Y>/2, one pass per spin.
complex_t transverse_magnetization(const Statevector &state,
                                   const std::vector<int> &observed);
double expectation_magnetization(const Statevector &state,
                                 const std::vector<int> &observed,
                                 MagnetizationAxis axis);

/// Index bit k of the result corresponds to measured[k].
std::vector<double> marginal_probabilities(const Statevector &state,
                                           const std::vector<int> &measured);

struct ShotCounts {
    /// Character i of every key is the outcome of measured[i].
    std::vector<int> measured;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t n_shots = 0;
};

std::string outcome_bitstring(std::uint64_t outcome, std::size_t n_bits);

/// Shot s draws one uniform from its own stream, so counts do not depend on
/// how shots are partitioned.
ShotCounts sample_shots(const Statevector &state,
                        const std::vector<int> &measured, std::uint64_t n_shots,
                        std::uint64_t seed);

/// Draws outcome indices (bit k = measured[k]) from a marginal distribution.
std::uint64_t sample_outcome(const std::vector<double> &cdf, double u);
std::vector<double> cumulative(const std::vector<double> &p);

double magnetization_from_counts(const ShotCounts &counts,
                                 const std::vector<int> &observed,
                                 bool axis_already_rotated);

} // namespace nmrsim
