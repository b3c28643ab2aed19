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
 * Grouped readout-confusion mitigation over the observed bitstring support,
 * followed by low-confidence rescaling of the quasi-distribution.
 */
#pragma once

#include "nmrsim/noise.hpp"
#include "nmrsim/statevector.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nmrsim {

inline constexpr std::size_t kMaxConfusionGroup = 4;
inline constexpr double kMaxConfusionCondition = 1e12;

/// Bit k of a group-local index is the outcome of groups[g][k]. Entry (i, j)
/// of matrices[g] is P(observe i | prepared j).
struct ConfusionModel {
    std::vector<int> measured;
    std::vector<std::vector<int>> groups;
    std::vector<Eigen::MatrixXd> matrices;

    void validate() const;
};

/// Keys are bitstrings as in ShotCounts; values may be negative.
struct QuasiDistribution {
    std::vector<int> measured;
    std::map<std::string, double> probs;

    [[nodiscard]] double total() const;
};

/// Consecutive runs of `size` qubits in measurement order.
std::vector<std::vector<int>> contiguous_groups(const std::vector<int> &measured,
                                                std::size_t size = 1);

ConfusionModel analytic_confusion(const NoiseModel &nm,
                                  const std::vector<int> &measured,
                                  const std::vector<std::vector<int>> &groups);

/// Runs the 2^g basis-state preparations of every group through noisy_run.
ConfusionModel calibrate_confusion(const NoiseModel &nm,
                                   const std::vector<int> &measured,
                                   const std::vector<std::vector<int>> &groups,
                                   std::uint64_t n_cal, std::uint64_t seed);

QuasiDistribution mitigate_counts(const ShotCounts &counts,
                                  const ConfusionModel &cm);

/// Same solve on a dense distribution (index bit k = measured[k]); entries
/// that are exactly zero lie outside the support and stay zero.
std::vector<double> mitigate_distribution(const std::vector<double> &p,
                                          const std::vector<int> &measured,
                                          const ConfusionModel &cm);

QuasiDistribution rescale_low_confidence(const QuasiDistribution &q,
                                         double tau);

QuasiDistribution counts_to_distribution(const ShotCounts &counts);

/// Same estimator as magnetization_from_counts, on a (quasi-)distribution.
double magnetization_from_distribution(const QuasiDistribution &q,
                                       const std::vector<int> &observed);

} // namespace nmrsim
