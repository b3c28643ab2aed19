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
 * Dense-unitary helpers for small circuits (verification and resynthesis).
 */
#pragma once

#include "nmrsim/circuit.hpp"

#include <Eigen/Dense>

namespace nmrsim {

inline constexpr int kDenseMaxQubits = 12;

/// Column k is the gate-by-gate image of basis state k; Measure is ignored.
Eigen::MatrixXcd circuit_unitary(const Circuit &c);

/// max_ij |a_ij - e^{i phi} b_ij| with phi aligning the Hilbert-Schmidt
/// overlap of a and b.
double phase_aligned_distance(const Eigen::MatrixXcd &a,
                              const Eigen::MatrixXcd &b);

bool equal_up_to_global_phase(const Eigen::MatrixXcd &a,
                              const Eigen::MatrixXcd &b, double tol);

/// Permutation operator P with P|x> = |y>, y_{perm[q]} = x_q.
Eigen::MatrixXcd qubit_permutation_matrix(const std::vector<int> &perm);

} // namespace nmrsim
