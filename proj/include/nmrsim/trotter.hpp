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
 * One-step product-formula circuits for the rotating-frame Hamiltonian.
 *
 * Gate order inside a step: every RZ in spin order, then for each coupling
 * in row-major (i, j) order the triple RXX, RYY, RZZ with angle pi J t.
 */
#pragma once

#include "nmrsim/circuit.hpp"
#include "nmrsim/hamiltonian.hpp"

#include <vector>

namespace nmrsim {

enum class MagnetizationAxis { X, Y };

std::vector<Gate> prepare_plus_state_gates(int width);

/// Evolution gates only (no state preparation).
std::vector<Gate> trotter_evolution_gates(const PauliTermList &h, double t);

/// Preparation of |+>^N followed by the evolution gates. Negative t yields
/// the inverse product in reversed order.
Circuit trotter_step(const PauliTermList &h, double t);

/// Basis change mapping <sigma_axis> onto <Z>: H for X, SU2 ~ H S^dagger for
/// Y.
std::vector<Gate> measurement_rotation(MagnetizationAxis axis,
                                       const std::vector<int> &observed);

/// trotter_step followed by measurement_rotation and Measure on `observed`.
Circuit measurement_circuit(const PauliTermList &h, double t,
                            MagnetizationAxis axis,
                            const std::vector<int> &observed);

} // namespace nmrsim
