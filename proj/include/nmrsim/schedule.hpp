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
 * ASAP timing of a circuit and extraction of per-qubit idle windows.
 *
 * Gates flagged `dd` are filler: they take no time and only mark the window
 * they sit in as protected. Measure gates start together at the makespan.
 */
#pragma once

#include "nmrsim/circuit.hpp"
#include "nmrsim/coupling_map.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace nmrsim {

inline constexpr std::size_t kEndOfCircuit =
    std::numeric_limits<std::size_t>::max();

struct IdleWindow {
    int qubit = 0;
    double start = 0.0;
    double end = 0.0;
    /// Index of the first timed gate on `qubit` after the window, or
    /// kEndOfCircuit for the tail window that ends at the makespan.
    std::size_t next_gate = kEndOfCircuit;
    bool dd_protected = false;

    [[nodiscard]] double duration() const { return end - start; }
};

struct Schedule {
    std::vector<double> start; ///< per gate; dd gates get their window start
    std::vector<double> end;
    double makespan = 0.0; ///< end of the last non-measure gate
    std::vector<IdleWindow> idle;
};

/// Windows shorter than `min_window` are omitted. Qubits idle before their
/// first gate (still in |0>) produce no window.
Schedule schedule_asap(const Circuit &c, const GateDurations &dur,
                       double min_window = 0.0);

} // namespace nmrsim
