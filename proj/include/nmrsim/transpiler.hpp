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
 * Circuit passes from the logical IR down to a routed, resynthesized native
 * circuit: lowering, error-aware layout, SWAP routing, two-qubit block
 * consolidation with KAK resynthesis, and dynamical decoupling.
 */
#pragma once

#include "nmrsim/circuit.hpp"
#include "nmrsim/coupling_map.hpp"
#include "nmrsim/kak.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nmrsim {

/// True for SU2, measurements, dd filler and the basis entangler.
bool is_native(const Gate &g, NativeBasis basis);

/**
 * @brief Rule-based lowering to SU2 + native entangler, gate by gate.
 *
 * Pauli-pair rotations reduce their angle modulo 2 pi first: theta = 0 is
 * dropped, theta = pi is the local gate -i PP, theta = +-pi/2 needs one
 * entangler, anything else two. SWAP uses three.
 */
Circuit lower_to_native(const Circuit &c, NativeBasis basis);

struct LayoutOptions {
    std::uint64_t seed = 0;
    int restarts = 4;
};

/// Primary: sum of multiplicity * (distance - 1) over interacting pairs.
/// Secondary: calibrated error of the edges and qubits the layout uses.
struct LayoutCost {
    long long hops = 0;
    double error = 0.0;

    friend bool operator<(const LayoutCost &a, const LayoutCost &b) {
        if (a.hops != b.hops) {
            return a.hops < b.hops;
        }
        return a.error < b.error - 1e-15;
    }
};

LayoutCost layout_cost(const Circuit &c, const CouplingMap &map,
                       const std::vector<int> &layout);

/// Injective logical -> physical assignment minimizing layout_cost.
std::vector<int> select_layout(const Circuit &c, const CouplingMap &map,
                               const LayoutOptions &opt = {});

/**
 * @brief Inserts SWAPs so every two-qubit gate acts on a map edge.
 *
 * Output width is map.n_physical(); initial_layout / final_layout record the
 * logical -> physical assignment before and after the circuit.
 */
Circuit route(const Circuit &c, const std::vector<int> &layout,
              const CouplingMap &map, std::size_t *swap_count = nullptr);

/**
 * @brief Merges runs of gates confined to one qubit pair into 4x4 blocks and
 * resynthesizes each with the minimal native entangler count.
 *
 * Never increases the two-qubit count (SWAP counts as three). Non-native
 * gates are always replaced. Iterates to a fixpoint.
 */
Circuit consolidate_and_resynthesize(const Circuit &c, NativeBasis basis);

/// One X-X pair (flagged dd) per idle window of at least twice the
/// one-qubit duration.
Circuit insert_dynamical_decoupling(const Circuit &c, const CouplingMap &map,
                                    std::size_t *inserted = nullptr);

/// Drops physical qubits no gate or layout entry touches and relabels the
/// rest in increasing order. `kept[new] = old`.
Circuit compact(const Circuit &c, std::vector<int> *kept = nullptr);

struct TranspileReport {
    int width = 0;
    int two_qubit_depth = 0;
    std::size_t one_qubit_gate_count = 0;
    std::size_t two_qubit_gate_count = 0;
    std::size_t swap_count = 0;
    std::size_t dd_gates_inserted = 0;
};

TranspileReport make_report(const Circuit &c, std::size_t swaps = 0,
                            std::size_t dd = 0);

enum class TargetKind { Logical, HeavyHex, AllToAll };

TargetKind parse_target(const std::string &name);
std::string target_name(TargetKind t);

struct TranspileOptions {
    TargetKind target = TargetKind::Logical;
    NativeBasis basis = NativeBasis::CZ;
    bool dynamical_decoupling = false;
    std::uint64_t seed = 0;
    /// Precomputed layout; selected from the circuit when empty.
    std::vector<int> layout;
};

struct TranspileResult {
    Circuit circuit;          ///< compacted, ready to simulate
    TranspileReport logical;  ///< input circuit
    TranspileReport routed;   ///< lowered + routed
    TranspileReport final;    ///< consolidated (+ dd)
    std::vector<int> layout;  ///< layout used, in physical map indices
    std::vector<int> kept;    ///< compact index -> physical map index
};

/// lower -> layout -> route -> consolidate -> (dd) -> compact. For the
/// Logical target the circuit passes through unchanged.
TranspileResult transpile(const Circuit &c, const CouplingMap *map,
                          const TranspileOptions &opt);

struct DepthStatistics {
    double mean = 0.0;
    double stddev = 0.0; ///< population standard deviation
    int min = 0;
    int max = 0;
    std::vector<std::pair<int, std::size_t>> histogram; ///< (depth, count)
};

DepthStatistics depth_statistics(const std::vector<int> &depths);
DepthStatistics depth_statistics(const std::vector<Circuit> &circuits);

} // namespace nmrsim
