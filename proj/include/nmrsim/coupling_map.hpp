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
 * Device connectivity with per-edge and per-qubit calibration data.
 *
 * File format (line-oriented, '#' comments):
 *
 *     QUBITS <n>                      first directive
 *     EDGE <i> <j> <err2q>            undirected, i != j
 *     Q <i> <err1q> <err_ro> <t1> <t2>
 *     DUR <t_1q> <t_2q> <t_readout>   seconds
 */
#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nmrsim {

struct GateDurations {
    double one_qubit = 32e-9;
    double two_qubit = 68e-9;
    double readout = 2.6e-6;
};

struct QubitProps {
    double err1q = 0.0;
    double err_ro = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    double t2 = std::numeric_limits<double>::infinity();
};

class CouplingMap {
  public:
    explicit CouplingMap(int n_physical = 0);

    /// Adding an existing edge overwrites its error rate.
    void add_edge(int a, int b, double err2q);
    /// Validates calibration data and computes all-pairs distances. Must be
    /// called after the last add_edge.
    void finalize();

    [[nodiscard]] int n_physical() const noexcept { return n_; }
    /// Sorted (min, max) pairs.
    [[nodiscard]] const std::vector<std::pair<int, int>> &edges() const {
        return edges_;
    }
    [[nodiscard]] const std::vector<int> &neighbors(int q) const;
    [[nodiscard]] bool connected(int a, int b) const;
    [[nodiscard]] double edge_error(int a, int b) const;
    /// Shortest-path hop count, -1 when unreachable.
    [[nodiscard]] int distance(int a, int b) const;
    [[nodiscard]] bool is_all_to_all() const;

    std::vector<QubitProps> qubits;
    GateDurations durations;
    std::string label;

  private:
    void check(int q) const;

    int n_;
    bool finalized_ = false;
    std::vector<std::pair<int, int>> edges_;
    std::vector<double> edge_err_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> dist_;
};

CouplingMap parse_coupling_map(std::string_view text);
CouplingMap load_coupling_map(const std::filesystem::path &path);
std::string format_coupling_map(const CouplingMap &map);

/**
 * @brief 156-qubit heavy-hex lattice: 8 rows of 16 qubits joined by 4
 * bridge qubits per gap (28 bridges). Bridges sit under columns 3, 7, 11, 15
 * after even rows and 1, 5, 9, 13 after odd rows, so every bridge joins a
 * degree-3 pair. Calibration values jitter deterministically around the
 * given medians.
 */
CouplingMap heavy_hex_map(double err1q = 2.07e-4, double err2q = 1.93e-3,
                          double err_ro = 7.81e-3, double t1 = 210e-6,
                          double t2 = 188e-6);

CouplingMap all_to_all_map(int n, double err1q = 2.1e-4, double err2q = 7.66e-3,
                           double err_ro = 6.08e-3, double t1 = 188.0,
                           double t2 = 0.95,
                           GateDurations durations = {63e-6, 650e-6, 250e-6});

CouplingMap line_map(int n, double err2q = 1e-3);

} // namespace nmrsim
