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
 * Circuit intermediate representation.
 *
 * Rotation conventions: RZ(t) = exp(-i t Z / 2), RPP(t) = exp(-i t P (x) P / 2)
 * for P in {X, Y, Z}. SU2(theta, phi, lambda) = RZ(phi) RY(theta) RZ(lambda),
 * defined up to global phase. Two-qubit matrices use the first listed qubit
 * as the most significant bit of the local 4x4 basis.
 */
#pragma once

#include "nmrsim/statevector_type.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nmrsim {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

enum class GateKind : std::uint8_t {
    PrepH,
    PauliX,
    RZ,
    RXX,
    RYY,
    RZZ,
    CZ,
    SU2,
    SWAP,
    Measure,
};

std::string_view gate_name(GateKind kind);

struct Gate {
    GateKind kind = GateKind::PrepH;
    std::array<int, 2> qubits{-1, -1};
    std::array<double, 3> params{0.0, 0.0, 0.0};
    /// Inserted by dynamical decoupling; the scheduler treats it as filler.
    bool dd = false;

    [[nodiscard]] int arity() const;
    [[nodiscard]] double angle() const { return params[0]; }

    static Gate h(int q) { return {GateKind::PrepH, {q, -1}}; }
    static Gate x(int q) { return {GateKind::PauliX, {q, -1}}; }
    static Gate rz(int q, double theta) {
        return {GateKind::RZ, {q, -1}, {theta, 0.0, 0.0}};
    }
    static Gate rxx(int a, int b, double theta) {
        return {GateKind::RXX, {a, b}, {theta, 0.0, 0.0}};
    }
    static Gate ryy(int a, int b, double theta) {
        return {GateKind::RYY, {a, b}, {theta, 0.0, 0.0}};
    }
    static Gate rzz(int a, int b, double theta) {
        return {GateKind::RZZ, {a, b}, {theta, 0.0, 0.0}};
    }
    static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}}; }
    static Gate swap(int a, int b) { return {GateKind::SWAP, {a, b}}; }
    static Gate su2(int q, double theta, double phi, double lambda) {
        return {GateKind::SU2, {q, -1}, {theta, phi, lambda}};
    }
    static Gate measure(int q) { return {GateKind::Measure, {q, -1}}; }

    friend bool operator==(const Gate &, const Gate &) = default;
};

[[nodiscard]] inline bool is_two_qubit(GateKind k) {
    return k == GateKind::RXX || k == GateKind::RYY || k == GateKind::RZZ ||
           k == GateKind::CZ || k == GateKind::SWAP;
}
[[nodiscard]] inline bool is_single_qubit(GateKind k) {
    return k == GateKind::PrepH || k == GateKind::PauliX ||
           k == GateKind::RZ || k == GateKind::SU2;
}

/// 2x2 unitary of a single-qubit gate (SU2 is returned with det = 1).
Mat2 single_qubit_matrix(const Gate &g);
/// 4x4 unitary of a two-qubit gate in the |q0 q1> basis.
Mat4 two_qubit_matrix(const Gate &g);

Mat2 su2_matrix(double theta, double phi, double lambda);
/// ZYZ angles of `u` with u ~ su2_matrix(theta, phi, lambda) up to phase.
std::array<double, 3> zyz_angles(const Mat2 &u);
Gate su2_from_matrix(int qubit, const Mat2 &u);

/// Kronecker product with `a` acting on the high (first) qubit.
Mat4 kron2(const Mat2 &a, const Mat2 &b);

/// Same operator with the roles of the two qubits exchanged.
Mat4 swap_qubit_roles(const Mat4 &m);

class Circuit {
  public:
    explicit Circuit(int width = 0, double time_point = 0.0);

    /// Validates qubit indices and the measure-last invariant.
    void append(const Gate &g);
    void append(std::span<const Gate> gates);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] double time_point() const noexcept { return time_point_; }
    void set_time_point(double t) noexcept { time_point_ = t; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept {
        return gates_;
    }
    [[nodiscard]] const std::vector<int> &measured_qubits() const noexcept {
        return measured_;
    }

    [[nodiscard]] std::size_t count(GateKind k) const;
    [[nodiscard]] std::size_t one_qubit_gate_count() const;
    [[nodiscard]] std::size_t two_qubit_gate_count() const;

    /// Logical -> physical assignment before and after routing. Empty for
    /// unrouted circuits.
    std::vector<int> initial_layout;
    std::vector<int> final_layout;

  private:
    int width_;
    double time_point_;
    std::vector<Gate> gates_;
    std::vector<int> measured_;
};

/// Depth of the dependency DAG counting only two-qubit gates.
int logical_two_qubit_depth(const Circuit &c);

/**
 * Line format:
 *
 *     CIRCUIT <width> <time_point>
 *     LAYOUT <p_0> ... (optional)
 *     FINAL_LAYOUT <p_0> ... (optional)
 *     GATE <kind> <q0> [q1] [angles...] [dd]
 */
std::string serialize_circuit(const Circuit &c);
Circuit parse_circuit(std::string_view text);

} // namespace nmrsim
