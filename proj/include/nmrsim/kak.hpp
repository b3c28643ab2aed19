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
 * Cartan (KAK) decomposition of two-qubit unitaries and minimal-count
 * resynthesis into CZ or Molmer-Sorensen based circuits.
 *
 * Canonical gate: Can(x, y, z) = exp(i (x XX + y YY + z ZZ)). Every U in
 * U(4) factors as
 *
 *     U = phase * (after0 (x) after1) Can(x, y, z) (before0 (x) before1)
 *
 * with the coordinates reduced into (-pi/4, pi/4].
 */
#pragma once

#include "nmrsim/circuit.hpp"

#include <optional>
#include <vector>

namespace nmrsim {

enum class NativeBasis {
    CZ, ///< SU2 + CZ (superconducting)
    MS, ///< SU2 + RXX(pi/2), the Molmer-Sorensen gate up to local phases
};

inline constexpr double kKakSnapTolerance = 1e-9;
inline constexpr double kMsAngle = 1.5707963267948966;

/**
 * @brief Accumulates local layers and CZ-equivalent entanglers on a qubit
 * pair and emits SU2 + native gates. Adjacent local layers merge into one
 * SU2 per qubit; layers proportional to the identity are dropped.
 */
class NativeEmitter {
  public:
    NativeEmitter(int q0, int q1, NativeBasis basis);
    /// Appends a (x) b in time order (a acts on q0).
    void local(const Mat2 &a, const Mat2 &b);
    /// Appends a CZ up to local phases expressed in the native basis.
    void entangle();
    std::vector<Gate> finish();

  private:
    void flush();

    int q0_, q1_;
    NativeBasis basis_;
    Mat2 p0_ = Mat2::Identity();
    Mat2 p1_ = Mat2::Identity();
    std::vector<Gate> out_;
};

struct KakDecomposition {
    complex_t global_phase{1.0, 0.0};
    Mat2 before0, before1;
    Mat2 after0, after1;
    double x = 0.0, y = 0.0, z = 0.0;
};

Mat4 canonical_gate(double x, double y, double z);

/// Throws NumericalError if the reconstruction check fails.
KakDecomposition kak_decompose(const Mat4 &u);

Mat4 kak_reconstruct(const KakDecomposition &k);

/// 0, 1, 2 or 3, from the canonical class with coordinates snapped at `tol`.
int minimal_cz_count(const KakDecomposition &k,
                     double tol = kKakSnapTolerance);
int minimal_cz_count(const Mat4 &u, double tol = kKakSnapTolerance);

/// Splits a 4x4 matrix proportional to a (x) b (a on the high bit). Returns
/// false when the matrix is not a tensor product within `tol`.
bool factor_tensor_product(const Mat4 &m, Mat2 &a, Mat2 &b,
                           double tol = 1e-9);

/**
 * @brief Gate sequence on (q0, q1) implementing u up to global phase with
 * the minimal number of native two-qubit gates. q0 is the high bit of u.
 *
 * The result is verified numerically; std::nullopt signals that
 * verification failed at `tol`.
 */
std::optional<std::vector<Gate>> synthesize_two_qubit(const Mat4 &u, int q0,
                                                      int q1, NativeBasis basis,
                                                      double tol = 2e-9);

/// Local 4x4 unitary of a gate list acting on qubits (q0 high, q1 low).
Mat4 gates_local_unitary(const std::vector<Gate> &gates, int q0, int q1);

} // namespace nmrsim
