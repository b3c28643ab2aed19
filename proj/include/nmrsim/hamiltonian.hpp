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
 * Rotating-frame Hamiltonian as a weighted Pauli-term list, plus a dense
 * exact-propagation oracle for small systems.
 *
 * With I = sigma/2 the rotating-frame Hamiltonian reads
 *
 *     H = sum_k omega_k Z_k / 2 + sum_{i<j} c_ij (X_i X_j + Y_i Y_j + Z_i Z_j) / 4
 *
 * with c_ij = 2 pi J_ij. All three Pauli pairs are kept (no secular
 * truncation), including between different isotopes.
 */
#pragma once

#include "nmrsim/spin_system.hpp"
#include "nmrsim/statevector_type.hpp"

#include <Eigen/Dense>

#include <vector>

namespace nmrsim {

struct ZTerm {
    int spin = 0;
    double omega = 0.0; ///< rad/s
};

struct CouplingTerm {
    int i = 0;
    int j = 0;
    double c = 0.0; ///< rad/s, equals 2 pi J
};

struct PauliTermList {
    int n_spins = 0;
    std::vector<ZTerm> z_terms;
    std::vector<CouplingTerm> coupling_terms;

    [[nodiscard]] std::size_t term_count() const {
        return z_terms.size() + coupling_terms.size();
    }
};

/**
 * @brief Rotating-frame offsets omega_k = 2 pi (shift_k * 1e-6) nu_k.
 *
 * nu_k is the Larmor frequency of spin k's own isotope, so each species sits
 * in its own rotating frame. Positive ppm and positive gamma give positive
 * omega.
 */
std::vector<double> offset_frequencies(const SpinSystem &sys,
                                       const FieldConfig &field);

PauliTermList build_rotating_hamiltonian(const SpinSystem &sys,
                                         const FieldConfig &field);

/**
 * @brief Lab-frame Hamiltonian, -gamma_k (1 - sigma_k) B0 I_z + couplings,
 * with sigma_k = shift_k * 1e-6. Only used as a reference; its Zeeman
 * frequencies are far outside any practical sampling rate.
 */
PauliTermList build_lab_hamiltonian(const SpinSystem &sys,
                                    const FieldConfig &field);

inline constexpr int kDenseMaxSpins = 12;

/// Dense 2^N x 2^N matrix of the term list. Throws CapabilityError for N > 12.
Eigen::MatrixXcd dense_hamiltonian(const PauliTermList &h);

/// exp(-iHt) via one Hermitian eigendecomposition, reusable for many t.
class ExactPropagator {
  public:
    explicit ExactPropagator(const PauliTermList &h);

    [[nodiscard]] Statevector evolve(const Statevector &psi0, double t) const;
    [[nodiscard]] Eigen::MatrixXcd unitary(double t) const;
    [[nodiscard]] const Eigen::VectorXd &eigenvalues() const {
        return evals_;
    }

  private:
    int n_spins_;
    Eigen::VectorXd evals_;
    Eigen::MatrixXcd evecs_;
};

Statevector exact_propagator_state(const PauliTermList &h, double t,
                                   const Statevector &psi0);

} // namespace nmrsim
