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
#include "nmrsim/hamiltonian.hpp"

#include "nmrsim/errors.hpp"

#include <cmath>
#include <numbers>

namespace nmrsim {

std::vector<double> offset_frequencies(const SpinSystem &sys,
                                       const FieldConfig &field) {
    if (!(field.b0_tesla > 0.0)) {
        throw ArgumentError("b0_tesla must be positive");
    }
    std::vector<double> omega(static_cast<std::size_t>(sys.n_spins));
    for (std::size_t k = 0; k < omega.size(); ++k) {
        const double nu = larmor_hz(sys.isotopes[k], field);
        omega[k] = 2.0 * std::numbers::pi * (sys.shifts_ppm[k] * 1e-6) * nu;
    }
    return omega;
}

namespace {
void add_couplings(const SpinSystem &sys, PauliTermList &h) {
    for (const auto &[pair, hz] : sys.couplings_hz) {
        if (hz == 0.0) {
            continue;
        }
        h.coupling_terms.push_back(
            {pair.first, pair.second, 2.0 * std::numbers::pi * hz});
    }
}
} // namespace

PauliTermList build_rotating_hamiltonian(const SpinSystem &sys,
                                         const FieldConfig &field) {
    sys.validate();
    PauliTermList h;
    h.n_spins = sys.n_spins;
    const auto omega = offset_frequencies(sys, field);
    for (int k = 0; k < sys.n_spins; ++k) {
        h.z_terms.push_back({k, omega[static_cast<std::size_t>(k)]});
    }
    // std::map iteration gives row-major (i, j) order
    add_couplings(sys, h);
    return h;
}

PauliTermList build_lab_hamiltonian(const SpinSystem &sys,
                                    const FieldConfig &field) {
    sys.validate();
    if (!(field.b0_tesla > 0.0)) {
        throw ArgumentError("b0_tesla must be positive");
    }
    PauliTermList h;
    h.n_spins = sys.n_spins;
    for (int k = 0; k < sys.n_spins; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        const double sigma = sys.shifts_ppm[uk] * 1e-6;
        h.z_terms.push_back({k, -sys.isotopes[uk].gyromagnetic_ratio *
                                    (1.0 - sigma) * field.b0_tesla});
    }
    add_couplings(sys, h);
    return h;
}

Eigen::MatrixXcd dense_hamiltonian(const PauliTermList &h) {
    if (h.n_spins > kDenseMaxSpins) {
        throw CapabilityError("dense Hamiltonian limited to " +
                              std::to_string(kDenseMaxSpins) + " spins, got " +
                              std::to_string(h.n_spins));
    }
    const std::size_t dim = std::size_t{1} << h.n_spins;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const auto r = static_cast<Eigen::Index>(idx);
        double diag = 0.0;
        for (const auto &z : h.z_terms) {
            const double sz = ((idx >> z.spin) & 1U) ? -1.0 : 1.0;
            diag += 0.5 * z.omega * sz;
        }
        for (const auto &cp : h.coupling_terms) {
            const bool bi = (idx >> cp.i) & 1U;
            const bool bj = (idx >> cp.j) & 1U;
            diag += 0.25 * cp.c * (bi == bj ? 1.0 : -1.0);
            if (bi != bj) {
                // (XX + YY)|01> = 2|10>
                const std::size_t flipped =
                    idx ^ ((std::size_t{1} << cp.i) | (std::size_t{1} << cp.j));
                m(static_cast<Eigen::Index>(flipped), r) += 0.5 * cp.c;
            }
        }
        m(r, r) += diag;
    }
    return m;
}

ExactPropagator::ExactPropagator(const PauliTermList &h) : n_spins_(h.n_spins) {
    const Eigen::MatrixXcd m = dense_hamiltonian(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) {
        throw NumericalError("Hamiltonian eigendecomposition failed");
    }
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
}

Statevector ExactPropagator::evolve(const Statevector &psi0, double t) const {
    if (psi0.width() != n_spins_) {
        throw ArgumentError("initial state width does not match Hamiltonian");
    }
    const auto dim = static_cast<Eigen::Index>(psi0.size());
    Eigen::Map<const Eigen::VectorXcd> v(psi0.amplitudes().data(), dim);
    Eigen::VectorXcd coeff = evecs_.adjoint() * v;
    for (Eigen::Index k = 0; k < dim; ++k) {
        coeff(k) *= std::polar(1.0, -evals_(k) * t);
    }
    Eigen::VectorXcd out = evecs_ * coeff;
    return Statevector(n_spins_,
                       std::vector<complex_t>(out.data(), out.data() + dim));
}

Eigen::MatrixXcd ExactPropagator::unitary(double t) const {
    Eigen::VectorXcd phases(evals_.size());
    for (Eigen::Index k = 0; k < evals_.size(); ++k) {
        phases(k) = std::polar(1.0, -evals_(k) * t);
    }
    return evecs_ * phases.asDiagonal() * evecs_.adjoint();
}

Statevector exact_propagator_state(const PauliTermList &h, double t,
                                   const Statevector &psi0) {
    if (h.n_spins > kDenseMaxSpins) {
        throw CapabilityError("exact propagation limited to " +
                              std::to_string(kDenseMaxSpins) + " spins");
    }
    if (t == 0.0) {
        return psi0;
    }
    return ExactPropagator(h).evolve(psi0, t);
}

} // namespace nmrsim
