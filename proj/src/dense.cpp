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
#include "nmrsim/dense.hpp"

#include "nmrsim/errors.hpp"
#include "nmrsim/statevector.hpp"

#include <cmath>

namespace nmrsim {

Eigen::MatrixXcd circuit_unitary(const Circuit &c) {
    if (c.width() > kDenseMaxQubits) {
        throw CapabilityError("dense circuit unitary limited to " +
                              std::to_string(kDenseMaxQubits) + " qubits");
    }
    const std::size_t dim = std::size_t{1} << c.width();
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd u(d, d);
    for (std::size_t k = 0; k < dim; ++k) {
        std::vector<complex_t> amps(dim, complex_t{0.0, 0.0});
        amps[k] = 1.0;
        Statevector s(c.width(), std::move(amps));
        for (const auto &g : c.gates()) {
            apply_gate(s, g);
        }
        for (std::size_t r = 0; r < dim; ++r) {
            u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = s[r];
        }
    }
    return u;
}

double phase_aligned_distance(const Eigen::MatrixXcd &a,
                              const Eigen::MatrixXcd &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ArgumentError("matrix shapes differ");
    }
    const complex_t overlap = (b.adjoint() * a).trace();
    const complex_t phase =
        std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : complex_t{1.0};
    return (a - phase * b).cwiseAbs().maxCoeff();
}

bool equal_up_to_global_phase(const Eigen::MatrixXcd &a,
                              const Eigen::MatrixXcd &b, double tol) {
    return phase_aligned_distance(a, b) <= tol;
}

Eigen::MatrixXcd qubit_permutation_matrix(const std::vector<int> &perm) {
    const int n = static_cast<int>(perm.size());
    const std::size_t dim = std::size_t{1} << n;
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t y = 0;
        for (int q = 0; q < n; ++q) {
            if ((x >> q) & 1U) {
                y |= std::size_t{1} << perm[static_cast<std::size_t>(q)];
            }
        }
        p(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = 1.0;
    }
    return p;
}

} // namespace nmrsim
