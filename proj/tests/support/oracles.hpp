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
// Reference implementations used only by tests. Nothing here calls the
// library's dense, kak or statevector code; basis index bit q is qubit q.
#pragma once

#include "nmrsim/spin_system.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Eigen::Matrix2cd pauli(char p) {
    Eigen::Matrix2cd m;
    switch (p) {
    case 'X':
        m << 0, 1, 1, 0;
        break;
    case 'Y':
        m << 0, cd(0, -1), cd(0, 1), 0;
        break;
    case 'Z':
        m << 1, 0, 0, -1;
        break;
    default:
        m.setIdentity();
    }
    return m;
}

/// Tensor product with factor q acting on bit q.
inline Mat embed(const std::vector<Eigen::Matrix2cd> &factors) {
    Mat out = Mat::Identity(1, 1);
    for (const auto &f : factors) {
        out = Eigen::kroneckerProduct(f, out).eval();
    }
    return out;
}

inline Mat pauli_on(int n, std::initializer_list<std::pair<int, char>> ops) {
    std::vector<Eigen::Matrix2cd> f(static_cast<std::size_t>(n), pauli('I'));
    for (auto [q, p] : ops) {
        f[static_cast<std::size_t>(q)] = pauli(p);
    }
    return embed(f);
}

inline Vec plus_state(int n) {
    const auto dim = Eigen::Index{1} << n;
    return Vec::Constant(dim, cd(std::pow(2.0, -0.5 * n), 0.0));
}

inline Mat expm_herm(const Mat &h, double t) {
    return (cd(0.0, -t) * h).exp();
}

/// Rotating-frame offsets from first principles.
inline std::vector<double> omegas(const nmrsim::SpinSystem &s, double b0) {
    std::vector<double> w;
    for (int k = 0; k < s.n_spins; ++k) {
        const double larmor = s.isotopes[k].gyromagnetic_ratio * b0 / (2.0 * std::numbers::pi);
        w.push_back(2.0 * std::numbers::pi * s.shifts_ppm[k] * 1e-6 * larmor);
    }
    return w;
}

/// Term matrices in product order: Z terms by spin, then couplings row-major.
inline std::vector<Mat> term_matrices(const nmrsim::SpinSystem &s, double b0) {
    const int n = s.n_spins;
    std::vector<Mat> terms;
    const auto w = omegas(s, b0);
    for (int k = 0; k < n; ++k) {
        terms.push_back(0.5 * w[k] * pauli_on(n, {{k, 'Z'}}));
    }
    for (const auto &[ij, j_hz] : s.couplings_hz) {
        if (j_hz == 0.0) {
            continue;
        }
        const auto [i, j] = ij;
        const double c = 2.0 * std::numbers::pi * j_hz;
        terms.push_back(0.25 * c *
                        (pauli_on(n, {{i, 'X'}, {j, 'X'}}) + pauli_on(n, {{i, 'Y'}, {j, 'Y'}}) +
                         pauli_on(n, {{i, 'Z'}, {j, 'Z'}})));
    }
    return terms;
}

inline Mat full_hamiltonian(const nmrsim::SpinSystem &s, double b0) {
    const auto dim = Eigen::Index{1} << s.n_spins;
    Mat h = Mat::Zero(dim, dim);
    for (const auto &t : term_matrices(s, b0)) {
        h += t;
    }
    return h;
}

/// prod_j exp(-i H_j t), first term applied first.
inline Mat product_formula(const nmrsim::SpinSystem &s, double b0, double t) {
    const auto dim = Eigen::Index{1} << s.n_spins;
    Mat u = Mat::Identity(dim, dim);
    for (const auto &h : term_matrices(s, b0)) {
        u = (expm_herm(h, t) * u).eval();
    }
    return u;
}

/// <M_X> + i <M_Y> with M = sum_j sigma_j / 2 over `observed`.
inline cd magnetization(const Vec &psi, int n, const std::vector<int> &observed) {
    cd m = 0.0;
    for (int q : observed) {
        const double x = (psi.adjoint() * pauli_on(n, {{q, 'X'}}) * psi)(0).real();
        const double y = (psi.adjoint() * pauli_on(n, {{q, 'Y'}}) * psi)(0).real();
        m += cd(0.5 * x, 0.5 * y);
    }
    return m;
}

inline const char *isotope_symbol(int k) {
    static const char *const names[] = {"1H", "13C", "19F", "31P", "15N"};
    return names[k % 5];
}

/// Random system in the spin file format; shifts inside each nucleus' usual
/// window, couplings up to 200 Hz, about half the pairs coupled.
inline std::string random_spin_text(std::mt19937_64 &rng, int n, bool hetero) {
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    std::uniform_real_distribution<double> coupling(-200.0, 200.0);
    std::uniform_int_distribution<int> iso(0, 4);
    std::bernoulli_distribution coupled(0.5);
    std::string text = "N " + std::to_string(n) + "\nISOTOPES";
    for (int k = 0; k < n; ++k) {
        text += std::string(" ") + (hetero ? isotope_symbol(iso(rng)) : "1H");
    }
    text += "\n";
    for (int k = 0; k < n; ++k) {
        text += "SHIFT " + std::to_string(k) + " " + std::to_string(shift(rng)) + "\n";
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (coupled(rng)) {
                text += "J " + std::to_string(i) + " " + std::to_string(j) + " " +
                        std::to_string(coupling(rng)) + "\n";
            }
        }
    }
    return text;
}

/// P with P|x> = |y>, bit q of x moved to bit perm[q].
inline Mat permutation(const std::vector<int> &perm) {
    const int n = static_cast<int>(perm.size());
    const auto dim = Eigen::Index{1} << n;
    Mat p = Mat::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
        Eigen::Index y = 0;
        for (int q = 0; q < n; ++q) {
            if ((x >> q) & 1) {
                y |= Eigen::Index{1} << perm[static_cast<std::size_t>(q)];
            }
        }
        p(y, x) = 1.0;
    }
    return p;
}

/// max |a - e^{i phi} b| with phi aligning the largest overlap.
inline double phase_distance(const Mat &a, const Mat &b) {
    const cd tr = (b.adjoint() * a).trace();
    const cd phase = std::abs(tr) > 0 ? tr / std::abs(tr) : cd(1.0);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

/// Naive DFT with the same sign convention as FFTW's forward transform.
inline std::vector<cd> dft(const std::vector<cd> &x) {
    const std::size_t n = x.size();
    std::vector<cd> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cd acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * j % n) / double(n));
        }
        out[k] = acc;
    }
    return out;
}

} // namespace oracle
