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
#include "nmrsim/hamiltonian.hpp"
#include "nmrsim/statevector.hpp"
#include "nmrsim/trotter.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace nmrsim;

namespace {

constexpr double kB0 = 9.4;

double max_diff(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("rotating-frame Hamiltonian matches the Pauli-sum oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        const auto s = parse_spin_system(oracle::random_spin_text(rng, 1 + trial % 4, true));
        const auto h = build_rotating_hamiltonian(s, FieldConfig{kB0});
        const auto w = oracle::omegas(s, kB0);
        const auto got = offset_frequencies(s, FieldConfig{kB0});
        for (int k = 0; k < s.n_spins; ++k) {
            CHECK(got[k] == doctest::Approx(w[k]).epsilon(1e-14));
        }
        const auto hd = dense_hamiltonian(h);
        const auto ref = oracle::full_hamiltonian(s, kB0);
        CHECK(max_diff(hd, ref) <= 1e-9 * ref.cwiseAbs().maxCoeff());
        CHECK(h.coupling_terms.size() == s.nonzero_coupling_count());
    }
}

TEST_CASE("dense Hamiltonian refuses large systems") {
    PauliTermList h;
    h.n_spins = kDenseMaxSpins + 1;
    CHECK_THROWS_AS(dense_hamiltonian(h), CapabilityError);
}

TEST_CASE("exact propagator agrees with the matrix exponential") {
    std::mt19937_64 rng(3);
    const auto s = parse_spin_system(oracle::random_spin_text(rng, 3, false));
    const auto h = build_rotating_hamiltonian(s, FieldConfig{kB0});
    const ExactPropagator prop(h);
    const double t = 3.7e-4;
    CHECK(max_diff(prop.unitary(t), oracle::expm_herm(oracle::full_hamiltonian(s, kB0), t)) < 1e-10);
}

TEST_CASE("trotter step layout: prep, Z rotations, then coupling triples") {
    const auto s = parse_spin_system("N 3\nISOTOPES 1H 1H 1H\nSHIFT 0 1\nSHIFT 1 2\nSHIFT 2 3\n"
                                     "J 0 2 5\nJ 0 1 7\nJ 1 2 0\n");
    const auto h = build_rotating_hamiltonian(s, FieldConfig{kB0});
    const double t = 1e-3;
    const auto c = trotter_step(h, t);
    const auto &g = c.gates();
    REQUIRE(g.size() == 3 + 3 + 6);
    for (int q = 0; q < 3; ++q) {
        CHECK(g[q].kind == GateKind::PrepH);
        CHECK(g[3 + q].kind == GateKind::RZ);
    }
    CHECK(g[6].kind == GateKind::RXX);
    CHECK(g[6].qubits == std::array<int, 2>{0, 1});
    CHECK(g[6].angle() == doctest::Approx(std::numbers::pi * 7.0 * t));
    CHECK(g[7].kind == GateKind::RYY);
    CHECK(g[8].kind == GateKind::RZZ);
    CHECK(g[9].qubits == std::array<int, 2>{0, 2});
    CHECK(c.two_qubit_gate_count() == 3 * s.nonzero_coupling_count());
}

TEST_CASE("trotter step state equals the ordered product of term exponentials") {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 5; ++n) {
        const auto s = parse_spin_system(oracle::random_spin_text(rng, n, true));
        const auto h = build_rotating_hamiltonian(s, FieldConfig{kB0});
        const double t = 2.5e-4;
        const auto psi = run_circuit(trotter_step(h, t));
        const oracle::Vec ref = oracle::product_formula(s, kB0, t) * oracle::plus_state(n);
        double err = 0.0;
        for (Eigen::Index i = 0; i < ref.size(); ++i) {
            err = std::max(err, std::abs(psi.amplitudes()[i] - ref(i)));
        }
        CHECK(err < 1e-11);
    }
}

TEST_CASE("negative time gives the inverse evolution") {
    std::mt19937_64 rng(8);
    const auto s = parse_spin_system(oracle::random_spin_text(rng, 3, true));
    const auto h = build_rotating_hamiltonian(s, FieldConfig{kB0});
    Circuit both(3);
    both.append(trotter_evolution_gates(h, 4e-4));
    both.append(trotter_evolution_gates(h, -4e-4));
    const auto u = circuit_unitary(both);
    CHECK(max_diff(u, Eigen::MatrixXcd::Identity(8, 8)) < 1e-12);
}

TEST_CASE("measurement rotations map each axis onto Z") {
    std::mt19937_64 rng(21);
    const auto s = parse_spin_system(oracle::random_spin_text(rng, 3, false));
    const auto h = build_rotating_hamiltonian(s, FieldConfig{kB0});
    const double t = 6e-4;
    const std::vector<int> obs{0, 2};
    const auto m = transverse_magnetization(run_circuit(trotter_step(h, t)), obs);
    for (auto axis : {MagnetizationAxis::X, MagnetizationAxis::Y}) {
        const auto c = measurement_circuit(h, t, axis, obs);
        const auto p = marginal_probabilities(run_circuit(c), obs);
        double expect = 0.0;
        for (std::size_t x = 0; x < p.size(); ++x) {
            for (std::size_t k = 0; k < obs.size(); ++k) {
                expect += p[x] * (((x >> k) & 1U) ? -0.5 : 0.5);
            }
        }
        CHECK(expect == doctest::Approx(axis == MagnetizationAxis::X ? m.real() : m.imag()).epsilon(1e-12));
    }
}
