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
#include "nmrsim/circuit.hpp"
#include "nmrsim/dense.hpp"
#include "nmrsim/errors.hpp"
#include "nmrsim/statevector.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace nmrsim;

namespace {

oracle::Mat rotation(int n, int a, int b, char p, double theta) {
    return oracle::expm_herm(oracle::pauli_on(n, {{a, p}, {b, p}}), 0.5 * theta);
}

oracle::Vec as_vec(const Statevector &s) {
    oracle::Vec v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = s.amplitudes()[i];
    }
    return v;
}

} // namespace

TEST_CASE("Pauli rotations follow exp(-i theta/2 PP)") {
    const int n = 3;
    const double th = 0.731;
    for (auto [kind, p] : {std::pair{GateKind::RXX, 'X'}, {GateKind::RYY, 'Y'}, {GateKind::RZZ, 'Z'}}) {
        Circuit c(n);
        c.append(Gate{kind, {2, 0}, {th, 0, 0}});
        CHECK(oracle::phase_distance(circuit_unitary(c), rotation(n, 2, 0, p, th)) < 1e-12);
        // The global phase is part of the gate definition.
        CHECK((circuit_unitary(c) - rotation(n, 2, 0, p, th)).cwiseAbs().maxCoeff() < 1e-12);
    }
    Circuit rz(n);
    rz.append(Gate::rz(1, th));
    CHECK((circuit_unitary(rz) - oracle::expm_herm(oracle::pauli_on(n, {{1, 'Z'}}), 0.5 * th))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("random circuits agree with dense oracle products, fused or not") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ang(-3.2, 3.2);
    const int n = 5;
    for (int trial = 0; trial < 10; ++trial) {
        Circuit c(n);
        oracle::Mat u = oracle::Mat::Identity(1 << n, 1 << n);
        for (int k = 0; k < 40; ++k) {
            const int a = static_cast<int>(rng() % n);
            int b = static_cast<int>(rng() % (n - 1));
            b += b >= a;
            const double th = ang(rng);
            switch (rng() % 5) {
            case 0:
                c.append(Gate::rz(a, th));
                u = oracle::expm_herm(oracle::pauli_on(n, {{a, 'Z'}}), 0.5 * th) * u;
                break;
            case 1: {
                c.append(Gate::h(a));
                const oracle::Mat hx = oracle::pauli_on(n, {{a, 'X'}});
                const oracle::Mat hz = oracle::pauli_on(n, {{a, 'Z'}});
                u = ((hx + hz) / std::sqrt(2.0)) * u;
                break;
            }
            case 2:
                c.append(Gate::rxx(a, b, th));
                u = rotation(n, a, b, 'X', th) * u;
                break;
            case 3:
                c.append(Gate::ryy(a, b, th));
                u = rotation(n, a, b, 'Y', th) * u;
                break;
            default:
                c.append(Gate::cz(a, b));
                u = (0.5 * (oracle::Mat::Identity(1 << n, 1 << n) + oracle::pauli_on(n, {{a, 'Z'}}) +
                            oracle::pauli_on(n, {{b, 'Z'}}) - oracle::pauli_on(n, {{a, 'Z'}, {b, 'Z'}}))) *
                    u;
            }
        }
        const oracle::Vec ref = u.col(0);
        CHECK((as_vec(run_circuit(c, RunOptions{26, true})) - ref).cwiseAbs().maxCoeff() < 1e-11);
        CHECK((as_vec(run_circuit(c, RunOptions{26, false})) - ref).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("width guard raises a capability error") {
    CHECK_THROWS_AS(check_width(27, 26), CapabilityError);
    CHECK_NOTHROW(check_width(26, 26));
    Circuit c(4);
    c.append(Gate::h(0));
    CHECK_THROWS_AS(run_circuit(c, RunOptions{3, true}), CapabilityError);
}

TEST_CASE("circuit invariants and text round trip") {
    Circuit c(3, 1.5e-3);
    c.append(Gate::h(0));
    c.append(Gate::rxx(0, 2, 0.25));
    c.append(Gate::su2(1, 0.1, 0.2, 0.3));
    c.append(Gate::measure(0));
    CHECK_THROWS_AS(c.append(Gate::h(1)), ArgumentError);
    CHECK_THROWS_AS(c.append(Gate::measure(0)), ArgumentError);
    CHECK_THROWS_AS(Circuit(2).append(Gate::rxx(1, 1, 0.1)), ArgumentError);
    CHECK_THROWS_AS(Circuit(2).append(Gate::rz(2, 0.1)), ArgumentError);

    const auto back = parse_circuit(serialize_circuit(c));
    CHECK(back.gates() == c.gates());
    CHECK(back.time_point() == c.time_point());
    CHECK(back.measured_qubits() == std::vector<int>{0});
}

TEST_CASE("sampled counts are deterministic and follow the Born rule") {
    Circuit c(2);
    c.append(Gate::h(0));
    c.append(Gate::su2(1, 2.0 * std::acos(std::sqrt(0.8)), 0.0, 0.0));
    const auto psi = run_circuit(c);
    const auto p = marginal_probabilities(psi, {0, 1});
    CHECK(p[0] == doctest::Approx(0.4));
    CHECK(p[2] == doctest::Approx(0.1));

    const auto a = sample_shots(psi, {0, 1}, 200000, 7);
    const auto b = sample_shots(psi, {0, 1}, 200000, 7);
    CHECK(a.counts == b.counts);
    CHECK(a.n_shots == 200000);
    // Key character k is qubit measured[k]; "01" means q0 = 0, q1 = 1.
    CHECK(static_cast<double>(a.counts.at("01")) / 2e5 == doctest::Approx(0.1).epsilon(0.05));
    CHECK(static_cast<double>(a.counts.at("00")) / 2e5 == doctest::Approx(0.4).epsilon(0.02));
    CHECK(sample_shots(psi, {0, 1}, 1000, 8).counts != sample_shots(psi, {0, 1}, 1000, 7).counts);
}

TEST_CASE("first shots do not depend on the total shot count") {
    Circuit c(3);
    for (int q = 0; q < 3; ++q) {
        c.append(Gate::h(q));
    }
    const auto psi = run_circuit(c);
    const auto small = sample_shots(psi, {0, 1, 2}, 50, 42);
    const auto big = sample_shots(psi, {0, 1, 2}, 51, 42);
    std::uint64_t extra = 0;
    for (const auto &[key, n] : big.counts) {
        const auto it = small.counts.find(key);
        const std::uint64_t m = it == small.counts.end() ? 0 : it->second;
        CHECK(m <= n);
        extra += n - m;
    }
    CHECK(extra == 1);
}
