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
#include "nmrsim/errors.hpp"
#include "nmrsim/mitigation.hpp"
#include "nmrsim/noise.hpp"
#include "nmrsim/statevector.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace nmrsim;

namespace {

Circuit bell_pair_measured() {
    Circuit c(3);
    c.append(Gate::h(0));
    c.append(Gate::h(1));
    c.append(Gate::cz(0, 1));
    c.append(Gate::h(1));
    c.append(Gate::rz(2, 0.3));
    c.append(Gate::measure(0));
    c.append(Gate::measure(1));
    c.append(Gate::measure(2));
    return c;
}

std::vector<double> as_vector(const ShotCounts &c) {
    std::vector<double> p(std::size_t{1} << c.measured.size(), 0.0);
    for (const auto &[key, n] : c.counts) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < key.size(); ++k) {
            idx |= static_cast<std::size_t>(key[k] == '1') << k;
        }
        p[idx] = static_cast<double>(n) / static_cast<double>(c.n_shots);
    }
    return p;
}

} // namespace

TEST_CASE("device presets and validation") {
    const auto sc = NoiseModel::superconducting_defaults();
    CHECK(sc.p1 == doctest::Approx(2.07e-4));
    CHECK(sc.p2 == doctest::Approx(1.93e-3));
    CHECK(sc.p_ro == doctest::Approx(7.81e-3));
    const auto ion = NoiseModel::trapped_ion_defaults();
    CHECK(ion.p2 == doctest::Approx(7.66e-3));
    CHECK(ion.durations.two_qubit > sc.durations.two_qubit);

    NoiseModel bad;
    bad.p1 = 1.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("noise file directives and drift") {
    const auto nm = parse_noise_model("P1 1e-3\nP2 2e-2\nPRO 0.05\nT2IDLE inf\nDDSUPP 0.2\n"
                                      "DRIFT 0 1e-3 0\nQ 1 0.01 0.1 1e-4 5e-5\n");
    CHECK(nm.p2 == 2e-2);
    CHECK(std::isinf(nm.t2_idle));
    CHECK(nm.p_ro_of(1) == doctest::Approx(0.1));
    CHECK(nm.p_ro_of(0) == doctest::Approx(0.05));
    CHECK(nm.t2_of(1) == doctest::Approx(5e-5));
    CHECK(nm.at_run(10).p2 == doctest::Approx(3e-2));
    CHECK(nm.at_run(5000).p2 == 1.0);
    CHECK_THROWS_AS(parse_noise_model("P9 1\n"), Error);
}

TEST_CASE("dephasing probability limits") {
    CHECK(dephasing_probability(0.0, 1e-4) == 0.0);
    CHECK(dephasing_probability(1e-3, std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(dephasing_probability(1e9, 1e-4) == doctest::Approx(0.5));
    const double small = dephasing_probability(1e-9, 1e-4);
    CHECK(small == doctest::Approx(0.5 * 1e-9 / 1e-4).epsilon(1e-3));
}

TEST_CASE("noiseless trajectories reproduce ideal sampling") {
    const auto c = bell_pair_measured();
    const auto ideal = sample_shots(run_circuit(c), c.measured_qubits(), 4000, 12);
    const auto noisy = noisy_run(c, NoiseModel{}, 4000, 12);
    CHECK(ideal.counts == noisy.counts);
}

TEST_CASE("readout-only noise matches the exact flip channel") {
    const auto c = bell_pair_measured();
    NoiseModel nm;
    nm.p_ro = 0.08;
    const auto p_exact = apply_readout_noise(marginal_probabilities(run_circuit(c), c.measured_qubits()),
                                             c.measured_qubits(), nm);
    const double n = 400000;
    const auto got = as_vector(noisy_run(c, nm, 400000, 3));
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(std::abs(got[i] - p_exact[i]) <= 5.0 * std::sqrt(p_exact[i] * (1 - p_exact[i]) / n) + 1e-9);
    }
    // Odd parity on the Bell pair needs exactly one flip there and none on
    // qubit 2, which is always |0>.
    CHECK(p_exact[1] + p_exact[2] == doctest::Approx(2 * 0.08 * 0.92 * 0.92));
}

TEST_CASE("gate noise lowers fidelity and is seed-deterministic") {
    const auto c = bell_pair_measured();
    NoiseModel nm;
    nm.p2 = 0.2;
    const auto a = noisy_run(c, nm, 20000, 5);
    CHECK(a.counts == noisy_run(c, nm, 20000, 5).counts);
    const auto p = as_vector(a);
    // The ideal Bell pair never yields odd parity on bits 0 and 1.
    const double odd = p[1] + p[2] + p[5] + p[6];
    CHECK(odd > 0.05);
    CHECK(odd < 0.2);
}

TEST_CASE("analytic confusion matrices are column stochastic") {
    NoiseModel nm;
    nm.p_ro = 0.03;
    const std::vector<int> measured{0, 1, 2, 3, 4};
    const auto cm = analytic_confusion(nm, measured, contiguous_groups(measured, 2));
    REQUIRE(cm.groups.size() == 3);
    CHECK(cm.matrices[0].rows() == 4);
    CHECK(cm.matrices[2].rows() == 2);
    for (const auto &m : cm.matrices) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            CHECK(m.col(j).sum() == doctest::Approx(1.0));
        }
    }
    CHECK_THROWS_AS(contiguous_groups(measured, 5), ArgumentError);
}

TEST_CASE("mitigation inverts the readout channel exactly") {
    const auto c = bell_pair_measured();
    NoiseModel nm;
    nm.p_ro = 0.06;
    const auto ideal = marginal_probabilities(run_circuit(c), c.measured_qubits());
    const auto noisy = apply_readout_noise(ideal, c.measured_qubits(), nm);
    for (std::size_t g : {1, 3}) {
        const auto cm = analytic_confusion(nm, c.measured_qubits(), contiguous_groups(c.measured_qubits(), g));
        const auto back = mitigate_distribution(noisy, c.measured_qubits(), cm);
        for (std::size_t i = 0; i < ideal.size(); ++i) {
            CHECK(back[i] == doctest::Approx(ideal[i]).scale(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("calibrated confusion approaches the analytic one") {
    NoiseModel nm;
    nm.p_ro = 0.05;
    const std::vector<int> measured{0, 1};
    const auto groups = contiguous_groups(measured, 2);
    const auto cal = calibrate_confusion(nm, measured, groups, 100000, 9);
    const auto ana = analytic_confusion(nm, measured, groups);
    CHECK((cal.matrices[0] - ana.matrices[0]).cwiseAbs().maxCoeff() < 5e-3);
}

TEST_CASE("mitigated counts keep their total and rescaling yields a distribution") {
    const auto c = bell_pair_measured();
    NoiseModel nm;
    nm.p_ro = 0.05;
    const auto counts = noisy_run(c, nm, 5000, 77);
    const auto cm = analytic_confusion(nm, c.measured_qubits(), contiguous_groups(c.measured_qubits(), 1));
    const auto q = mitigate_counts(counts, cm);
    CHECK(q.total() == doctest::Approx(1.0));
    const auto r = rescale_low_confidence(q, 1e-3);
    CHECK(r.total() == doctest::Approx(1.0));
    for (const auto &[k, v] : r.probs) {
        CHECK(v >= 0.0);
    }
    QuasiDistribution neg;
    neg.measured = {0};
    neg.probs = {{"0", -0.2}, {"1", -0.1}};
    CHECK_THROWS_AS(rescale_low_confidence(neg, 1e-3), MitigationError);
}

TEST_CASE("magnetization from a distribution") {
    QuasiDistribution q;
    q.measured = {0, 1};
    q.probs = {{"00", 0.5}, {"01", 0.25}, {"11", 0.25}};
    // <sum Z/2> = 0.5 * 1 + 0.25 * 0 + 0.25 * (-1)
    CHECK(magnetization_from_distribution(q, {0, 1}) == doctest::Approx(0.25));
}

TEST_CASE("randomized time ordering is a seeded permutation") {
    const auto a = randomized_time_ordering(100, 3);
    CHECK(a == randomized_time_ordering(100, 3));
    CHECK(a != randomized_time_ordering(100, 4));
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> iota(100);
    std::iota(iota.begin(), iota.end(), 0);
    CHECK(sorted == iota);
    const auto pts = sample_time_points(256, 20, 1);
    CHECK(pts.size() == 20);
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
}

TEST_CASE("inverse-law fit and plateau selection") {
    const auto grid = ShotSweepConfig::default_grid();
    CHECK(grid.front() == 100);
    CHECK(grid.back() == 2000);
    CHECK(grid.size() == 20);
    std::vector<double> m;
    for (auto n : grid) {
        m.push_back(0.01 + 5.0 / static_cast<double>(n));
    }
    double a = 0, b = 0;
    fit_inverse_law(grid, m, a, b);
    CHECK(a == doctest::Approx(0.01));
    CHECK(b == doctest::Approx(5.0));
    // fit(2000) = 0.0125; within 10 %: 0.01 + 5/n <= 0.01375 -> n >= 1333.3
    CHECK(select_plateau(grid, a, b, 0.1) == 1400);
    CHECK(select_plateau(grid, 0.0, 0.0, 0.1) == 100);
}
