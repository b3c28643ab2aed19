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
#include "nmrsim/statevector.hpp"

#include "nmrsim/errors.hpp"
#include "nmrsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace nmrsim {

Statevector::Statevector(int width) : width_(width) {
    if (width < 0 || width > 40) {
        throw ArgumentError("statevector width out of range");
    }
    amps_.assign(std::size_t{1} << width, complex_t{0.0, 0.0});
    amps_[0] = 1.0;
}

Statevector::Statevector(int width, std::vector<complex_t> amplitudes)
    : width_(width), amps_(std::move(amplitudes)) {
    if (width < 0 || width > 40 || amps_.size() != (std::size_t{1} << width)) {
        throw ArgumentError("amplitude count must equal 2^width");
    }
}

Statevector Statevector::plus_state(int width) {
    Statevector s(width);
    const double a = std::pow(2.0, -0.5 * width);
    for (auto &x : s.amps_) {
        x = a;
    }
    return s;
}

double Statevector::norm() const {
    double acc = 0.0;
    for (const auto &x : amps_) {
        acc += std::norm(x);
    }
    return std::sqrt(acc);
}

void Statevector::normalize() {
    const double n = norm();
    if (n == 0.0) {
        throw NumericalError("cannot normalize a zero statevector");
    }
    for (auto &x : amps_) {
        x /= n;
    }
}

namespace {

void check_qubit(const Statevector &s, int q) {
    if (q < 0 || q >= s.width()) {
        throw ArgumentError("qubit " + std::to_string(q) +
                            " outside statevector width " +
                            std::to_string(s.width()));
    }
}

bool is_diagonal(const Mat2 &m) { return m(0, 1) == 0.0 && m(1, 0) == 0.0; }

bool is_diagonal(const Mat4 &m) {
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (r != c && m(r, c) != 0.0) {
                return false;
            }
        }
    }
    return true;
}

// Nonzeros only couple {00, 11} and {01, 10}, as for RXX, RYY and their
// products with diagonal gates of the same parity structure.
bool is_parity_block(const Mat4 &m) {
    return m(0, 1) == 0.0 && m(0, 2) == 0.0 && m(1, 0) == 0.0 &&
           m(1, 3) == 0.0 && m(2, 0) == 0.0 && m(2, 3) == 0.0 &&
           m(3, 1) == 0.0 && m(3, 2) == 0.0;
}

// Visits every base index with bits `lo` and `hi` clear (lo < hi).
template <class F>
void for_each_pair_base(std::size_t n, int lo, int hi, F &&fn) {
    const std::size_t ls = std::size_t{1} << lo;
    const std::size_t hs = std::size_t{1} << hi;
    for (std::size_t x = 0; x < n; x += 2 * hs) {
        for (std::size_t y = x; y < x + hs; y += 2 * ls) {
            for (std::size_t i = y; i < y + ls; ++i) {
                fn(i);
            }
        }
    }
}

void kernel_1q(complex_t *a, std::size_t n, int q, const Mat2 &m) {
    const std::size_t s = std::size_t{1} << q;
    if (is_diagonal(m)) {
        const complex_t d0 = m(0, 0);
        const complex_t d1 = m(1, 1);
        for (std::size_t base = 0; base < n; base += 2 * s) {
            for (std::size_t i = base; i < base + s; ++i) {
                a[i] *= d0;
                a[i + s] *= d1;
            }
        }
        return;
    }
    const complex_t m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0),
                    m11 = m(1, 1);
    for (std::size_t base = 0; base < n; base += 2 * s) {
        for (std::size_t i = base; i < base + s; ++i) {
            const complex_t x = a[i];
            const complex_t y = a[i + s];
            a[i] = m00 * x + m01 * y;
            a[i + s] = m10 * x + m11 * y;
        }
    }
}

void kernel_2q(complex_t *a, std::size_t n, int qa, int qb, const Mat4 &m) {
    const std::size_t ma = std::size_t{1} << qa;
    const std::size_t mb = std::size_t{1} << qb;
    const int lo = std::min(qa, qb);
    const int hi = std::max(qa, qb);
    if (is_diagonal(m)) {
        const complex_t d0 = m(0, 0), d1 = m(1, 1), d2 = m(2, 2),
                        d3 = m(3, 3);
        for_each_pair_base(n, lo, hi, [&](std::size_t i) {
            a[i] *= d0;
            a[i | mb] *= d1;
            a[i | ma] *= d2;
            a[i | ma | mb] *= d3;
        });
        return;
    }
    if (is_parity_block(m)) {
        const complex_t e00 = m(0, 0), e03 = m(0, 3), e30 = m(3, 0),
                        e33 = m(3, 3);
        const complex_t o11 = m(1, 1), o12 = m(1, 2), o21 = m(2, 1),
                        o22 = m(2, 2);
        for_each_pair_base(n, lo, hi, [&](std::size_t i) {
            const std::size_t i1 = i | mb;
            const std::size_t i2 = i | ma;
            const std::size_t i3 = i | ma | mb;
            const complex_t v0 = a[i], v3 = a[i3];
            a[i] = e00 * v0 + e03 * v3;
            a[i3] = e30 * v0 + e33 * v3;
            const complex_t v1 = a[i1], v2 = a[i2];
            a[i1] = o11 * v1 + o12 * v2;
            a[i2] = o21 * v1 + o22 * v2;
        });
        return;
    }
    complex_t u[4][4];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            u[r][c] = m(r, c);
        }
    }
    for_each_pair_base(n, lo, hi, [&](std::size_t i) {
        const std::size_t idx[4] = {i, i | mb, i | ma, i | ma | mb};
        const complex_t v[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
        for (int r = 0; r < 4; ++r) {
            a[idx[r]] =
                u[r][0] * v[0] + u[r][1] * v[1] + u[r][2] * v[2] + u[r][3] * v[3];
        }
    });
}

Statevector product_state(const std::vector<std::optional<Mat2>> &ops) {
    const int w = static_cast<int>(ops.size());
    std::vector<complex_t> amps{complex_t{1.0, 0.0}};
    amps.reserve(std::size_t{1} << w);
    for (int q = 0; q < w; ++q) {
        complex_t v0 = 1.0, v1 = 0.0;
        if (ops[static_cast<std::size_t>(q)]) {
            v0 = (*ops[static_cast<std::size_t>(q)])(0, 0);
            v1 = (*ops[static_cast<std::size_t>(q)])(1, 0);
        }
        const std::size_t half = amps.size();
        amps.resize(2 * half);
        for (std::size_t i = 0; i < half; ++i) {
            amps[i + half] = amps[i] * v1;
            amps[i] *= v0;
        }
    }
    return Statevector(w, std::move(amps));
}

Statevector run_fused(const Circuit &c, const Statevector *initial) {
    const int w = c.width();
    std::vector<std::optional<Mat2>> pending(static_cast<std::size_t>(w));
    std::optional<Statevector> state;
    if (initial != nullptr) {
        state = *initial;
    }
    int ba = -1;
    int bb = -1;
    Mat4 block;

    auto take = [&](int q) -> Mat2 {
        auto &p = pending[static_cast<std::size_t>(q)];
        Mat2 m = p ? *p : Mat2::Identity();
        p.reset();
        return m;
    };
    auto flush_block = [&] {
        if (ba >= 0) {
            apply_matrix_2q(*state, ba, bb, block);
            ba = bb = -1;
        }
    };
    // Starting from |0...0>, every single-qubit gate before the first
    // two-qubit gate folds into a product state.
    auto materialize = [&] {
        if (!state) {
            state = product_state(pending);
            for (auto &p : pending) {
                p.reset();
            }
        }
    };

    for (const Gate &g : c.gates()) {
        if (g.kind == GateKind::Measure) {
            continue;
        }
        if (is_single_qubit(g.kind)) {
            const int q = g.qubits[0];
            const Mat2 m = single_qubit_matrix(g);
            if (q == ba) {
                block = kron2(m, Mat2::Identity()) * block;
            } else if (q == bb) {
                block = kron2(Mat2::Identity(), m) * block;
            } else {
                auto &p = pending[static_cast<std::size_t>(q)];
                p = p ? Mat2(m * *p) : m;
            }
            continue;
        }
        materialize();
        const int a = g.qubits[0];
        const int b = g.qubits[1];
        const Mat4 gm = two_qubit_matrix(g);
        if (a == ba && b == bb) {
            block = gm * block;
        } else if (a == bb && b == ba) {
            block = swap_qubit_roles(gm) * block;
        } else {
            flush_block();
            ba = a;
            bb = b;
            block = gm * kron2(take(a), take(b));
        }
    }
    materialize();
    flush_block();
    for (int q = 0; q < w; ++q) {
        if (pending[static_cast<std::size_t>(q)]) {
            apply_matrix_1q(*state, q, *pending[static_cast<std::size_t>(q)]);
        }
    }
    return std::move(*state);
}

} // namespace

void apply_matrix_1q(Statevector &state, int q, const Mat2 &m) {
    check_qubit(state, q);
    kernel_1q(state.amplitudes().data(), state.size(), q, m);
}

void apply_matrix_2q(Statevector &state, int a, int b, const Mat4 &m) {
    check_qubit(state, a);
    check_qubit(state, b);
    if (a == b) {
        throw ArgumentError("two-qubit gate needs distinct qubits");
    }
    kernel_2q(state.amplitudes().data(), state.size(), a, b, m);
}

void apply_gate(Statevector &state, const Gate &g) {
    complex_t *amps = state.amplitudes().data();
    const std::size_t n = state.size();
    switch (g.kind) {
    case GateKind::Measure:
        check_qubit(state, g.qubits[0]);
        return;
    case GateKind::PauliX: {
        check_qubit(state, g.qubits[0]);
        const std::size_t s = std::size_t{1} << g.qubits[0];
        for (std::size_t base = 0; base < n; base += 2 * s) {
            for (std::size_t i = base; i < base + s; ++i) {
                std::swap(amps[i], amps[i + s]);
            }
        }
        return;
    }
    case GateKind::CZ: {
        check_qubit(state, g.qubits[0]);
        check_qubit(state, g.qubits[1]);
        const std::size_t mask =
            (std::size_t{1} << g.qubits[0]) | (std::size_t{1} << g.qubits[1]);
        for (std::size_t i = 0; i < n; ++i) {
            if ((i & mask) == mask) {
                amps[i] = -amps[i];
            }
        }
        return;
    }
    case GateKind::SWAP: {
        check_qubit(state, g.qubits[0]);
        check_qubit(state, g.qubits[1]);
        if (g.qubits[0] == g.qubits[1]) {
            throw ArgumentError("two-qubit gate needs distinct qubits");
        }
        const std::size_t ma = std::size_t{1} << g.qubits[0];
        const std::size_t mb = std::size_t{1} << g.qubits[1];
        for_each_pair_base(n, std::min(g.qubits[0], g.qubits[1]),
                           std::max(g.qubits[0], g.qubits[1]),
                           [&](std::size_t i) { std::swap(amps[i | ma], amps[i | mb]); });
        return;
    }
    default:
        break;
    }
    if (is_single_qubit(g.kind)) {
        apply_matrix_1q(state, g.qubits[0], single_qubit_matrix(g));
    } else {
        apply_matrix_2q(state, g.qubits[0], g.qubits[1], two_qubit_matrix(g));
    }
}

void check_width(int width, int max_width) {
    if (width > max_width) {
        throw CapabilityError(
            "circuit width " + std::to_string(width) +
            " exceeds the statevector limit of " + std::to_string(max_width) +
            " qubits; systems of this size (such as the 34-spin phosphorous "
            "cluster) are supported only by the depth-stats command");
    }
}

Statevector run_circuit(const Circuit &c, const RunOptions &opt) {
    check_width(c.width(), opt.max_width);
    if (opt.fuse) {
        return run_fused(c, nullptr);
    }
    Statevector s(c.width());
    for (const auto &g : c.gates()) {
        apply_gate(s, g);
    }
    return s;
}

Statevector run_circuit(const Circuit &c, const Statevector &initial,
                        const RunOptions &opt) {
    check_width(c.width(), opt.max_width);
    if (initial.width() != c.width()) {
        throw ArgumentError("initial state width does not match circuit");
    }
    if (opt.fuse) {
        return run_fused(c, &initial);
    }
    Statevector s = initial;
    for (const auto &g : c.gates()) {
        apply_gate(s, g);
    }
    return s;
}

complex_t transverse_magnetization(const Statevector &state,
                                   const std::vector<int> &observed) {
    if (observed.empty()) {
        throw ArgumentError("observed qubit set is empty");
    }
    const complex_t *a = state.amplitudes().data();
    const std::size_t n = state.size();
    complex_t total{0.0, 0.0};
    for (int q : observed) {
        check_qubit(state, q);
        const std::size_t s = std::size_t{1} << q;
        // <X> + i<Y> = 2 sum conj(a_{..0..}) a_{..1..}; spin operators halve it
        complex_t acc{0.0, 0.0};
        for (std::size_t base = 0; base < n; base += 2 * s) {
            for (std::size_t i = base; i < base + s; ++i) {
                acc += std::conj(a[i]) * a[i + s];
            }
        }
        total += acc;
    }
    return total;
}

double expectation_magnetization(const Statevector &state,
                                 const std::vector<int> &observed,
                                 MagnetizationAxis axis) {
    const complex_t m = transverse_magnetization(state, observed);
    return axis == MagnetizationAxis::X ? m.real() : m.imag();
}

std::vector<double> marginal_probabilities(const Statevector &state,
                                           const std::vector<int> &measured) {
    for (int q : measured) {
        check_qubit(state, q);
    }
    if (measured.size() > 30) {
        throw CapabilityError("at most 30 measured qubits are supported");
    }
    std::vector<double> p(std::size_t{1} << measured.size(), 0.0);
    const complex_t *a = state.amplitudes().data();
    for (std::size_t i = 0; i < state.size(); ++i) {
        std::size_t out = 0;
        for (std::size_t k = 0; k < measured.size(); ++k) {
            out |= ((i >> measured[k]) & 1U) << k;
        }
        p[out] += std::norm(a[i]);
    }
    return p;
}

std::string outcome_bitstring(std::uint64_t outcome, std::size_t n_bits) {
    std::string s(n_bits, '0');
    for (std::size_t k = 0; k < n_bits; ++k) {
        if ((outcome >> k) & 1U) {
            s[k] = '1';
        }
    }
    return s;
}

std::vector<double> cumulative(const std::vector<double> &p) {
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        cdf[i] = acc;
    }
    return cdf;
}

std::uint64_t sample_outcome(const std::vector<double> &cdf, double u) {
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.end()) {
        --it;
    }
    // upper_bound never lands on a zero-probability outcome
    return static_cast<std::uint64_t>(it - cdf.begin());
}

ShotCounts sample_shots(const Statevector &state,
                        const std::vector<int> &measured, std::uint64_t n_shots,
                        std::uint64_t seed) {
    if (n_shots == 0) {
        throw ArgumentError("n_shots must be at least 1");
    }
    const auto cdf = cumulative(marginal_probabilities(state, measured));
    std::vector<std::uint64_t> hist(cdf.size(), 0);
    const std::uint64_t stream_seed =
        derive_seed(seed, static_cast<std::uint64_t>(RngPurpose::Sampling));
    for (std::uint64_t s = 0; s < n_shots; ++s) {
        RngStream rng(stream_seed, s);
        ++hist[sample_outcome(cdf, rng.uniform())];
    }
    ShotCounts out;
    out.measured = measured;
    out.n_shots = n_shots;
    for (std::size_t k = 0; k < hist.size(); ++k) {
        if (hist[k] != 0) {
            out.counts.emplace(outcome_bitstring(k, measured.size()), hist[k]);
        }
    }
    return out;
}

double magnetization_from_counts(const ShotCounts &counts,
                                 const std::vector<int> &observed,
                                 bool axis_already_rotated) {
    if (!axis_already_rotated) {
        throw ArgumentError(
            "counts must come from a circuit that includes the measurement "
            "rotation for the requested axis");
    }
    if (counts.n_shots == 0) {
        throw ArgumentError("counts contain zero shots");
    }
    if (observed.empty()) {
        throw ArgumentError("observed qubit set is empty");
    }
    std::vector<std::size_t> pos;
    for (int q : observed) {
        auto it = std::find(counts.measured.begin(), counts.measured.end(), q);
        if (it == counts.measured.end()) {
            throw ArgumentError("observed qubit " + std::to_string(q) +
                                " was not measured");
        }
        pos.push_back(static_cast<std::size_t>(it - counts.measured.begin()));
    }
    double acc = 0.0;
    for (const auto &[bits, n] : counts.counts) {
        for (std::size_t p : pos) {
            acc += bits[p] == '0' ? static_cast<double>(n)
                                  : -static_cast<double>(n);
        }
    }
    return acc / (2.0 * static_cast<double>(counts.n_shots));
}

} // namespace nmrsim
