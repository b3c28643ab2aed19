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
#include "nmrsim/transpiler.hpp"

#include "nmrsim/errors.hpp"
#include "nmrsim/rng.hpp"
#include "nmrsim/schedule.hpp"
#include "nmrsim/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <numeric>

namespace nmrsim {

namespace {

using std::numbers::pi;
constexpr double kAngleTol = kKakSnapTolerance;

Mat2 mat_h() {
    Mat2 m;
    const double r = 1.0 / std::numbers::sqrt2;
    m << r, r, r, -r;
    return m;
}
Mat2 mat_s() {
    Mat2 m;
    m << 1.0, 0.0, 0.0, complex_t{0.0, 1.0};
    return m;
}
Mat2 mat_z() {
    Mat2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
Mat2 mat_rz(double t) { return single_qubit_matrix(Gate::rz(0, t)); }

void lower_pauli_pair(const Gate &g, NativeBasis basis, std::vector<Gate> &out) {
    const int a = g.qubits[0];
    const int b = g.qubits[1];
    // RPP(theta + 2 pi) = -RPP(theta)
    const double theta = std::remainder(g.angle(), 2.0 * pi);
    if (std::abs(theta) < kAngleTol) {
        return;
    }
    if (basis == NativeBasis::MS && g.kind == GateKind::RXX &&
        std::abs(theta - kMsAngle) < kAngleTol) {
        out.push_back(Gate::rxx(a, b, kMsAngle));
        return;
    }
    // W Z W^dagger = P
    Mat2 w = Mat2::Identity();
    if (g.kind == GateKind::RXX) {
        w = mat_h();
    } else if (g.kind == GateKind::RYY) {
        w = mat_s() * mat_h();
    }
    const Mat2 id = Mat2::Identity();
    NativeEmitter em(a, b, basis);
    em.local(w.adjoint(), w.adjoint());
    if (std::abs(std::abs(theta) - pi) < kAngleTol) {
        em.local(mat_z(), mat_z()); // RZZ(pi) = -i ZZ
    } else if (std::abs(std::abs(theta) - 0.5 * pi) < kAngleTol) {
        // RZZ(+-pi/2) = CZ (RZ(+-pi/2) (x) RZ(+-pi/2)) up to phase
        em.local(mat_rz(theta), mat_rz(theta));
        em.entangle();
    } else {
        em.local(id, mat_h());
        em.entangle();
        em.local(id, mat_h());
        em.local(id, mat_rz(theta));
        em.local(id, mat_h());
        em.entangle();
        em.local(id, mat_h());
    }
    em.local(w, w);
    const auto gates = em.finish();
    out.insert(out.end(), gates.begin(), gates.end());
}

void lower_gate(const Gate &g, NativeBasis basis, std::vector<Gate> &out) {
    switch (g.kind) {
    case GateKind::Measure:
    case GateKind::SU2:
        out.push_back(g);
        return;
    case GateKind::PrepH:
    case GateKind::RZ:
    case GateKind::PauliX:
        if (g.dd) {
            out.push_back(g);
        } else {
            out.push_back(su2_from_matrix(g.qubits[0], single_qubit_matrix(g)));
        }
        return;
    case GateKind::RXX:
    case GateKind::RYY:
    case GateKind::RZZ:
        lower_pauli_pair(g, basis, out);
        return;
    case GateKind::CZ: {
        if (basis == NativeBasis::CZ) {
            out.push_back(g);
            return;
        }
        NativeEmitter em(g.qubits[0], g.qubits[1], basis);
        em.entangle();
        const auto gates = em.finish();
        out.insert(out.end(), gates.begin(), gates.end());
        return;
    }
    case GateKind::SWAP: {
        const Mat2 id = Mat2::Identity();
        NativeEmitter em(g.qubits[0], g.qubits[1], basis);
        // CN(a->b) CN(b->a) CN(a->b)
        for (int k = 0; k < 3; ++k) {
            const bool rev = k == 1;
            em.local(rev ? mat_h() : id, rev ? id : mat_h());
            em.entangle();
            em.local(rev ? mat_h() : id, rev ? id : mat_h());
        }
        const auto gates = em.finish();
        out.insert(out.end(), gates.begin(), gates.end());
        return;
    }
    }
}

std::size_t native_cost(const Gate &g, NativeBasis basis) {
    if (!is_two_qubit(g.kind)) {
        return 0;
    }
    if (g.kind == GateKind::SWAP) {
        return 3;
    }
    if (is_native(g, basis)) {
        return 1;
    }
    std::vector<Gate> tmp;
    lower_gate(g, basis, tmp);
    return static_cast<std::size_t>(std::count_if(
        tmp.begin(), tmp.end(), [](const Gate &x) { return is_two_qubit(x.kind); }));
}

} // namespace

bool is_native(const Gate &g, NativeBasis basis) {
    switch (g.kind) {
    case GateKind::SU2:
    case GateKind::Measure:
        return true;
    case GateKind::PauliX:
        return g.dd;
    case GateKind::CZ:
        return basis == NativeBasis::CZ;
    case GateKind::RXX:
        return basis == NativeBasis::MS &&
               std::abs(g.angle() - kMsAngle) < kAngleTol;
    default:
        return false;
    }
}

Circuit lower_to_native(const Circuit &c, NativeBasis basis) {
    std::vector<Gate> out;
    out.reserve(c.gates().size() * 3);
    for (const auto &g : c.gates()) {
        lower_gate(g, basis, out);
    }
    Circuit r(c.width(), c.time_point());
    r.append(out);
    r.initial_layout = c.initial_layout;
    r.final_layout = c.final_layout;
    return r;
}

// ---------------------------------------------------------------------------
// Layout

namespace {

struct LayoutProblem {
    int n_logical = 0;
    std::vector<std::pair<int, int>> pairs; ///< distinct interacting pairs
    std::vector<long long> mult;
    std::vector<std::vector<std::pair<int, long long>>> nbrs;
    std::vector<double> one_q; ///< single-qubit gate count per logical
    std::vector<bool> measured;
    double avg_edge_error = 0.0;
};

LayoutProblem make_problem(const Circuit &c, const CouplingMap &map) {
    LayoutProblem p;
    p.n_logical = c.width();
    const auto n = static_cast<std::size_t>(p.n_logical);
    p.nbrs.resize(n);
    p.one_q.assign(n, 0.0);
    p.measured.assign(n, false);
    std::map<std::pair<int, int>, long long> m;
    for (const auto &g : c.gates()) {
        if (is_two_qubit(g.kind)) {
            ++m[{std::min(g.qubits[0], g.qubits[1]),
                 std::max(g.qubits[0], g.qubits[1])}];
        } else if (g.kind == GateKind::Measure) {
            p.measured[static_cast<std::size_t>(g.qubits[0])] = true;
        } else {
            p.one_q[static_cast<std::size_t>(g.qubits[0])] += 1.0;
        }
    }
    for (const auto &[pr, k] : m) {
        p.pairs.push_back(pr);
        p.mult.push_back(k);
        p.nbrs[static_cast<std::size_t>(pr.first)].emplace_back(pr.second, k);
        p.nbrs[static_cast<std::size_t>(pr.second)].emplace_back(pr.first, k);
    }
    double sum = 0.0;
    for (const auto &[a, b] : map.edges()) {
        sum += map.edge_error(a, b);
    }
    p.avg_edge_error =
        map.edges().empty() ? 0.0 : sum / static_cast<double>(map.edges().size());
    return p;
}

constexpr long long kUnreachableHops = 1'000'000;

LayoutCost pair_cost(const CouplingMap &map, const LayoutProblem &p, int pa,
                     int pb, long long mult) {
    const int d = map.distance(pa, pb);
    LayoutCost c;
    if (d < 0) {
        c.hops = mult * kUnreachableHops;
        return c;
    }
    c.hops = mult * (d - 1);
    c.error = static_cast<double>(mult) *
              (d == 1 ? map.edge_error(pa, pb) : d * p.avg_edge_error);
    return c;
}

double qubit_cost(const CouplingMap &map, const LayoutProblem &p, int l,
                  int phys) {
    const auto &q = map.qubits[static_cast<std::size_t>(phys)];
    const auto ul = static_cast<std::size_t>(l);
    return p.one_q[ul] * q.err1q + (p.measured[ul] ? q.err_ro : 0.0);
}

LayoutCost total_cost(const CouplingMap &map, const LayoutProblem &p,
                      const std::vector<int> &layout) {
    LayoutCost c;
    for (std::size_t k = 0; k < p.pairs.size(); ++k) {
        const auto pc =
            pair_cost(map, p, layout[static_cast<std::size_t>(p.pairs[k].first)],
                      layout[static_cast<std::size_t>(p.pairs[k].second)], p.mult[k]);
        c.hops += pc.hops;
        c.error += pc.error;
    }
    for (int l = 0; l < p.n_logical; ++l) {
        c.error += qubit_cost(map, p, l, layout[static_cast<std::size_t>(l)]);
    }
    return c;
}

// Cost of the terms that involve logical l at physical `phys`.
LayoutCost local_cost(const CouplingMap &map, const LayoutProblem &p,
                      const std::vector<int> &layout, int l, int phys,
                      int skip = -1) {
    LayoutCost c;
    for (const auto &[m, k] : p.nbrs[static_cast<std::size_t>(l)]) {
        if (m == skip || layout[static_cast<std::size_t>(m)] < 0) {
            continue;
        }
        const auto pc = pair_cost(map, p, phys, layout[static_cast<std::size_t>(m)], k);
        c.hops += pc.hops;
        c.error += pc.error;
    }
    c.error += qubit_cost(map, p, l, phys);
    return c;
}

std::vector<int> greedy_layout(const CouplingMap &map, const LayoutProblem &p,
                               RngStream *rng) {
    const int n = p.n_logical;
    const int np = map.n_physical();
    std::vector<long long> weight(static_cast<std::size_t>(n), 0);
    for (int l = 0; l < n; ++l) {
        for (const auto &[m, k] : p.nbrs[static_cast<std::size_t>(l)]) {
            weight[static_cast<std::size_t>(l)] += k;
        }
    }
    // Placement order: breadth-first over the interaction graph from the
    // heaviest (or a random) logical qubit, heavier neighbours first.
    std::vector<int> order;
    std::vector<bool> queued(static_cast<std::size_t>(n), false);
    auto seed_order = [&](int start) {
        std::deque<int> dq{start};
        queued[static_cast<std::size_t>(start)] = true;
        while (!dq.empty()) {
            const int u = dq.front();
            dq.pop_front();
            order.push_back(u);
            auto nb = p.nbrs[static_cast<std::size_t>(u)];
            std::stable_sort(nb.begin(), nb.end(), [](auto &x, auto &y) {
                return x.second > y.second;
            });
            for (const auto &[m, k] : nb) {
                if (!queued[static_cast<std::size_t>(m)]) {
                    queued[static_cast<std::size_t>(m)] = true;
                    dq.push_back(m);
                }
            }
        }
    };
    std::vector<int> by_weight(static_cast<std::size_t>(n));
    std::iota(by_weight.begin(), by_weight.end(), 0);
    std::stable_sort(by_weight.begin(), by_weight.end(), [&](int x, int y) {
        return weight[static_cast<std::size_t>(x)] > weight[static_cast<std::size_t>(y)];
    });
    if (rng != nullptr && n > 0) {
        seed_order(static_cast<int>(rng->below(static_cast<std::uint64_t>(n))));
    }
    for (int l : by_weight) {
        if (!queued[static_cast<std::size_t>(l)]) {
            seed_order(l);
        }
    }

    std::vector<int> layout(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(np), false);
    bool first = true;
    for (int l : order) {
        int best = -1;
        LayoutCost best_cost;
        if (first && rng != nullptr) {
            best = static_cast<int>(rng->below(static_cast<std::uint64_t>(np)));
        } else {
            for (int ph = 0; ph < np; ++ph) {
                if (used[static_cast<std::size_t>(ph)]) {
                    continue;
                }
                LayoutCost c = local_cost(map, p, layout, l, ph);
                // Prefer well-connected qubits for hubs.
                c.error -= 1e-9 * static_cast<double>(map.neighbors(ph).size());
                if (best < 0 || c < best_cost) {
                    best = ph;
                    best_cost = c;
                }
            }
        }
        first = false;
        layout[static_cast<std::size_t>(l)] = best;
        used[static_cast<std::size_t>(best)] = true;
    }
    return layout;
}

void improve_layout(const CouplingMap &map, const LayoutProblem &p,
                    std::vector<int> &layout) {
    const int n = p.n_logical;
    const int np = map.n_physical();
    std::vector<int> owner(static_cast<std::size_t>(np), -1);
    for (int l = 0; l < n; ++l) {
        owner[static_cast<std::size_t>(layout[static_cast<std::size_t>(l)])] = l;
    }
    for (int pass = 0; pass < 50; ++pass) {
        bool improved = false;
        for (int l = 0; l < n; ++l) {
            const int from = layout[static_cast<std::size_t>(l)];
            for (int to = 0; to < np; ++to) {
                if (to == from) {
                    continue;
                }
                const int other = owner[static_cast<std::size_t>(to)];
                LayoutCost before = local_cost(map, p, layout, l, from);
                LayoutCost after;
                if (other >= 0) {
                    const LayoutCost ob = local_cost(map, p, layout, other, to, l);
                    before.hops += ob.hops;
                    before.error += ob.error;
                    layout[static_cast<std::size_t>(l)] = to;
                    layout[static_cast<std::size_t>(other)] = from;
                    after = local_cost(map, p, layout, l, to);
                    const LayoutCost oa = local_cost(map, p, layout, other, from, l);
                    after.hops += oa.hops;
                    after.error += oa.error;
                } else {
                    layout[static_cast<std::size_t>(l)] = to;
                    after = local_cost(map, p, layout, l, to);
                }
                if (after < before &&
                    (after.hops < before.hops || before.error - after.error > 1e-12)) {
                    owner[static_cast<std::size_t>(to)] = l;
                    owner[static_cast<std::size_t>(from)] = other;
                    improved = true;
                    break;
                }
                layout[static_cast<std::size_t>(l)] = from;
                if (other >= 0) {
                    layout[static_cast<std::size_t>(other)] = to;
                }
            }
        }
        if (!improved) {
            return;
        }
    }
}

} // namespace

LayoutCost layout_cost(const Circuit &c, const CouplingMap &map,
                       const std::vector<int> &layout) {
    if (layout.size() != static_cast<std::size_t>(c.width())) {
        throw ArgumentError("layout size does not match circuit width");
    }
    return total_cost(map, make_problem(c, map), layout);
}

std::vector<int> select_layout(const Circuit &c, const CouplingMap &map,
                               const LayoutOptions &opt) {
    if (c.width() > map.n_physical()) {
        throw CapabilityError("circuit needs " + std::to_string(c.width()) +
                              " qubits but the coupling map has " +
                              std::to_string(map.n_physical()));
    }
    const LayoutProblem p = make_problem(c, map);
    std::vector<int> best = greedy_layout(map, p, nullptr);
    improve_layout(map, p, best);
    LayoutCost best_cost = total_cost(map, p, best);
    for (int r = 0; r < opt.restarts; ++r) {
        RngStream rng(derive_seed(opt.seed, static_cast<std::uint64_t>(RngPurpose::Layout)),
                      static_cast<std::uint64_t>(r));
        std::vector<int> cand = greedy_layout(map, p, &rng);
        improve_layout(map, p, cand);
        const LayoutCost cc = total_cost(map, p, cand);
        if (cc < best_cost) {
            best = std::move(cand);
            best_cost = cc;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Routing

Circuit route(const Circuit &c, const std::vector<int> &layout,
              const CouplingMap &map, std::size_t *swap_count) {
    const int np = map.n_physical();
    if (layout.size() != static_cast<std::size_t>(c.width())) {
        throw ArgumentError("layout size does not match circuit width");
    }
    std::vector<int> pos = layout;
    std::vector<int> owner(static_cast<std::size_t>(np), -1);
    for (std::size_t l = 0; l < pos.size(); ++l) {
        if (pos[l] < 0 || pos[l] >= np || owner[static_cast<std::size_t>(pos[l])] >= 0) {
            throw ArgumentError("layout is not an injective assignment");
        }
        owner[static_cast<std::size_t>(pos[l])] = static_cast<int>(l);
    }
    std::vector<std::size_t> two_q;
    const auto &gates = c.gates();
    for (std::size_t i = 0; i < gates.size(); ++i) {
        if (is_two_qubit(gates[i].kind)) {
            two_q.push_back(i);
        }
    }
    constexpr std::size_t kLookahead = 20;
    constexpr double kDecay = 0.7;

    Circuit out(np, c.time_point());
    out.initial_layout = layout;
    std::size_t swaps = 0;
    std::size_t next2 = 0;
    auto phys = [&](int l) { return pos[static_cast<std::size_t>(l)]; };

    for (std::size_t i = 0; i < gates.size(); ++i) {
        Gate g = gates[i];
        if (!is_two_qubit(g.kind)) {
            g.qubits[0] = phys(g.qubits[0]);
            out.append(g);
            continue;
        }
        ++next2; // two_q[next2] is now the first gate after this one
        const int a = g.qubits[0];
        const int b = g.qubits[1];
        while (true) {
            const int d = map.distance(phys(a), phys(b));
            if (d < 0) {
                throw RoutingError("qubits " + std::to_string(phys(a)) + " and " +
                                   std::to_string(phys(b)) +
                                   " lie in disconnected parts of the map");
            }
            if (d <= 1) {
                break;
            }
            int best_u = -1, best_v = -1;
            double best_score = 0.0;
            for (int side = 0; side < 2; ++side) {
                const int pu = side == 0 ? phys(a) : phys(b);
                const int target = side == 0 ? phys(b) : phys(a);
                for (int nb : map.neighbors(pu)) {
                    if (map.distance(nb, target) != d - 1) {
                        continue;
                    }
                    // Score the lookahead window with pu <-> nb exchanged.
                    auto moved = [&](int p) { return p == pu ? nb : (p == nb ? pu : p); };
                    double score = 0.0;
                    double wgt = 1.0;
                    for (std::size_t k = next2;
                         k < two_q.size() && k < next2 + kLookahead; ++k) {
                        const Gate &h = gates[two_q[k]];
                        score += wgt * map.distance(moved(phys(h.qubits[0])),
                                                    moved(phys(h.qubits[1])));
                        wgt *= kDecay;
                    }
                    const int eu = std::min(pu, nb), ev = std::max(pu, nb);
                    const bool better =
                        best_u < 0 || score < best_score - 1e-12 ||
                        (std::abs(score - best_score) <= 1e-12 &&
                         std::make_pair(eu, ev) < std::make_pair(best_u, best_v));
                    if (better) {
                        best_u = eu;
                        best_v = ev;
                        best_score = score;
                    }
                }
            }
            out.append(Gate::swap(best_u, best_v));
            ++swaps;
            const int lu = owner[static_cast<std::size_t>(best_u)];
            const int lv = owner[static_cast<std::size_t>(best_v)];
            owner[static_cast<std::size_t>(best_u)] = lv;
            owner[static_cast<std::size_t>(best_v)] = lu;
            if (lu >= 0) {
                pos[static_cast<std::size_t>(lu)] = best_v;
            }
            if (lv >= 0) {
                pos[static_cast<std::size_t>(lv)] = best_u;
            }
        }
        g.qubits = {phys(a), phys(b)};
        out.append(g);
    }
    out.final_layout = pos;
    if (swap_count != nullptr) {
        *swap_count = swaps;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Consolidation

namespace {

bool proportional_to_identity(const Mat2 &m) {
    return std::abs(m(0, 1)) < 1e-12 && std::abs(m(1, 0)) < 1e-12 &&
           std::abs(m(0, 0) - m(1, 1)) < 1e-12;
}

void emit_fused_1q(int q, const std::vector<Gate> &run, std::vector<Gate> &out) {
    if (run.empty()) {
        return;
    }
    if (run.size() == 1 && run[0].kind == GateKind::SU2) {
        if (!proportional_to_identity(single_qubit_matrix(run[0]))) {
            out.push_back(run[0]);
        }
        return;
    }
    Mat2 m = Mat2::Identity();
    for (const auto &g : run) {
        m = single_qubit_matrix(g) * m;
    }
    if (!proportional_to_identity(m)) {
        out.push_back(su2_from_matrix(q, m));
    }
}

// Fuses single-qubit runs inside a gate list that touches at most qubits
// a and b, keeping two-qubit gates in place.
void emit_with_fused_locals(const std::vector<Gate> &gates, int a, int b,
                            std::vector<Gate> &out) {
    std::vector<Gate> ra, rb;
    for (const auto &g : gates) {
        if (is_two_qubit(g.kind)) {
            emit_fused_1q(a, ra, out);
            emit_fused_1q(b, rb, out);
            ra.clear();
            rb.clear();
            out.push_back(g);
        } else {
            (g.qubits[0] == a ? ra : rb).push_back(g);
        }
    }
    emit_fused_1q(a, ra, out);
    emit_fused_1q(b, rb, out);
}

struct Block {
    int a = -1;
    int b = -1;
    std::vector<Gate> gates;
};

void emit_block(const Block &blk, NativeBasis basis, std::vector<Gate> &out) {
    std::size_t orig = 0;
    bool non_native = false;
    for (const auto &g : blk.gates) {
        orig += native_cost(g, basis);
        if (is_two_qubit(g.kind) && !is_native(g, basis)) {
            non_native = true;
        }
    }
    const Mat4 u = gates_local_unitary(blk.gates, blk.a, blk.b);
    auto synth = synthesize_two_qubit(u, blk.a, blk.b, basis);
    if (synth) {
        const auto n2 = static_cast<std::size_t>(std::count_if(
            synth->begin(), synth->end(),
            [](const Gate &g) { return is_two_qubit(g.kind); }));
        if (non_native || n2 < orig) {
            out.insert(out.end(), synth->begin(), synth->end());
            return;
        }
    }
    if (non_native) {
        std::vector<Gate> lowered;
        for (const auto &g : blk.gates) {
            lower_gate(g, basis, lowered);
        }
        emit_with_fused_locals(lowered, blk.a, blk.b, out);
        return;
    }
    emit_with_fused_locals(blk.gates, blk.a, blk.b, out);
}

std::vector<Gate> consolidate_once(const Circuit &c, NativeBasis basis) {
    const auto w = static_cast<std::size_t>(c.width());
    std::vector<Gate> out;
    out.reserve(c.gates().size());
    std::vector<std::vector<Gate>> pending(w);
    std::vector<int> block_of(w, -1);
    std::vector<Block> blocks;
    std::vector<Gate> measures;

    auto close_block = [&](int id) {
        if (id < 0) {
            return;
        }
        Block &blk = blocks[static_cast<std::size_t>(id)];
        emit_block(blk, basis, out);
        block_of[static_cast<std::size_t>(blk.a)] = -1;
        block_of[static_cast<std::size_t>(blk.b)] = -1;
        blk.gates.clear();
    };
    auto flush_pending = [&](int q) {
        emit_fused_1q(q, pending[static_cast<std::size_t>(q)], out);
        pending[static_cast<std::size_t>(q)].clear();
    };

    for (const Gate &g : c.gates()) {
        // Input is measure-last, so deferring every Measure keeps order.
        if (g.kind == GateKind::Measure) {
            measures.push_back(g);
            continue;
        }
        if (!is_two_qubit(g.kind)) {
            const int id = block_of[static_cast<std::size_t>(g.qubits[0])];
            if (id >= 0) {
                blocks[static_cast<std::size_t>(id)].gates.push_back(g);
            } else {
                pending[static_cast<std::size_t>(g.qubits[0])].push_back(g);
            }
            continue;
        }
        const int a = g.qubits[0];
        const int b = g.qubits[1];
        const int ia = block_of[static_cast<std::size_t>(a)];
        const int ib = block_of[static_cast<std::size_t>(b)];
        if (ia >= 0 && ia == ib) {
            blocks[static_cast<std::size_t>(ia)].gates.push_back(g);
            continue;
        }
        close_block(ia);
        close_block(ib);
        Block blk{a, b, {}};
        for (int q : {a, b}) {
            auto &p = pending[static_cast<std::size_t>(q)];
            blk.gates.insert(blk.gates.end(), p.begin(), p.end());
            p.clear();
        }
        blk.gates.push_back(g);
        blocks.push_back(std::move(blk));
        const int id = static_cast<int>(blocks.size()) - 1;
        block_of[static_cast<std::size_t>(a)] = id;
        block_of[static_cast<std::size_t>(b)] = id;
    }
    // Remaining blocks are on disjoint qubits, so their order is free.
    for (std::size_t q = 0; q < w; ++q) {
        close_block(block_of[q]);
    }
    for (std::size_t q = 0; q < w; ++q) {
        flush_pending(static_cast<int>(q));
    }
    out.insert(out.end(), measures.begin(), measures.end());
    return out;
}

} // namespace

Circuit consolidate_and_resynthesize(const Circuit &c, NativeBasis basis) {
    Circuit cur = c;
    for (int iter = 0; iter < 10; ++iter) {
        Circuit next(c.width(), c.time_point());
        next.append(consolidate_once(cur, basis));
        next.initial_layout = c.initial_layout;
        next.final_layout = c.final_layout;
        const bool changed =
            next.two_qubit_gate_count() < cur.two_qubit_gate_count() ||
            next.gates().size() < cur.gates().size();
        bool non_native = false;
        for (const auto &g : cur.gates()) {
            non_native = non_native || !is_native(g, basis);
        }
        cur = std::move(next);
        if (!changed && !non_native) {
            break;
        }
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Dynamical decoupling

Circuit insert_dynamical_decoupling(const Circuit &c, const CouplingMap &map,
                                    std::size_t *inserted) {
    const double min_window = 2.0 * map.durations.one_qubit * (1.0 - 1e-9);
    const Schedule s = schedule_asap(c, map.durations, min_window);
    std::map<std::size_t, std::vector<int>> at;
    for (const auto &w : s.idle) {
        if (!w.dd_protected) {
            at[w.next_gate].push_back(w.qubit);
        }
    }
    std::size_t count = 0;
    auto emit_pairs = [&](std::size_t key, std::vector<Gate> &out) {
        auto it = at.find(key);
        if (it == at.end()) {
            return;
        }
        for (int q : it->second) {
            Gate x = Gate::x(q);
            x.dd = true;
            out.push_back(x);
            out.push_back(x);
            count += 2;
        }
    };
    std::vector<Gate> out;
    const auto &gates = c.gates();
    bool tail_done = false;
    for (std::size_t i = 0; i < gates.size(); ++i) {
        if (gates[i].kind == GateKind::Measure && !tail_done) {
            emit_pairs(kEndOfCircuit, out);
            tail_done = true;
        }
        emit_pairs(i, out);
        out.push_back(gates[i]);
    }
    if (!tail_done) {
        emit_pairs(kEndOfCircuit, out);
    }
    Circuit r(c.width(), c.time_point());
    r.append(out);
    r.initial_layout = c.initial_layout;
    r.final_layout = c.final_layout;
    if (inserted != nullptr) {
        *inserted = count;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Reporting and the full pipeline

Circuit compact(const Circuit &c, std::vector<int> *kept) {
    std::vector<bool> used(static_cast<std::size_t>(c.width()), false);
    for (const auto &g : c.gates()) {
        for (int k = 0; k < g.arity(); ++k) {
            used[static_cast<std::size_t>(g.qubits[static_cast<std::size_t>(k)])] = true;
        }
    }
    for (int p : c.initial_layout) {
        used[static_cast<std::size_t>(p)] = true;
    }
    for (int p : c.final_layout) {
        used[static_cast<std::size_t>(p)] = true;
    }
    std::vector<int> relabel(used.size(), -1);
    std::vector<int> keep;
    for (std::size_t q = 0; q < used.size(); ++q) {
        if (used[q]) {
            relabel[q] = static_cast<int>(keep.size());
            keep.push_back(static_cast<int>(q));
        }
    }
    Circuit r(static_cast<int>(keep.size()), c.time_point());
    for (Gate g : c.gates()) {
        for (int k = 0; k < g.arity(); ++k) {
            auto &q = g.qubits[static_cast<std::size_t>(k)];
            q = relabel[static_cast<std::size_t>(q)];
        }
        r.append(g);
    }
    for (int p : c.initial_layout) {
        r.initial_layout.push_back(relabel[static_cast<std::size_t>(p)]);
    }
    for (int p : c.final_layout) {
        r.final_layout.push_back(relabel[static_cast<std::size_t>(p)]);
    }
    if (kept != nullptr) {
        *kept = std::move(keep);
    }
    return r;
}

TranspileReport make_report(const Circuit &c, std::size_t swaps, std::size_t dd) {
    TranspileReport r;
    r.width = c.width();
    r.two_qubit_depth = logical_two_qubit_depth(c);
    r.one_qubit_gate_count = c.one_qubit_gate_count();
    r.two_qubit_gate_count = c.two_qubit_gate_count();
    r.swap_count = swaps;
    r.dd_gates_inserted = dd;
    return r;
}

TargetKind parse_target(const std::string &name) {
    if (name == "logical") {
        return TargetKind::Logical;
    }
    if (name == "heavy-hex") {
        return TargetKind::HeavyHex;
    }
    if (name == "all-to-all") {
        return TargetKind::AllToAll;
    }
    throw ArgumentError("unknown target '" + name +
                        "' (expected logical, heavy-hex or all-to-all)");
}

std::string target_name(TargetKind t) {
    switch (t) {
    case TargetKind::Logical:
        return "logical";
    case TargetKind::HeavyHex:
        return "heavy-hex";
    case TargetKind::AllToAll:
        return "all-to-all";
    }
    return "?";
}

TranspileResult transpile(const Circuit &c, const CouplingMap *map,
                          const TranspileOptions &opt) {
    TranspileResult res;
    res.logical = make_report(c);
    if (opt.target == TargetKind::Logical) {
        res.circuit = c;
        res.routed = res.final = res.logical;
        res.layout.resize(static_cast<std::size_t>(c.width()));
        std::iota(res.layout.begin(), res.layout.end(), 0);
        res.kept = res.layout;
        return res;
    }
    if (map == nullptr) {
        throw ArgumentError("target " + target_name(opt.target) +
                            " requires a coupling map");
    }
    const Circuit lowered = lower_to_native(c, opt.basis);
    res.layout = opt.layout.empty()
                     ? select_layout(lowered, *map, LayoutOptions{opt.seed, 4})
                     : opt.layout;
    std::size_t swaps = 0;
    const Circuit routed = route(lowered, res.layout, *map, &swaps);
    res.routed = make_report(compact(routed), swaps);
    Circuit cons = consolidate_and_resynthesize(routed, opt.basis);
    std::size_t dd = 0;
    if (opt.dynamical_decoupling) {
        cons = insert_dynamical_decoupling(cons, *map, &dd);
    }
    res.circuit = compact(cons, &res.kept);
    res.final = make_report(res.circuit, swaps, dd);
    return res;
}

DepthStatistics depth_statistics(const std::vector<int> &depths) {
    if (depths.empty()) {
        throw ArgumentError("depth statistics need at least one circuit");
    }
    DepthStatistics s;
    const double n = static_cast<double>(depths.size());
    s.mean = std::accumulate(depths.begin(), depths.end(), 0.0) / n;
    double var = 0.0;
    for (int d : depths) {
        var += (d - s.mean) * (d - s.mean);
    }
    s.stddev = std::sqrt(var / n);
    s.min = *std::min_element(depths.begin(), depths.end());
    s.max = *std::max_element(depths.begin(), depths.end());
    std::map<int, std::size_t> h;
    for (int d : depths) {
        ++h[d];
    }
    s.histogram.assign(h.begin(), h.end());
    return s;
}

DepthStatistics depth_statistics(const std::vector<Circuit> &circuits) {
    std::vector<int> d;
    d.reserve(circuits.size());
    for (const auto &c : circuits) {
        d.push_back(logical_two_qubit_depth(c));
    }
    return depth_statistics(d);
}

} // namespace nmrsim
