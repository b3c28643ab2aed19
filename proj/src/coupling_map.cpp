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
#include "nmrsim/coupling_map.hpp"

#include "nmrsim/errors.hpp"
#include "nmrsim/rng.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace nmrsim {

CouplingMap::CouplingMap(int n_physical) : n_(n_physical) {
    if (n_physical < 0) {
        throw ArgumentError("qubit count must be nonnegative");
    }
    qubits.resize(static_cast<std::size_t>(n_));
    adj_.resize(static_cast<std::size_t>(n_));
}

void CouplingMap::check(int q) const {
    if (q < 0 || q >= n_) {
        throw ValidationError("physical qubit " + std::to_string(q) +
                              " outside map of " + std::to_string(n_));
    }
}

void CouplingMap::add_edge(int a, int b, double err2q) {
    check(a);
    check(b);
    if (a == b) {
        throw ValidationError("self-loop edge on qubit " + std::to_string(a));
    }
    const std::pair<int, int> e{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    const auto pos = static_cast<std::size_t>(it - edges_.begin());
    if (it != edges_.end() && *it == e) {
        edge_err_[pos] = err2q;
        return;
    }
    edges_.insert(it, e);
    edge_err_.insert(edge_err_.begin() + static_cast<std::ptrdiff_t>(pos),
                     err2q);
    auto add_adj = [](std::vector<int> &v, int x) {
        v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    };
    add_adj(adj_[static_cast<std::size_t>(a)], b);
    add_adj(adj_[static_cast<std::size_t>(b)], a);
    finalized_ = false;
}

void CouplingMap::finalize() {
    auto prob = [](double p, const char *what) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError(std::string(what) + " must lie in [0, 1]");
        }
    };
    for (double e : edge_err_) {
        prob(e, "two-qubit error");
    }
    for (const auto &q : qubits) {
        prob(q.err1q, "one-qubit error");
        prob(q.err_ro, "readout error");
        if (!(q.t1 > 0.0) || !(q.t2 > 0.0)) {
            throw ValidationError("coherence times must be positive");
        }
    }
    if (!(durations.one_qubit > 0.0) || !(durations.two_qubit > 0.0) ||
        !(durations.readout > 0.0)) {
        throw ValidationError("gate durations must be positive");
    }
    const auto n = static_cast<std::size_t>(n_);
    dist_.assign(n * n, -1);
    std::deque<int> queue;
    for (std::size_t s = 0; s < n; ++s) {
        int *row = &dist_[s * n];
        row[s] = 0;
        queue.assign(1, static_cast<int>(s));
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : adj_[static_cast<std::size_t>(u)]) {
                if (row[v] < 0) {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    finalized_ = true;
}

const std::vector<int> &CouplingMap::neighbors(int q) const {
    check(q);
    return adj_[static_cast<std::size_t>(q)];
}

bool CouplingMap::connected(int a, int b) const {
    check(a);
    check(b);
    const auto &v = adj_[static_cast<std::size_t>(a)];
    return std::binary_search(v.begin(), v.end(), b);
}

double CouplingMap::edge_error(int a, int b) const {
    const std::pair<int, int> e{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) {
        throw ArgumentError("no edge between " + std::to_string(a) + " and " +
                            std::to_string(b));
    }
    return edge_err_[static_cast<std::size_t>(it - edges_.begin())];
}

int CouplingMap::distance(int a, int b) const {
    if (!finalized_) {
        throw ArgumentError("coupling map used before finalize()");
    }
    check(a);
    check(b);
    return dist_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
                 static_cast<std::size_t>(b)];
}

bool CouplingMap::is_all_to_all() const {
    const auto n = static_cast<std::size_t>(n_);
    return edges_.size() == n * (n - (n > 0 ? 1 : 0)) / 2;
}

CouplingMap parse_coupling_map(std::string_view src) {
    CouplingMap map;
    bool have_header = false;
    std::vector<bool> q_seen;
    text::for_each_line(src, [&](int line, std::string_view content) {
        const auto tok = text::split_ws(content);
        const auto &key = tok[0];
        if (!have_header) {
            if (key != "QUBITS" || tok.size() != 2) {
                throw ParseError("expected 'QUBITS <n>' header", line);
            }
            const auto n = text::require_int(tok[1], line, "qubit count");
            if (n < 1 || n > 100000) {
                throw ParseError("qubit count out of range", line);
            }
            map = CouplingMap(static_cast<int>(n));
            q_seen.assign(static_cast<std::size_t>(n), false);
            have_header = true;
            return;
        }
        auto qubit = [&](std::string_view t) {
            const auto q = text::require_int(t, line, "qubit index");
            if (q < 0 || q >= map.n_physical()) {
                throw ValidationError("line " + std::to_string(line) +
                                      ": qubit index out of range");
            }
            return static_cast<int>(q);
        };
        if (key == "EDGE") {
            if (tok.size() != 4) {
                throw ParseError("expected 'EDGE <i> <j> <err2q>'", line);
            }
            const int a = qubit(tok[1]);
            const int b = qubit(tok[2]);
            if (a == b) {
                throw ValidationError("line " + std::to_string(line) +
                                      ": self-loop edge");
            }
            map.add_edge(a, b, text::require_double(tok[3], line, "err2q"));
        } else if (key == "Q") {
            if (tok.size() != 6) {
                throw ParseError("expected 'Q <i> <err1q> <err_ro> <t1> <t2>'",
                                 line);
            }
            const int q = qubit(tok[1]);
            if (q_seen[static_cast<std::size_t>(q)]) {
                throw ParseError("duplicate Q line for qubit " +
                                     std::to_string(q),
                                 line);
            }
            q_seen[static_cast<std::size_t>(q)] = true;
            auto &p = map.qubits[static_cast<std::size_t>(q)];
            p.err1q = text::require_double(tok[2], line, "err1q");
            p.err_ro = text::require_double(tok[3], line, "err_ro");
            p.t1 = text::require_double(tok[4], line, "t1");
            p.t2 = text::require_double(tok[5], line, "t2");
        } else if (key == "DUR") {
            if (tok.size() != 4) {
                throw ParseError("expected 'DUR <t1q> <t2q> <tro>'", line);
            }
            map.durations.one_qubit = text::require_double(tok[1], line, "t1q");
            map.durations.two_qubit = text::require_double(tok[2], line, "t2q");
            map.durations.readout = text::require_double(tok[3], line, "tro");
        } else if (key == "LABEL") {
            map.label = tok.size() > 1 ? std::string(tok[1]) : "";
        } else {
            throw ParseError("unknown directive '" + std::string(key) + "'",
                             line);
        }
    });
    if (!have_header) {
        throw ParseError("missing 'QUBITS <n>' header");
    }
    map.finalize();
    return map;
}

CouplingMap load_coupling_map(const std::filesystem::path &path) {
    CouplingMap m = parse_coupling_map(text::read_file(path));
    if (m.label.empty()) {
        m.label = path.stem().string();
    }
    return m;
}

std::string format_coupling_map(const CouplingMap &map) {
    std::ostringstream os;
    os << "QUBITS " << map.n_physical() << '\n';
    if (!map.label.empty()) {
        os << "LABEL " << map.label << '\n';
    }
    os << "DUR " << text::fmt_double(map.durations.one_qubit) << ' '
       << text::fmt_double(map.durations.two_qubit) << ' '
       << text::fmt_double(map.durations.readout) << '\n';
    for (int q = 0; q < map.n_physical(); ++q) {
        const auto &p = map.qubits[static_cast<std::size_t>(q)];
        os << "Q " << q << ' ' << text::fmt_double(p.err1q) << ' '
           << text::fmt_double(p.err_ro) << ' ' << text::fmt_double(p.t1) << ' '
           << text::fmt_double(p.t2) << '\n';
    }
    for (const auto &[a, b] : map.edges()) {
        os << "EDGE " << a << ' ' << b << ' '
           << text::fmt_double(map.edge_error(a, b)) << '\n';
    }
    return os.str();
}

namespace {
// Multiplicative jitter in [0.75, 1.25), fixed per (kind, index).
double jitter(std::uint64_t kind, std::uint64_t index) {
    RngStream rng(derive_seed(0x4845585ull, kind), index);
    return 0.75 + 0.5 * rng.uniform();
}
} // namespace

CouplingMap heavy_hex_map(double err1q, double err2q, double err_ro, double t1,
                          double t2) {
    constexpr int kRows = 8;
    constexpr int kCols = 16;
    constexpr int kBridges = 4;
    constexpr int kTotal = kRows * kCols + (kRows - 1) * kBridges;
    CouplingMap map(kTotal);
    map.label = "heavy_hex_156";
    auto row_qubit = [&](int r, int c) { return r * (kCols + kBridges) + c; };
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c + 1 < kCols; ++c) {
            edges.emplace_back(row_qubit(r, c), row_qubit(r, c + 1));
        }
        if (r + 1 == kRows) {
            continue;
        }
        const int first = r % 2 == 0 ? 3 : 1;
        for (int k = 0; k < kBridges; ++k) {
            const int col = first + 4 * k;
            const int bridge = r * (kCols + kBridges) + kCols + k;
            edges.emplace_back(row_qubit(r, col), bridge);
            edges.emplace_back(bridge, row_qubit(r + 1, col));
        }
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        map.add_edge(edges[e].first, edges[e].second, err2q * jitter(1, e));
    }
    for (int q = 0; q < kTotal; ++q) {
        auto &p = map.qubits[static_cast<std::size_t>(q)];
        const auto uq = static_cast<std::uint64_t>(q);
        p.err1q = err1q * jitter(2, uq);
        p.err_ro = err_ro * jitter(3, uq);
        p.t1 = t1 * jitter(4, uq);
        p.t2 = std::min(t2 * jitter(5, uq), 2.0 * p.t1);
    }
    map.durations = {32e-9, 68e-9, 2.6e-6};
    map.finalize();
    return map;
}

CouplingMap all_to_all_map(int n, double err1q, double err2q, double err_ro,
                           double t1, double t2, GateDurations durations) {
    CouplingMap map(n);
    map.label = "all_to_all_" + std::to_string(n);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            map.add_edge(a, b, err2q);
        }
        map.qubits[static_cast<std::size_t>(a)] = {err1q, err_ro, t1, t2};
    }
    map.durations = durations;
    map.finalize();
    return map;
}

CouplingMap line_map(int n, double err2q) {
    CouplingMap map(n);
    map.label = "line_" + std::to_string(n);
    for (int a = 0; a + 1 < n; ++a) {
        map.add_edge(a, a + 1, err2q);
    }
    map.finalize();
    return map;
}

} // namespace nmrsim
