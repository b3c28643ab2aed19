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

#include "nmrsim/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nmrsim {

namespace {
constexpr complex_t I1{0.0, 1.0};

struct KindName {
    GateKind kind;
    std::string_view name;
};
constexpr std::array<KindName, 10> kKindNames{{
    {GateKind::PrepH, "H"},
    {GateKind::PauliX, "X"},
    {GateKind::RZ, "RZ"},
    {GateKind::RXX, "RXX"},
    {GateKind::RYY, "RYY"},
    {GateKind::RZZ, "RZZ"},
    {GateKind::CZ, "CZ"},
    {GateKind::SU2, "SU2"},
    {GateKind::SWAP, "SWAP"},
    {GateKind::Measure, "MEASURE"},
}};

int param_count(GateKind k) {
    switch (k) {
    case GateKind::RZ:
    case GateKind::RXX:
    case GateKind::RYY:
    case GateKind::RZZ:
        return 1;
    case GateKind::SU2:
        return 3;
    default:
        return 0;
    }
}
} // namespace

std::string_view gate_name(GateKind kind) {
    for (const auto &kn : kKindNames) {
        if (kn.kind == kind) {
            return kn.name;
        }
    }
    return "?";
}

int Gate::arity() const { return is_two_qubit(kind) ? 2 : 1; }

Mat2 su2_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    Mat2 m;
    m(0, 0) = std::polar(c, -0.5 * (phi + lambda));
    m(0, 1) = -std::polar(s, -0.5 * (phi - lambda));
    m(1, 0) = std::polar(s, 0.5 * (phi - lambda));
    m(1, 1) = std::polar(c, 0.5 * (phi + lambda));
    return m;
}

std::array<double, 3> zyz_angles(const Mat2 &u) {
    const complex_t det = u.determinant();
    const Mat2 v = u / std::sqrt(det);
    const double a00 = std::abs(v(0, 0));
    const double a10 = std::abs(v(1, 0));
    const double theta = 2.0 * std::atan2(a10, a00);
    constexpr double eps = 1e-14;
    double phi = 0.0;
    double lambda = 0.0;
    if (a10 < eps) {
        phi = lambda = std::arg(v(1, 1));
    } else if (a00 < eps) {
        phi = std::arg(v(1, 0));
        lambda = -phi;
    } else {
        const double sum = std::arg(v(1, 1));  // (phi + lambda) / 2
        const double diff = std::arg(v(1, 0)); // (phi - lambda) / 2
        phi = sum + diff;
        lambda = sum - diff;
    }
    return {theta, phi, lambda};
}

Gate su2_from_matrix(int qubit, const Mat2 &u) {
    const auto a = zyz_angles(u);
    return Gate::su2(qubit, a[0], a[1], a[2]);
}

Mat4 kron2(const Mat2 &a, const Mat2 &b) {
    Mat4 m;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        }
    }
    return m;
}

Mat4 swap_qubit_roles(const Mat4 &m) {
    static constexpr int p[4] = {0, 2, 1, 3};
    Mat4 out;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            out(r, c) = m(p[r], p[c]);
        }
    }
    return out;
}

Mat2 single_qubit_matrix(const Gate &g) {
    Mat2 m;
    switch (g.kind) {
    case GateKind::PrepH: {
        const double r = 1.0 / std::numbers::sqrt2;
        m << r, r, r, -r;
        return m;
    }
    case GateKind::PauliX:
        m << 0.0, 1.0, 1.0, 0.0;
        return m;
    case GateKind::RZ:
        m << std::polar(1.0, -0.5 * g.angle()), 0.0, 0.0,
            std::polar(1.0, 0.5 * g.angle());
        return m;
    case GateKind::SU2:
        return su2_matrix(g.params[0], g.params[1], g.params[2]);
    default:
        throw ArgumentError("gate " + std::string(gate_name(g.kind)) +
                            " is not a single-qubit unitary");
    }
}

Mat4 two_qubit_matrix(const Gate &g) {
    Mat4 m = Mat4::Zero();
    const double c = std::cos(0.5 * g.angle());
    const double s = std::sin(0.5 * g.angle());
    switch (g.kind) {
    case GateKind::RXX:
        m.diagonal().setConstant(c);
        m(0, 3) = m(3, 0) = m(1, 2) = m(2, 1) = -I1 * s;
        return m;
    case GateKind::RYY:
        // YY = [[0,0,0,-1],[0,0,1,0],[0,1,0,0],[-1,0,0,0]]
        m.diagonal().setConstant(c);
        m(0, 3) = m(3, 0) = I1 * s;
        m(1, 2) = m(2, 1) = -I1 * s;
        return m;
    case GateKind::RZZ: {
        const complex_t even = std::polar(1.0, -0.5 * g.angle());
        const complex_t odd = std::polar(1.0, 0.5 * g.angle());
        m.diagonal() << even, odd, odd, even;
        return m;
    }
    case GateKind::CZ:
        m.diagonal() << 1.0, 1.0, 1.0, -1.0;
        return m;
    case GateKind::SWAP:
        m(0, 0) = m(3, 3) = 1.0;
        m(1, 2) = m(2, 1) = 1.0;
        return m;
    default:
        throw ArgumentError("gate " + std::string(gate_name(g.kind)) +
                            " is not a two-qubit unitary");
    }
}

Circuit::Circuit(int width, double time_point)
    : width_(width), time_point_(time_point) {
    if (width < 0) {
        throw ArgumentError("circuit width must be nonnegative");
    }
}

void Circuit::append(const Gate &g) {
    const int n = g.arity();
    for (int k = 0; k < n; ++k) {
        const int q = g.qubits[static_cast<std::size_t>(k)];
        if (q < 0 || q >= width_) {
            throw ArgumentError("gate " + std::string(gate_name(g.kind)) +
                                " qubit " + std::to_string(q) +
                                " outside circuit width " +
                                std::to_string(width_));
        }
    }
    if (n == 2 && g.qubits[0] == g.qubits[1]) {
        throw ArgumentError("two-qubit gate needs distinct qubits");
    }
    for (int k = 0; k < param_count(g.kind); ++k) {
        if (!std::isfinite(g.params[static_cast<std::size_t>(k)])) {
            throw ArgumentError("gate angle must be finite");
        }
    }
    if (g.kind == GateKind::Measure) {
        if (std::find(measured_.begin(), measured_.end(), g.qubits[0]) !=
            measured_.end()) {
            throw ArgumentError("qubit measured twice");
        }
        measured_.push_back(g.qubits[0]);
    } else if (!measured_.empty()) {
        throw ArgumentError("measurements must be the last gates");
    }
    gates_.push_back(g);
}

void Circuit::append(std::span<const Gate> gates) {
    for (const auto &g : gates) {
        append(g);
    }
}

std::size_t Circuit::count(GateKind k) const {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(),
                      [k](const Gate &g) { return g.kind == k; }));
}

std::size_t Circuit::one_qubit_gate_count() const {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(),
                      [](const Gate &g) { return is_single_qubit(g.kind); }));
}

std::size_t Circuit::two_qubit_gate_count() const {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(),
                      [](const Gate &g) { return is_two_qubit(g.kind); }));
}

int logical_two_qubit_depth(const Circuit &c) {
    std::vector<int> layer(static_cast<std::size_t>(c.width()), 0);
    int depth = 0;
    for (const auto &g : c.gates()) {
        if (!is_two_qubit(g.kind)) {
            continue;
        }
        auto &la = layer[static_cast<std::size_t>(g.qubits[0])];
        auto &lb = layer[static_cast<std::size_t>(g.qubits[1])];
        const int l = 1 + std::max(la, lb);
        la = lb = l;
        depth = std::max(depth, l);
    }
    return depth;
}

std::string serialize_circuit(const Circuit &c) {
    std::ostringstream os;
    os << "CIRCUIT " << c.width() << ' ' << text::fmt_double(c.time_point())
       << '\n';
    auto layout_line = [&](std::string_view key, const std::vector<int> &l) {
        if (l.empty()) {
            return;
        }
        os << key;
        for (int p : l) {
            os << ' ' << p;
        }
        os << '\n';
    };
    layout_line("LAYOUT", c.initial_layout);
    layout_line("FINAL_LAYOUT", c.final_layout);
    for (const auto &g : c.gates()) {
        os << "GATE " << gate_name(g.kind) << ' ' << g.qubits[0];
        if (g.arity() == 2) {
            os << ' ' << g.qubits[1];
        }
        for (int k = 0; k < param_count(g.kind); ++k) {
            os << ' ' << text::fmt_double(g.params[static_cast<std::size_t>(k)]);
        }
        if (g.dd) {
            os << " dd";
        }
        os << '\n';
    }
    return os.str();
}

Circuit parse_circuit(std::string_view src) {
    Circuit c;
    bool have_header = false;
    text::for_each_line(src, [&](int line, std::string_view content) {
        const auto tok = text::split_ws(content);
        if (!have_header) {
            if (tok.size() != 3 || tok[0] != "CIRCUIT") {
                throw ParseError("expected 'CIRCUIT <width> <time>'", line);
            }
            const auto w = text::require_int(tok[1], line, "width");
            if (w < 0 || w > 4096) {
                throw ParseError("circuit width out of range", line);
            }
            c = Circuit(static_cast<int>(w),
                        text::require_double(tok[2], line, "time"));
            have_header = true;
            return;
        }
        if (tok[0] == "LAYOUT" || tok[0] == "FINAL_LAYOUT") {
            auto &dst = tok[0] == "LAYOUT" ? c.initial_layout : c.final_layout;
            for (std::size_t k = 1; k < tok.size(); ++k) {
                dst.push_back(
                    static_cast<int>(text::require_int(tok[k], line, "layout")));
            }
            return;
        }
        if (tok[0] != "GATE" || tok.size() < 3) {
            throw ParseError("expected 'GATE <kind> <qubits...>'", line);
        }
        Gate g;
        bool found = false;
        for (const auto &kn : kKindNames) {
            if (kn.name == tok[1]) {
                g.kind = kn.kind;
                found = true;
            }
        }
        if (!found) {
            throw ParseError("unknown gate kind '" + std::string(tok[1]) + "'",
                             line);
        }
        std::size_t pos = 2;
        const int arity = g.arity();
        const int np = param_count(g.kind);
        std::size_t expected = 2 + static_cast<std::size_t>(arity + np);
        const bool dd = tok.size() == expected + 1 && tok.back() == "dd";
        if (tok.size() != expected && !dd) {
            throw ParseError("wrong token count for gate " +
                                 std::string(tok[1]),
                             line);
        }
        for (int k = 0; k < arity; ++k) {
            g.qubits[static_cast<std::size_t>(k)] =
                static_cast<int>(text::require_int(tok[pos++], line, "qubit"));
        }
        for (int k = 0; k < np; ++k) {
            g.params[static_cast<std::size_t>(k)] =
                text::require_double(tok[pos++], line, "angle");
        }
        g.dd = dd;
        try {
            c.append(g);
        } catch (const ArgumentError &e) {
            throw ParseError(e.what(), line);
        }
    });
    if (!have_header) {
        throw ParseError("empty circuit text");
    }
    return c;
}

} // namespace nmrsim
