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
#include "nmrsim/kak.hpp"

#include "nmrsim/dense.hpp"
#include "nmrsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace nmrsim {

namespace {

using std::numbers::pi;
constexpr complex_t kI{0.0, 1.0};
constexpr double kQuarter = pi / 4.0;

Mat2 pauli_x() {
    Mat2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}
Mat2 pauli_y() {
    Mat2 m;
    m << 0.0, -kI, kI, 0.0;
    return m;
}
Mat2 pauli_z() {
    Mat2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}
Mat2 hadamard() {
    Mat2 m;
    const double r = 1.0 / std::numbers::sqrt2;
    m << r, r, r, -r;
    return m;
}
Mat2 s_gate() {
    Mat2 m;
    m << 1.0, 0.0, 0.0, kI;
    return m;
}
Mat2 rx(double t) {
    Mat2 m;
    m << std::cos(0.5 * t), -kI * std::sin(0.5 * t), -kI * std::sin(0.5 * t),
        std::cos(0.5 * t);
    return m;
}
/// exp(i theta P)
Mat2 ex(double theta, const Mat2 &p) {
    return std::cos(theta) * Mat2::Identity() + kI * std::sin(theta) * p;
}

const Mat4 &magic_basis() {
    static const Mat4 b = [] {
        Mat4 m;
        const double r = 1.0 / std::numbers::sqrt2;
        m << r, 0.0, 0.0, kI * r, //
            0.0, kI * r, r, 0.0,  //
            0.0, kI * r, -r, 0.0, //
            r, 0.0, 0.0, -kI * r;
        return m;
    }();
    return b;
}

// Rows: magic-basis eigenvalues of I, XX, YY, ZZ (all real +-1).
const Eigen::Matrix4d &magic_pauli_table() {
    static const Eigen::Matrix4d t = [] {
        const Mat4 &b = magic_basis();
        const Mat4 xx = kron2(pauli_x(), pauli_x());
        const Mat4 yy = kron2(pauli_y(), pauli_y());
        const Mat4 zz = kron2(pauli_z(), pauli_z());
        const Eigen::Vector4d sx = (b.adjoint() * xx * b).diagonal().real();
        const Eigen::Vector4d sy = (b.adjoint() * yy * b).diagonal().real();
        const Eigen::Vector4d sz = (b.adjoint() * zz * b).diagonal().real();
        Eigen::Matrix4d m;
        m.col(0).setOnes();
        m.col(1) = sx;
        m.col(2) = sy;
        m.col(3) = sz;
        return m;
    }();
    return t;
}

// Real orthogonal P with P^T M P diagonal, for complex symmetric unitary M.
// Re(M) and Im(M) commute, so a generic real combination shares their
// eigenbasis.
Eigen::Matrix4d simultaneous_diagonalizer(const Mat4 &m) {
    const Eigen::Matrix4d re = m.real();
    const Eigen::Matrix4d im = m.imag();
    static constexpr double weights[] = {0.0,          0.6180339887, 1.4142135624,
                                         -2.7182818285, 0.3183098862, 5.0,
                                         -0.1234567};
    for (double w : weights) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(re + w * im);
        const Eigen::Matrix4d p = es.eigenvectors();
        const Mat4 d = p.transpose().cast<complex_t>() * m * p.cast<complex_t>();
        double off = 0.0;
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (r != c) {
                    off = std::max(off, std::abs(d(r, c)));
                }
            }
        }
        if (off < 1e-10) {
            return p;
        }
    }
    throw NumericalError("KAK: failed to diagonalize the magic-basis product");
}

void reduce_coordinate(double &v, Mat2 &b0, Mat2 &b1, const Mat2 &p,
                       complex_t &phase) {
    // Can(v) = Can(v -+ pi/2) exp(+-i pi/2 PP) and exp(i pi/2 PP) = i PP
    while (v > kQuarter) {
        v -= 0.5 * pi;
        b0 = p * b0;
        b1 = p * b1;
        phase *= kI;
    }
    while (v <= -kQuarter) {
        v += 0.5 * pi;
        b0 = p * b0;
        b1 = p * b1;
        phase *= -kI;
    }
}

bool proportional_to_identity(const Mat2 &m, double tol = 1e-12) {
    return std::abs(m(0, 1)) < tol && std::abs(m(1, 0)) < tol &&
           std::abs(m(0, 0) - m(1, 1)) < tol;
}

struct Step {
    bool entangler = false;
    Mat2 l0 = Mat2::Identity();
    Mat2 l1 = Mat2::Identity();
};

Step local(const Mat2 &a, const Mat2 &b) { return {false, a, b}; }
Step cz_step() { return {true, Mat2::Identity(), Mat2::Identity()}; }

void append_cn(std::vector<Step> &s) {
    s.push_back(local(Mat2::Identity(), hadamard()));
    s.push_back(cz_step());
    s.push_back(local(Mat2::Identity(), hadamard()));
}

void conjugate(std::vector<Step> &core, const Mat2 &v) {
    // v Core v^dagger in time order: v^dagger first
    core.insert(core.begin(), local(v.adjoint(), v.adjoint()));
    core.push_back(local(v, v));
}

// Time-ordered steps implementing Can(x, y, z) up to global phase.
std::vector<Step> canonical_core(double x, double y, double z, int count,
                                 double tol) {
    std::vector<Step> s;
    const Mat2 id = Mat2::Identity();
    const Mat2 pxy = s_gate();        // swaps x and y under conjugation
    const Mat2 pyz = rx(-0.5 * pi);   // swaps y and z under conjugation
    if (count == 0) {
        return s;
    }
    if (count == 1) {
        const double c[3] = {x, y, z};
        int k = 0;
        for (int i = 0; i < 3; ++i) {
            if (std::abs(c[i]) > std::abs(c[k])) {
                k = i;
            }
        }
        // Can(0,0,-pi/4) = Can(0,0,pi/4) (-i ZZ)
        if (c[k] < 0.0) {
            s.push_back(local(pauli_z(), pauli_z()));
        }
        s.push_back(cz_step());
        s.push_back(local(s_gate().adjoint(), s_gate().adjoint()));
        if (k <= 1) {
            conjugate(s, pyz);
        }
        if (k == 0) {
            conjugate(s, pxy);
        }
        return s;
    }
    if (count == 2) {
        if (std::abs(y) < tol) {
            append_cn(s);
            s.push_back(local(ex(x, pauli_x()), ex(z, pauli_z())));
            append_cn(s);
        } else if (std::abs(x) < tol) {
            s = canonical_core(y, 0.0, z, 2, tol);
            conjugate(s, pxy);
        } else {
            s = canonical_core(x, 0.0, y, 2, tol);
            conjugate(s, pyz);
        }
        return s;
    }
    // CN . CZ . (ex(-y,X) (x) I) . CZ . (ex(x,X) (x) ex(z,Z)) . CN, with
    // CN . CZ written as a single-CZ circuit.
    append_cn(s);
    s.push_back(local(ex(x, pauli_x()), ex(z, pauli_z())));
    s.push_back(cz_step());
    s.push_back(local(ex(-y, pauli_x()), id));
    s.push_back(local(id, s_gate().adjoint()));
    s.push_back(local(id, hadamard()));
    s.push_back(cz_step());
    s.push_back(local(id, hadamard()));
    s.push_back(local(s_gate().adjoint(), s_gate()));
    return s;
}

} // namespace

NativeEmitter::NativeEmitter(int q0, int q1, NativeBasis basis)
    : q0_(q0), q1_(q1), basis_(basis) {}

void NativeEmitter::local(const Mat2 &a, const Mat2 &b) {
    p0_ = a * p0_;
    p1_ = b * p1_;
}

void NativeEmitter::entangle() {
    if (basis_ == NativeBasis::CZ) {
        flush();
        out_.push_back(Gate::cz(q0_, q1_));
        return;
    }
    // CZ ~ (S (x) S)(H (x) H)(Z (x) I) MS (Z (x) I)(H (x) H) with
    // MS = RXX(pi/2) = exp(-i pi/4 XX)
    local(hadamard(), hadamard());
    local(pauli_z(), Mat2::Identity());
    flush();
    out_.push_back(Gate::rxx(q0_, q1_, kMsAngle));
    local(pauli_z(), Mat2::Identity());
    local(hadamard(), hadamard());
    local(s_gate(), s_gate());
}

std::vector<Gate> NativeEmitter::finish() {
    flush();
    return std::move(out_);
}

void NativeEmitter::flush() {
    if (!proportional_to_identity(p0_)) {
        out_.push_back(su2_from_matrix(q0_, p0_));
    }
    if (!proportional_to_identity(p1_)) {
        out_.push_back(su2_from_matrix(q1_, p1_));
    }
    p0_ = p1_ = Mat2::Identity();
}

Mat4 canonical_gate(double x, double y, double z) {
    // XX, YY, ZZ commute, so the exponential factorizes
    const Mat4 xx = kron2(pauli_x(), pauli_x());
    const Mat4 yy = kron2(pauli_y(), pauli_y());
    const Mat4 zz = kron2(pauli_z(), pauli_z());
    const Mat4 id = Mat4::Identity();
    auto e = [&](double t, const Mat4 &p) -> Mat4 {
        return std::cos(t) * id + kI * std::sin(t) * p;
    };
    return e(x, xx) * e(y, yy) * e(z, zz);
}

bool factor_tensor_product(const Mat4 &m, Mat2 &a, Mat2 &b, double tol) {
    Eigen::Index r0 = 0, c0 = 0;
    m.cwiseAbs().maxCoeff(&r0, &c0);
    const int i0 = static_cast<int>(r0) / 2, j0 = static_cast<int>(r0) % 2;
    const int k0 = static_cast<int>(c0) / 2, l0 = static_cast<int>(c0) % 2;
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            a(i, k) = m(2 * i + j0, 2 * k + l0);
        }
    }
    for (int j = 0; j < 2; ++j) {
        for (int l = 0; l < 2; ++l) {
            b(j, l) = m(2 * i0 + j, 2 * k0 + l) / a(i0, k0);
        }
    }
    const complex_t det = a.determinant();
    if (std::abs(det) < 1e-14) {
        return false;
    }
    const complex_t root = std::sqrt(det);
    a /= root;
    b *= root;
    return (kron2(a, b) - m).cwiseAbs().maxCoeff() <= tol;
}

KakDecomposition kak_decompose(const Mat4 &u) {
    const complex_t det = u.determinant();
    if (std::abs(std::abs(det) - 1.0) > 1e-8) {
        throw ArgumentError("KAK: matrix is not unitary");
    }
    const complex_t norm = std::pow(det, 0.25);
    const Mat4 un = u / norm;
    const Mat4 &b = magic_basis();
    const Mat4 ub = b.adjoint() * un * b;
    const Mat4 m = ub.transpose() * ub;

    Eigen::Matrix4d p = simultaneous_diagonalizer(m);
    if (p.determinant() < 0.0) {
        p.col(0) *= -1.0;
    }
    const Mat4 pc = p.cast<complex_t>();
    const Eigen::Vector4cd dvals = (pc.transpose() * m * pc).diagonal();
    Eigen::Vector4cd droot;
    for (int i = 0; i < 4; ++i) {
        droot(i) = std::sqrt(dvals(i));
    }
    Mat4 l = ub * pc * droot.cwiseInverse().asDiagonal();
    if (l.real().determinant() < 0.0) {
        droot(0) *= -1.0;
        l.col(0) *= -1.0;
    }
    const Mat4 k1 = b * l * b.adjoint();
    const Mat4 k2 = b * pc.transpose() * b.adjoint();

    Eigen::Vector4d angles;
    for (int i = 0; i < 4; ++i) {
        angles(i) = std::arg(droot(i));
    }
    const Eigen::Vector4d sol = magic_pauli_table().fullPivLu().solve(angles);

    KakDecomposition k;
    k.global_phase = norm * std::polar(1.0, sol(0));
    k.x = sol(1);
    k.y = sol(2);
    k.z = sol(3);
    if (!factor_tensor_product(k1, k.after0, k.after1, 1e-8) ||
        !factor_tensor_product(k2, k.before0, k.before1, 1e-8)) {
        throw NumericalError("KAK: local factors are not tensor products");
    }
    reduce_coordinate(k.x, k.before0, k.before1, pauli_x(), k.global_phase);
    reduce_coordinate(k.y, k.before0, k.before1, pauli_y(), k.global_phase);
    reduce_coordinate(k.z, k.before0, k.before1, pauli_z(), k.global_phase);

    if ((kak_reconstruct(k) - u).cwiseAbs().maxCoeff() > 1e-8) {
        throw NumericalError("KAK: reconstruction check failed");
    }
    return k;
}

Mat4 kak_reconstruct(const KakDecomposition &k) {
    return k.global_phase * kron2(k.after0, k.after1) *
           canonical_gate(k.x, k.y, k.z) * kron2(k.before0, k.before1);
}

int minimal_cz_count(const KakDecomposition &k, double tol) {
    const double c[3] = {k.x, k.y, k.z};
    int zeros = 0;
    int quarters = 0;
    for (double v : c) {
        if (std::abs(v) < tol) {
            ++zeros;
        } else if (std::abs(std::abs(v) - kQuarter) < tol) {
            ++quarters;
        }
    }
    if (zeros == 3) {
        return 0;
    }
    if (zeros == 2 && quarters == 1) {
        return 1;
    }
    return zeros >= 1 ? 2 : 3;
}

int minimal_cz_count(const Mat4 &u, double tol) {
    return minimal_cz_count(kak_decompose(u), tol);
}

Mat4 gates_local_unitary(const std::vector<Gate> &gates, int q0, int q1) {
    Mat4 m = Mat4::Identity();
    for (const auto &g : gates) {
        if (g.kind == GateKind::Measure) {
            continue;
        }
        Mat4 gm;
        if (is_single_qubit(g.kind)) {
            const Mat2 s = single_qubit_matrix(g);
            if (g.qubits[0] == q0) {
                gm = kron2(s, Mat2::Identity());
            } else if (g.qubits[0] == q1) {
                gm = kron2(Mat2::Identity(), s);
            } else {
                throw ArgumentError("gate acts outside the local qubit pair");
            }
        } else {
            gm = two_qubit_matrix(g);
            if (g.qubits[0] == q1 && g.qubits[1] == q0) {
                gm = swap_qubit_roles(gm);
            } else if (g.qubits[0] != q0 || g.qubits[1] != q1) {
                throw ArgumentError("gate acts outside the local qubit pair");
            }
        }
        m = gm * m;
    }
    return m;
}

std::optional<std::vector<Gate>> synthesize_two_qubit(const Mat4 &u, int q0,
                                                      int q1, NativeBasis basis,
                                                      double tol) {
    KakDecomposition k;
    try {
        k = kak_decompose(u);
    } catch (const NumericalError &) {
        return std::nullopt;
    }
    const int count = minimal_cz_count(k);
    auto snap = [&](double v) { return std::abs(v) < kKakSnapTolerance ? 0.0 : v; };
    NativeEmitter em(q0, q1, basis);
    em.local(k.before0, k.before1);
    for (const Step &s :
         canonical_core(snap(k.x), snap(k.y), snap(k.z), count,
                        kKakSnapTolerance)) {
        if (s.entangler) {
            em.entangle();
        } else {
            em.local(s.l0, s.l1);
        }
    }
    em.local(k.after0, k.after1);
    std::vector<Gate> gates = em.finish();
    const Mat4 got = gates_local_unitary(gates, q0, q1);
    if (phase_aligned_distance(got, u) > tol) {
        return std::nullopt;
    }
    return gates;
}

} // namespace nmrsim
