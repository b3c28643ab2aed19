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
#include "nmrsim/mitigation.hpp"

#include "nmrsim/errors.hpp"
#include "nmrsim/rng.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace nmrsim {

namespace {

constexpr std::size_t kDenseSupportLimit = 1024;
constexpr int kSparseHammingRadius = 3;

std::size_t position_of(const std::vector<int> &measured, int q) {
    auto it = std::find(measured.begin(), measured.end(), q);
    if (it == measured.end()) {
        throw ArgumentError("qubit " + std::to_string(q) + " is not measured");
    }
    return static_cast<std::size_t>(it - measured.begin());
}

std::uint64_t parse_bits(const std::string &bits) {
    std::uint64_t x = 0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] == '1') {
            x |= std::uint64_t{1} << k;
        } else if (bits[k] != '0') {
            throw ValidationError("bitstring contains '" + std::string(1, bits[k]) + "'");
        }
    }
    return x;
}

double condition_number(const Eigen::MatrixXd &m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto &s = svd.singularValues();
    const double lo = s(s.size() - 1);
    return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

/// Gathers global outcome bits into group-local indices.
struct GroupLayout {
    // For group g, bit k of the local index comes from global bit pos[g][k].
    std::vector<std::vector<std::size_t>> pos;

    GroupLayout(const ConfusionModel &cm, const std::vector<int> &measured) {
        if (measured.size() != cm.measured.size()) {
            throw ArgumentError("counts and confusion model measure different qubits");
        }
        for (const auto &grp : cm.groups) {
            std::vector<std::size_t> p;
            for (int q : grp) {
                p.push_back(position_of(measured, q));
            }
            pos.push_back(std::move(p));
        }
    }

    [[nodiscard]] std::size_t local(std::size_t g, std::uint64_t x) const {
        std::size_t v = 0;
        for (std::size_t k = 0; k < pos[g].size(); ++k) {
            v |= static_cast<std::size_t>((x >> pos[g][k]) & 1U) << k;
        }
        return v;
    }

    [[nodiscard]] double entry(const ConfusionModel &cm, std::uint64_t obs,
                               std::uint64_t prep) const {
        double v = 1.0;
        for (std::size_t g = 0; g < pos.size() && v != 0.0; ++g) {
            v *= cm.matrices[g](static_cast<Eigen::Index>(local(g, obs)),
                                static_cast<Eigen::Index>(local(g, prep)));
        }
        return v;
    }
};

void check_conditioning(const ConfusionModel &cm) {
    for (std::size_t g = 0; g < cm.matrices.size(); ++g) {
        const double k = condition_number(cm.matrices[g]);
        if (!(k <= kMaxConfusionCondition)) {
            throw MitigationError("confusion matrix of group " + std::to_string(g) +
                                      " is singular (condition number " +
                                      std::to_string(k) + ")",
                                  k);
        }
    }
}

/// Solves A x = p on the support; A is column-normalized within the support
/// so the solution keeps the total of p.
std::vector<double> solve_reduced(const std::vector<std::uint64_t> &support,
                                  const std::vector<double> &p,
                                  const ConfusionModel &cm,
                                  const GroupLayout &lay) {
    check_conditioning(cm);
    const auto n = static_cast<Eigen::Index>(support.size());
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rhs(i) = p[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd x;
    if (support.size() <= kDenseSupportLimit) {
        Eigen::MatrixXd a(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                a(i, j) = lay.entry(cm, support[static_cast<std::size_t>(i)],
                                    support[static_cast<std::size_t>(j)]);
            }
            const double col = a.col(j).sum();
            if (col > 0.0) {
                a.col(j) /= col;
            }
        }
        x = a.partialPivLu().solve(rhs);
    } else {
        std::vector<Eigen::Triplet<double>> trip;
        std::vector<double> colsum(support.size(), 0.0);
        for (std::size_t j = 0; j < support.size(); ++j) {
            for (std::size_t i = 0; i < support.size(); ++i) {
                if (std::popcount(support[i] ^ support[j]) > kSparseHammingRadius) {
                    continue;
                }
                const double v = lay.entry(cm, support[i], support[j]);
                if (v != 0.0) {
                    trip.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
                    colsum[j] += v;
                }
            }
        }
        for (auto &t : trip) {
            t = Eigen::Triplet<double>(t.row(), t.col(),
                                       t.value() / colsum[static_cast<std::size_t>(t.col())]);
        }
        Eigen::SparseMatrix<double> a(n, n);
        a.setFromTriplets(trip.begin(), trip.end());
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>> solver;
        solver.setTolerance(1e-12);
        solver.compute(a);
        x = solver.solveWithGuess(rhs, rhs);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("iterative mitigation solve did not converge");
        }
    }
    if (!x.allFinite()) {
        throw MitigationError("mitigation solve produced non-finite values",
                              std::numeric_limits<double>::infinity());
    }
    return {x.data(), x.data() + x.size()};
}

} // namespace

void ConfusionModel::validate() const {
    if (groups.size() != matrices.size()) {
        throw ValidationError("one confusion matrix per group is required");
    }
    std::vector<int> seen;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto size = groups[g].size();
        if (size == 0 || size > kMaxConfusionGroup) {
            throw ValidationError("confusion groups hold 1 to 4 qubits");
        }
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << size);
        if (matrices[g].rows() != dim || matrices[g].cols() != dim) {
            throw ValidationError("confusion matrix has the wrong dimension");
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (std::abs(matrices[g].col(j).sum() - 1.0) > 1e-9 ||
                matrices[g].col(j).minCoeff() < 0.0) {
                throw ValidationError("confusion matrix is not column-stochastic");
            }
        }
        seen.insert(seen.end(), groups[g].begin(), groups[g].end());
    }
    auto a = seen;
    auto b = measured;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
        throw ValidationError("confusion groups must partition the measured qubits");
    }
}

double QuasiDistribution::total() const {
    double t = 0.0;
    for (const auto &[k, v] : probs) {
        t += v;
    }
    return t;
}

std::vector<std::vector<int>> contiguous_groups(const std::vector<int> &measured,
                                                std::size_t size) {
    if (size == 0 || size > kMaxConfusionGroup) {
        throw ArgumentError("group size must be between 1 and 4");
    }
    std::vector<std::vector<int>> out;
    for (std::size_t i = 0; i < measured.size(); i += size) {
        const auto end = std::min(measured.size(), i + size);
        out.emplace_back(measured.begin() + static_cast<std::ptrdiff_t>(i),
                         measured.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

ConfusionModel analytic_confusion(const NoiseModel &nm,
                                  const std::vector<int> &measured,
                                  const std::vector<std::vector<int>> &groups) {
    ConfusionModel cm{measured, groups, {}};
    for (const auto &grp : groups) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
        // kron with the later qubit on the left keeps bit k = grp[k]
        for (int q : grp) {
            const double f = nm.p_ro_of(q);
            Eigen::Matrix2d c;
            c << 1.0 - f, f, f, 1.0 - f;
            Eigen::MatrixXd next(2 * m.rows(), 2 * m.cols());
            for (int r = 0; r < 2; ++r) {
                for (int s = 0; s < 2; ++s) {
                    next.block(r * m.rows(), s * m.cols(), m.rows(), m.cols()) = c(r, s) * m;
                }
            }
            m = std::move(next);
        }
        cm.matrices.push_back(std::move(m));
    }
    cm.validate();
    return cm;
}

ConfusionModel calibrate_confusion(const NoiseModel &nm,
                                   const std::vector<int> &measured,
                                   const std::vector<std::vector<int>> &groups,
                                   std::uint64_t n_cal, std::uint64_t seed) {
    if (n_cal == 0) {
        throw ArgumentError("calibration needs at least one shot");
    }
    ConfusionModel cm{measured, groups, {}};
    int width = 0;
    for (int q : measured) {
        width = std::max(width, q + 1);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto &grp = groups[g];
        if (grp.empty() || grp.size() > kMaxConfusionGroup) {
            throw ArgumentError("confusion groups hold 1 to 4 qubits");
        }
        const auto dim = std::size_t{1} << grp.size();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
        for (std::size_t prep = 0; prep < dim; ++prep) {
            Circuit c(width);
            for (std::size_t k = 0; k < grp.size(); ++k) {
                if ((prep >> k) & 1U) {
                    c.append(Gate{GateKind::PauliX, {grp[k], -1}});
                }
            }
            for (int q : grp) {
                c.append(Gate{GateKind::Measure, {q, -1}});
            }
            const auto counts = noisy_run(c, nm, n_cal, derive_seed(seed, g, prep));
            for (const auto &[bits, n] : counts.counts) {
                m(static_cast<Eigen::Index>(parse_bits(bits)),
                  static_cast<Eigen::Index>(prep)) +=
                    static_cast<double>(n) / static_cast<double>(n_cal);
            }
        }
        cm.matrices.push_back(std::move(m));
    }
    cm.validate();
    return cm;
}

QuasiDistribution counts_to_distribution(const ShotCounts &counts) {
    if (counts.n_shots == 0) {
        throw ArgumentError("counts contain zero shots");
    }
    QuasiDistribution q{counts.measured, {}};
    for (const auto &[bits, n] : counts.counts) {
        q.probs.emplace(bits, static_cast<double>(n) / static_cast<double>(counts.n_shots));
    }
    return q;
}

QuasiDistribution mitigate_counts(const ShotCounts &counts,
                                  const ConfusionModel &cm) {
    cm.validate();
    const GroupLayout lay(cm, counts.measured);
    const auto dist = counts_to_distribution(counts);
    std::vector<std::uint64_t> support;
    std::vector<double> p;
    for (const auto &[bits, v] : dist.probs) {
        support.push_back(parse_bits(bits));
        p.push_back(v);
    }
    const auto x = solve_reduced(support, p, cm, lay);
    QuasiDistribution out{counts.measured, {}};
    std::size_t i = 0;
    for (const auto &[bits, v] : dist.probs) {
        out.probs.emplace(bits, x[i++]);
    }
    return out;
}

std::vector<double> mitigate_distribution(const std::vector<double> &p,
                                          const std::vector<int> &measured,
                                          const ConfusionModel &cm) {
    cm.validate();
    if (p.size() != (std::size_t{1} << measured.size())) {
        throw ArgumentError("distribution length must be 2^(number of measured qubits)");
    }
    const GroupLayout lay(cm, measured);
    std::vector<std::uint64_t> support;
    std::vector<double> vals;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] != 0.0) {
            support.push_back(k);
            vals.push_back(p[k]);
        }
    }
    std::vector<double> out(p.size(), 0.0);
    if (support.empty()) {
        return out;
    }
    const auto x = solve_reduced(support, vals, cm, lay);
    for (std::size_t i = 0; i < support.size(); ++i) {
        out[support[i]] = x[i];
    }
    return out;
}

QuasiDistribution rescale_low_confidence(const QuasiDistribution &q,
                                         double tau) {
    if (!(tau >= 0.0)) {
        throw ArgumentError("rescaling threshold must be nonnegative");
    }
    QuasiDistribution out{q.measured, {}};
    double total = 0.0;
    for (const auto &[bits, v] : q.probs) {
        double p = std::max(v, 0.0);
        if (p < tau) {
            p *= p / (p + tau);
        }
        out.probs.emplace(bits, p);
        total += p;
    }
    if (!(total > 0.0)) {
        throw MitigationError("distribution is empty after clipping negatives", 0.0);
    }
    for (auto &[bits, v] : out.probs) {
        v /= total;
    }
    return out;
}

double magnetization_from_distribution(const QuasiDistribution &q,
                                       const std::vector<int> &observed) {
    if (observed.empty()) {
        throw ArgumentError("observed qubit set is empty");
    }
    std::vector<std::size_t> pos;
    for (int o : observed) {
        pos.push_back(position_of(q.measured, o));
    }
    double acc = 0.0;
    for (const auto &[bits, v] : q.probs) {
        for (std::size_t k : pos) {
            acc += bits[k] == '0' ? v : -v;
        }
    }
    return 0.5 * acc;
}

} // namespace nmrsim
