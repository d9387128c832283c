// Copyright 2026 The amu-spectra Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Searches for approximate joint eigenvectors: ground states of the
 * localization operator Q(lambda) = sum_j (T_j - lambda_j I)^2, approximate
 * joint diagonalization by Jacobi rotations, and superpositions
 * x = sum_k sqrt(a_k) v_k that measure convex combinations of joint
 * expected values.
 */

#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "convex.hpp"
#include "observables.hpp"
#include "parallel.hpp"

namespace amu {

struct LocalizationOperator {
    Point lambda;
    HermitianMatrix q;
};

inline LocalizationOperator localization_operator(const OperatorTuple &tuple, const Point &lambda) {
    if (lambda.size() != tuple.size()) {
        throw ConfigError("localization operator: lambda has " + std::to_string(lambda.size()) +
                          " coordinates, tuple has " + std::to_string(tuple.size()));
    }
    const Eigen::Index d = tuple.dim();
    ComplexMatrix q = ComplexMatrix::Zero(d, d);
    for (std::size_t j = 0; j < tuple.size(); ++j) {
        ComplexMatrix shifted = tuple[j].matrix();
        shifted.diagonal().array() -= lambda[j];
        q.noalias() += shifted * shifted;
    }
    return {lambda, HermitianMatrix::symmetrized(q)};
}

struct GroundState {
    VectorState state;
    double energy = 0.0;
};

/// Lowest eigenpair of Q(lambda); sum_j var_j(v) <= energy.
inline GroundState ground_state(const OperatorTuple &tuple, const Point &lambda) {
    const auto loc = localization_operator(tuple, lambda);
    const auto e = eig_hermitian(loc.q);
    if (e.eigenvalues(0) < -default_tolerances.psd * std::max(1.0, e.eigenvalues.cwiseAbs().maxCoeff())) {
        throw NumericalError("localization operator is not positive semidefinite: min eigenvalue " +
                             std::to_string(e.eigenvalues(0)));
    }
    return {VectorState::normalized(e.eigenvectors.col(0)), std::max(0.0, e.eigenvalues(0))};
}

struct DigitalDecomposition {
    ComplexMatrix unitary;                        ///< columns: the rotated basis
    std::vector<std::vector<Eigen::Index>> clusters; ///< partition of the column indices
    std::vector<Point> cluster_points;            ///< mean rotated diagonal per cluster
    RealMatrix diagonals;                         ///< dim x n, (U^* T_j U)_{ii}
    double residual = 0.0;                        ///< sqrt(sum_j ||offdiag(U^* T_j U)||_F^2)
    std::vector<double> residual_history;         ///< residual after each sweep, [0] = start
    int sweeps = 0;
};

namespace detail {

inline double offdiag_energy(const std::vector<ComplexMatrix> &a) {
    double e = 0.0;
    for (const auto &m : a) {
        e += m.squaredNorm() - m.diagonal().squaredNorm();
    }
    return e;
}

/// Single-linkage clusters of the rows of @p pts with link radius @p r,
/// ordered by lowest member index.
inline std::vector<std::vector<Eigen::Index>> single_linkage(const RealMatrix &pts, double r) {
    const Eigen::Index m = pts.rows();
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(m));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            if ((pts.row(i) - pts.row(j)).norm() <= r) {
                const auto a = find(i);
                const auto b = find(j);
                parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<std::vector<Eigen::Index>> clusters;
    std::vector<long> slot(static_cast<std::size_t>(m), -1);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<long>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(slot[root])].push_back(i);
    }
    return clusters;
}

} // namespace detail

/**
 * Approximate joint diagonalization by complex Jacobi rotations (Cardoso and
 * Souloumiac's joint-diagonalization update): each (p, q) rotation is the
 * exact minimizer of the summed (p, q) off-diagonal energy. Stops once a
 * sweep improves the residual by less than @p tol or @p max_sweeps is spent.
 * Rotated diagonals are grouped by single linkage with radius
 * @p cluster_radius.
 */
inline DigitalDecomposition joint_diagonalize(const OperatorTuple &tuple, int max_sweeps = 100,
                                              double tol = 1e-12, double cluster_radius = 0.25) {
    if (!(tol > 0.0)) {
        throw ConfigError("joint_diagonalize: tol must be positive");
    }
    const Eigen::Index d = tuple.dim();
    std::vector<ComplexMatrix> a;
    for (const auto &t : tuple.ops()) {
        a.push_back(t.matrix());
    }
    ComplexMatrix v = ComplexMatrix::Identity(d, d);

    DigitalDecomposition out;
    double residual = std::sqrt(std::max(0.0, detail::offdiag_energy(a)));
    out.residual_history.push_back(residual);
    const double skip = 1e-14;

    int sweep = 0;
    for (; sweep < max_sweeps && d > 1; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p < d - 1; ++p) {
            for (Eigen::Index q = p + 1; q < d; ++q) {
                Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
                for (const auto &m : a) {
                    const Eigen::Vector3d h(m(p, p).real() - m(q, q).real(), 2.0 * m(p, q).real(),
                                            2.0 * m(p, q).imag());
                    g.noalias() += h * h.transpose();
                }
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
                Eigen::Vector3d ang = es.eigenvectors().col(2);
                if (ang(0) < 0.0) {
                    ang = -ang;
                }
                const double c = std::sqrt(0.5 + ang(0) / 2.0);
                const Complex s = 0.5 * Complex(ang(1), -ang(2)) / c;
                if (std::abs(s) <= skip) {
                    continue;
                }
                rotated = true;
                Eigen::Matrix2cd rot;
                rot << c, -std::conj(s), s, c;
                const std::array<Eigen::Index, 2> idx{p, q};
                v(Eigen::all, idx) = v(Eigen::all, idx) * rot;
                for (auto &m : a) {
                    m(idx, Eigen::all) = rot.adjoint() * m(idx, Eigen::all);
                    m(Eigen::all, idx) = m(Eigen::all, idx) * rot;
                }
            }
        }
        const double next = std::sqrt(std::max(0.0, detail::offdiag_energy(a)));
        out.residual_history.push_back(next);
        if (next > residual * (1.0 + 1e-10) + 1e-13) {
            throw NumericalError("joint_diagonalize: residual increased from " +
                                 std::to_string(residual) + " to " + std::to_string(next));
        }
        const double improvement = residual - next;
        residual = next;
        if (!rotated || improvement < tol) {
            ++sweep;
            break;
        }
    }

    out.unitary = std::move(v);
    out.residual = residual;
    out.sweeps = sweep;
    out.diagonals.resize(d, static_cast<Eigen::Index>(tuple.size()));
    for (std::size_t j = 0; j < a.size(); ++j) {
        out.diagonals.col(static_cast<Eigen::Index>(j)) = a[j].diagonal().real();
    }
    out.clusters = detail::single_linkage(out.diagonals, cluster_radius);
    for (const auto &c : out.clusters) {
        RealVector mean = RealVector::Zero(out.diagonals.cols());
        for (auto i : c) {
            mean += out.diagonals.row(i).transpose();
        }
        mean /= static_cast<double>(c.size());
        out.cluster_points.emplace_back(mean.data(), mean.data() + mean.size());
    }
    return out;
}

/**
 * A vector supported on the cluster of @p dec nearest to @p lambda: the
 * minimizer of <Q(lambda) v, v> over span of that cluster's columns.
 */
inline VectorState cluster_candidate(const OperatorTuple &tuple, const DigitalDecomposition &dec,
                                     const Point &lambda) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < dec.cluster_points.size(); ++c) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < lambda.size(); ++j) {
            d2 += std::pow(dec.cluster_points[c][j] - lambda[j], 2);
        }
        if (d2 < best_d) {
            best_d = d2;
            best = c;
        }
    }
    const ComplexMatrix basis = dec.unitary(Eigen::all, dec.clusters.at(best));
    const auto loc = localization_operator(tuple, lambda);
    const auto small = eig_hermitian(
        HermitianMatrix::symmetrized(basis.adjoint() * loc.q.matrix() * basis));
    return VectorState::normalized(basis * small.eigenvectors.col(0));
}

/// Ground state of Q(lambda), measured against the tuple. When @p dec is
/// given its nearest-cluster candidate is also tried and the smaller max sd wins.
inline AmuCertificate amu_at(const OperatorTuple &tuple, const Point &lambda, double sigma,
                             double eps, const DigitalDecomposition *dec = nullptr) {
    auto cert = amu_check(tuple, ground_state(tuple, lambda).state, lambda, sigma, eps);
    if (dec != nullptr) {
        auto alt = amu_check(tuple, cluster_candidate(tuple, *dec, lambda), lambda, sigma, eps);
        if (alt.max_sd() < cert.max_sd()) {
            cert = std::move(alt);
        }
    }
    return cert;
}

/// amu_at over many points; output order follows @p lambdas.
inline std::vector<AmuCertificate> amu_batch(const OperatorTuple &tuple,
                                             const std::vector<Point> &lambdas, double sigma,
                                             double eps, unsigned threads = 1) {
    std::vector<std::optional<AmuCertificate>> slots(lambdas.size());
    parallel_for(lambdas.size(), threads,
                 [&](std::size_t i) { slots[i] = amu_at(tuple, lambdas[i], sigma, eps); });
    std::vector<AmuCertificate> out;
    out.reserve(slots.size());
    for (auto &s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

struct SuperpositionPlan {
    Point target;
    std::vector<double> weights;         ///< a_k >= 0, sum 1
    std::vector<VectorState> components; ///< orthonormal v_k
    std::vector<Point> component_points; ///< xi_k = joint expected values of v_k
    bool reorthogonalized = false;
    VectorState state;                   ///< x = sum_k sqrt(a_k) v_k
    MeasurementReport report;            ///< measurement of x
    double hull_distance = 0.0;          ///< ||target - sum a_k xi_k||
    double achieved_distance = 0.0;      ///< ||target - exp(x)||
    std::vector<double> cross_term;      ///< exp_j(x) - sum_k a_k exp_j(v_k)
    std::vector<double> cross_bound;     ///< sum_{k != l} sqrt(a_k a_l) min(sd_kj, sd_lj)
};

/**
 * Superposes certificate states so that x measures (approximately) @p mu.
 * States that are not orthogonal to within the tolerance are orthonormalized
 * in order and re-measured.
 */
inline SuperpositionPlan superpose(const OperatorTuple &tuple,
                                   const std::vector<AmuCertificate> &certs, const Point &mu,
                                   const Tolerances &tol = default_tolerances) {
    if (certs.empty()) {
        throw ConfigError("superpose: need at least one certificate");
    }
    if (mu.size() != tuple.size()) {
        throw ConfigError("superpose: target dimension mismatch");
    }
    SuperpositionPlan plan;
    plan.target = mu;

    std::vector<ComplexVector> raw;
    for (const auto &c : certs) {
        detail::require_same_dim(c.state.dim(), tuple.dim(), "superpose");
        raw.push_back(c.state.vector());
    }
    double worst_overlap = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            worst_overlap = std::max(worst_overlap, std::abs(raw[i].dot(raw[j])));
        }
    }
    std::vector<MeasurementReport> reports;
    if (worst_overlap > tol.orthogonality) {
        plan.reorthogonalized = true;
        for (auto &v : gram_schmidt(raw)) {
            plan.components.emplace_back(VectorState::normalized(v));
            reports.push_back(measure(tuple, plan.components.back()));
        }
    } else {
        for (const auto &c : certs) {
            plan.components.push_back(c.state);
            reports.push_back(c.report);
        }
    }

    const auto m = static_cast<Eigen::Index>(plan.components.size());
    const auto n = static_cast<Eigen::Index>(tuple.size());
    Eigen::MatrixXd xi(n, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            xi(j, k) = reports[k].exp[j];
        }
        plan.component_points.emplace_back(reports[k].exp);
    }
    const Eigen::Map<const Eigen::VectorXd> target(mu.data(), n);
    const auto fit = nearest_convex_combination(xi, target);
    plan.hull_distance = fit.distance;
    if (fit.distance > tol.hull) {
        throw ConfigError("superpose: target lies outside the convex hull of the certificate "
                          "expectations (distance " +
                          std::to_string(fit.distance) + ")");
    }
    plan.weights.assign(fit.weights.data(), fit.weights.data() + m);

    ComplexVector x = ComplexVector::Zero(tuple.dim());
    for (Eigen::Index k = 0; k < m; ++k) {
        x += std::sqrt(plan.weights[k]) * plan.components[k].vector();
    }
    if (std::abs(x.norm() - 1.0) > 1e-8) {
        throw NumericalError("superpose: composite state has norm " + std::to_string(x.norm()));
    }
    plan.state = VectorState::normalized(x);
    plan.report = measure(tuple, plan.state);

    double d2 = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        d2 += std::pow(mu[j] - plan.report.exp[j], 2);
        double mixed = 0.0;
        double bound = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            mixed += plan.weights[k] * reports[k].exp[j];
            for (Eigen::Index l = 0; l < m; ++l) {
                if (l != k) {
                    bound += std::sqrt(plan.weights[k] * plan.weights[l]) *
                             std::min(reports[k].sd[j], reports[l].sd[j]);
                }
            }
        }
        plan.cross_term.push_back(plan.report.exp[j] - mixed);
        plan.cross_bound.push_back(bound);
    }
    plan.achieved_distance = std::sqrt(d2);
    return plan;
}

} // namespace amu
