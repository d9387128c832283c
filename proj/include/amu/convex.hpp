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
 * Nearest convex combination: min ||target - sum_k a_k p_k|| over the
 * probability simplex, by Wolfe's minimum-norm-point algorithm
 * (P. Wolfe, Math. Programming 11, 1976).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace amu {

struct ConvexFit {
    Eigen::VectorXd weights; ///< a_k >= 0, sum 1
    double distance = 0.0;   ///< ||target - sum a_k p_k||
    int iterations = 0;
};

/// @p points holds one candidate per column.
inline ConvexFit nearest_convex_combination(const Eigen::MatrixXd &points,
                                            const Eigen::VectorXd &target,
                                            double tol = 1e-12, int max_iter = 1000) {
    const Eigen::Index m = points.cols();
    if (m < 1) {
        throw ConfigError("nearest_convex_combination: no points");
    }
    if (points.rows() != target.size()) {
        throw ConfigError("nearest_convex_combination: dimension mismatch");
    }
    const Eigen::MatrixXd p = points.colwise() - target;
    const double scale = std::max(1.0, p.colwise().squaredNorm().maxCoeff());

    // Active set S with convex weights lam; x = P_S lam.
    Eigen::Index start = 0;
    p.colwise().squaredNorm().minCoeff(&start);
    std::vector<Eigen::Index> active{start};
    std::vector<double> lam{1.0};
    Eigen::VectorXd x = p.col(start);

    auto affine_min = [&](const std::vector<Eigen::Index> &s) {
        const auto k = static_cast<Eigen::Index>(s.size());
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (Eigen::Index i = 0; i < k; ++i) {
            for (Eigen::Index j = 0; j < k; ++j) {
                kkt(i, j) = p.col(s[i]).dot(p.col(s[j]));
            }
            kkt(i, k) = kkt(k, i) = 1.0;
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
        rhs(k) = 1.0;
        return Eigen::VectorXd(kkt.fullPivLu().solve(rhs).head(k));
    };

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        Eigen::Index j = 0;
        const double best = (p.transpose() * x).minCoeff(&j);
        if (best >= x.squaredNorm() - tol * scale ||
            std::find(active.begin(), active.end(), j) != active.end()) {
            break;
        }
        active.push_back(j);
        lam.push_back(0.0);

        while (true) {
            const Eigen::VectorXd v = affine_min(active);
            if ((v.array() > tol).all()) {
                lam.assign(v.data(), v.data() + v.size());
                break;
            }
            double theta = 1.0;
            for (std::size_t i = 0; i < active.size(); ++i) {
                if (v(static_cast<Eigen::Index>(i)) <= tol) {
                    const double denom = lam[i] - v(static_cast<Eigen::Index>(i));
                    if (denom > 0.0) {
                        theta = std::min(theta, lam[i] / denom);
                    }
                }
            }
            std::vector<Eigen::Index> keep_idx;
            std::vector<double> keep_lam;
            for (std::size_t i = 0; i < active.size(); ++i) {
                const double l = theta * v(static_cast<Eigen::Index>(i)) + (1.0 - theta) * lam[i];
                if (l > tol) {
                    keep_idx.push_back(active[i]);
                    keep_lam.push_back(l);
                }
            }
            if (keep_idx.empty()) {
                throw NumericalError("nearest_convex_combination: active set collapsed");
            }
            const double total = std::accumulate(keep_lam.begin(), keep_lam.end(), 0.0);
            for (auto &l : keep_lam) {
                l /= total;
            }
            active = std::move(keep_idx);
            lam = std::move(keep_lam);
            if (active.size() == 1) {
                break;
            }
        }
        x.setZero();
        for (std::size_t i = 0; i < active.size(); ++i) {
            x += lam[i] * p.col(active[i]);
        }
    }

    ConvexFit fit;
    fit.weights = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < active.size(); ++i) {
        fit.weights(active[i]) = lam[i];
    }
    fit.distance = (points * fit.weights - target).norm();
    fit.iterations = iter;
    return fit;
}

} // namespace amu
