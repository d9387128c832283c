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
 * Trapezoidal bumps, matrix functional calculus and the ordered bump product
 *
 *     Theta_{xi,eta}(a_1, ..., a_n) = theta_{xi_1,eta}(a_1) ... theta_{xi_n,eta}(a_n)
 *
 * whose operator norm decides membership in the synthetic spectrum.
 */

#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "linalg.hpp"
#include "observables.hpp"

namespace amu {

/// 1 on |t - center| <= 3w/4, 0 on |t - center| >= w, linear in between.
struct BumpFunction {
    double center = 0.0;
    double width = 0.5;

    [[nodiscard]] double operator()(double t) const noexcept {
        const double d = std::abs(t - center);
        if (d <= 0.75 * width) {
            return 1.0;
        }
        if (d >= width) {
            return 0.0;
        }
        return (width - d) / (0.25 * width);
    }
};

inline double bump_eval(const BumpFunction &b, double t) noexcept { return b(t); }

/// f(A) = U diag(f(lambda_i)) U^*, symmetrized.
inline HermitianMatrix apply_function(const std::function<double(double)> &f,
                                      const EigenDecomposition &e) {
    RealVector fx(e.eigenvalues.size());
    for (Eigen::Index i = 0; i < fx.size(); ++i) {
        fx(i) = f(e.eigenvalues(i));
    }
    return HermitianMatrix::symmetrized(e.eigenvectors * fx.cast<Complex>().asDiagonal() *
                                        e.eigenvectors.adjoint());
}

inline HermitianMatrix apply_function(const std::function<double(double)> &f,
                                      const HermitianMatrix &a) {
    return apply_function(f, eig_hermitian(a));
}

struct ThetaProduct {
    Point centers;
    double width = 0.0;
    ComplexMatrix value; ///< generally not Hermitian
};

/**
 * Holds the eigendecompositions of a tuple and evaluates bump products on it.
 *
 * Two routes to ||Theta||:
 *  - product(): the literal left-to-right product of the factor matrices
 *    theta(a_j) = U_j D_j U_j^*, each cached by (index, center, width);
 *  - norm(): the unitarily equivalent chain D_1 W_12 D_2 ... W_{n-1,n} D_n,
 *    W_{j,j+1} = U_j^* U_{j+1}, restricted to the bump supports.
 *
 * Const member functions are safe to call concurrently.
 */
class ThetaEvaluator {
  public:
    /// Eigen-coordinates of one bump factor: the eigen-indices where the bump
    /// is non-zero and its values there.
    struct Support {
        std::vector<Eigen::Index> index;
        RealVector weight;
        double max_weight = 0.0;
    };

    explicit ThetaEvaluator(const OperatorTuple &tuple) : bound_(tuple.bound()) {
        eig_.reserve(tuple.size());
        for (const auto &t : tuple.ops()) {
            eig_.push_back(eig_hermitian(t));
        }
        for (std::size_t j = 0; j + 1 < eig_.size(); ++j) {
            links_.push_back(eig_[j].eigenvectors.adjoint() * eig_[j + 1].eigenvectors);
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return eig_.size(); }
    [[nodiscard]] Eigen::Index dim() const noexcept { return eig_.front().eigenvalues.size(); }
    [[nodiscard]] double bound() const noexcept { return bound_; }
    [[nodiscard]] const EigenDecomposition &eigen(std::size_t j) const { return eig_.at(j); }

    [[nodiscard]] Support support(std::size_t j, double center, double width) const {
        const BumpFunction b{center, width};
        const RealVector &ev = eig_.at(j).eigenvalues;
        Support s;
        std::vector<double> w;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            const double v = b(ev(i));
            if (v > 0.0) {
                s.index.push_back(i);
                w.push_back(v);
                s.max_weight = std::max(s.max_weight, v);
            }
        }
        s.weight = Eigen::Map<const RealVector>(w.data(), static_cast<Eigen::Index>(w.size()));
        return s;
    }

    /// theta_{center,width}(a_j), cached.
    [[nodiscard]] std::shared_ptr<const ComplexMatrix> factor(std::size_t j, double center,
                                                              double width) const {
        const Key key{j, center, width};
        {
            std::shared_lock lock(cache_mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) {
                return it->second;
            }
        }
        auto value = std::make_shared<const ComplexMatrix>(
            apply_function(BumpFunction{center, width}, eig_.at(j)).matrix());
        std::unique_lock lock(cache_mutex_);
        return cache_.try_emplace(key, std::move(value)).first->second;
    }

    [[nodiscard]] std::size_t cached_factors() const {
        std::shared_lock lock(cache_mutex_);
        return cache_.size();
    }

    [[nodiscard]] ThetaProduct product(const Point &xi, double width) const {
        check_point(xi, width);
        ComplexMatrix value = *factor(0, xi[0], width);
        for (std::size_t j = 1; j < xi.size(); ++j) {
            value = value * (*factor(j, xi[j], width));
        }
        return {xi, width, std::move(value)};
    }

    /// Exact ||Theta_{xi,width}|| through the support chain.
    [[nodiscard]] double norm(const Point &xi, double width) const {
        check_point(xi, width);
        std::vector<Support> s;
        std::vector<const Support *> ptrs;
        s.reserve(xi.size());
        for (std::size_t j = 0; j < xi.size(); ++j) {
            s.push_back(support(j, xi[j], width));
        }
        for (const auto &x : s) {
            ptrs.push_back(&x);
        }
        return *chain_norm(ptrs, 0.0);
    }

    /**
     * ||Theta|| for precomputed supports, or nullopt when a cheap upper bound
     * (smallest max-weight, then Frobenius norm of the chain) already shows
     * ||Theta|| < threshold.
     */
    [[nodiscard]] std::optional<double> chain_norm(const std::vector<const Support *> &s,
                                                   double threshold) const {
        double upper = 1.0;
        for (const auto *x : s) {
            if (x->index.empty()) {
                return threshold > 0.0 ? std::nullopt : std::optional<double>(0.0);
            }
            upper = std::min(upper, x->max_weight);
        }
        if (upper < threshold) {
            return std::nullopt;
        }
        if (s.size() == 1) {
            return s.front()->max_weight;
        }
        ComplexMatrix chain = s[0]->weight.cast<Complex>().asDiagonal() *
                              links_[0](s[0]->index, s[1]->index) *
                              s[1]->weight.cast<Complex>().asDiagonal();
        for (std::size_t j = 2; j < s.size(); ++j) {
            chain = (chain * links_[j - 1](s[j - 1]->index, s[j]->index)) *
                    s[j]->weight.cast<Complex>().asDiagonal();
        }
        if (chain.norm() < threshold) {
            return std::nullopt;
        }
        return operator_norm(chain);
    }

  private:
    using Key = std::tuple<std::size_t, double, double>;

    void check_point(const Point &xi, double width) const {
        if (xi.size() != eig_.size()) {
            throw ConfigError("theta product: point has " + std::to_string(xi.size()) +
                              " coordinates, tuple has " + std::to_string(eig_.size()));
        }
        if (!(width > 0.0 && width < 1.0)) {
            throw ConfigError("theta product: width must lie in (0, 1)");
        }
    }

    std::vector<EigenDecomposition> eig_;
    std::vector<ComplexMatrix> links_;
    double bound_ = 1.0;
    mutable std::map<Key, std::shared_ptr<const ComplexMatrix>> cache_;
    mutable std::shared_mutex cache_mutex_;
};

inline ThetaProduct theta_product(const OperatorTuple &tuple, const Point &xi, double eta) {
    return ThetaEvaluator(tuple).product(xi, eta);
}

/// Re <Theta x, x> > 1 - eta; a passing x certifies ||Theta|| >= 1 - eta.
inline bool witness_test(const ThetaProduct &theta, const VectorState &x, double eta) {
    detail::require_same_dim(theta.value.rows(), x.dim(), "witness_test");
    return x.vector().dot(theta.value * x.vector()).real() > 1.0 - eta;
}

} // namespace amu
