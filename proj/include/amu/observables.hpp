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
 * Operator tuples, vector states and the measurement functionals
 * exp / var / sd, plus the approximate-macroscopic-uniqueness check.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace amu {

using Point = std::vector<double>;

/// A unit vector of the underlying Hilbert space.
class VectorState {
  public:
    VectorState() = default;

    explicit VectorState(ComplexVector v, double tol = default_tolerances.unit_norm)
        : v_(std::move(v)) {
        if (v_.size() == 0 || !v_.allFinite()) {
            throw ConfigError("vector state must be non-empty and finite");
        }
        const double n = v_.norm();
        if (!(std::abs(n - 1.0) <= tol)) {
            throw ConfigError("vector state is not normalized: ||v|| = " + std::to_string(n));
        }
    }

    static VectorState normalized(const ComplexVector &v) {
        const double n = v.norm();
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw ConfigError("cannot normalize a zero or non-finite vector");
        }
        return VectorState(v / n);
    }

    static VectorState basis(Eigen::Index dim, Eigen::Index i) {
        ComplexVector e = ComplexVector::Zero(dim);
        e(i) = 1.0;
        return VectorState(std::move(e));
    }

    [[nodiscard]] Eigen::Index dim() const noexcept { return v_.size(); }
    [[nodiscard]] const ComplexVector &vector() const noexcept { return v_; }

  private:
    ComplexVector v_;
};

/// n self-adjoint observables of a common dimension with ||T_j|| <= M.
class OperatorTuple {
  public:
    OperatorTuple() = default;

    /// Bound defaults to max(1, max_j ||T_j||).
    explicit OperatorTuple(std::vector<HermitianMatrix> ops) : ops_(std::move(ops)) {
        validate_dims();
        bound_ = 1.0;
        for (const auto &t : ops_) {
            bound_ = std::max(bound_, spectral_radius(t));
        }
    }

    OperatorTuple(std::vector<HermitianMatrix> ops, double bound,
                  double slack = default_tolerances.norm_bound)
        : ops_(std::move(ops)), bound_(bound) {
        validate_dims();
        if (!(bound > 0.0) || !std::isfinite(bound)) {
            throw ConfigError("norm bound M must be positive");
        }
        for (std::size_t j = 0; j < ops_.size(); ++j) {
            const double nrm = spectral_radius(ops_[j]);
            if (nrm > bound + slack) {
                throw ConfigError("observable " + std::to_string(j) + " has norm " +
                                  std::to_string(nrm) + " > bound " + std::to_string(bound));
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return ops_.size(); }
    [[nodiscard]] Eigen::Index dim() const noexcept { return ops_.front().dim(); }
    [[nodiscard]] double bound() const noexcept { return bound_; }
    [[nodiscard]] const HermitianMatrix &operator[](std::size_t j) const { return ops_[j]; }
    [[nodiscard]] const std::vector<HermitianMatrix> &ops() const noexcept { return ops_; }

  private:
    void validate_dims() const {
        if (ops_.empty()) {
            throw ConfigError("operator tuple needs at least one observable");
        }
        const auto d = ops_.front().dim();
        if (d < 1) {
            throw ConfigError("operator tuple has zero dimension");
        }
        for (std::size_t j = 1; j < ops_.size(); ++j) {
            if (ops_[j].dim() != d) {
                throw ConfigError("observable " + std::to_string(j) + " has dimension " +
                                  std::to_string(ops_[j].dim()) + ", expected " +
                                  std::to_string(d));
            }
        }
    }

    std::vector<HermitianMatrix> ops_;
    double bound_ = 1.0;
};

namespace detail {
inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char *what) {
    if (a != b) {
        throw ConfigError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
    }
}
} // namespace detail

/// Re <Tv, v>. The imaginary part is checked to vanish.
inline double expectation(const HermitianMatrix &t, const VectorState &s) {
    detail::require_same_dim(t.dim(), s.dim(), "expectation");
    const Complex z = s.vector().dot(t.matrix() * s.vector());
    const double scale = std::max(1.0, t.matrix().cwiseAbs().maxCoeff() * t.dim());
    if (std::abs(z.imag()) > default_tolerances.imag_expectation * scale) {
        throw NumericalError("expectation has imaginary part " + std::to_string(z.imag()));
    }
    return z.real();
}

struct VarianceSd {
    double var = 0.0;
    double sd = 0.0;
};

/**
 * var = ||(T - exp I) v||^2, cross-checked against ||Tv||^2 - exp^2.
 * Negative rounding residue is clamped to zero.
 */
inline VarianceSd variance_sd(const HermitianMatrix &t, const VectorState &s) {
    detail::require_same_dim(t.dim(), s.dim(), "variance_sd");
    const ComplexVector tv = t.matrix() * s.vector();
    const Complex z = s.vector().dot(tv);
    const double e = z.real();
    const double var_centered = (tv - e * s.vector()).squaredNorm();
    const double var_moment = tv.squaredNorm() - e * e;
    const double scale = std::max(1.0, tv.squaredNorm());
    if (std::abs(var_centered - var_moment) > default_tolerances.variance_paths * scale) {
        throw NumericalError("variance formulas disagree: " + std::to_string(var_centered) +
                             " vs " + std::to_string(var_moment));
    }
    const double var = std::max(0.0, var_centered);
    return {var, std::sqrt(var)};
}

struct MeasurementReport {
    std::vector<double> exp;
    std::vector<double> var;
    std::vector<double> sd;

    [[nodiscard]] double max_sd() const {
        return sd.empty() ? 0.0 : *std::max_element(sd.begin(), sd.end());
    }
};

inline MeasurementReport measure(const OperatorTuple &tuple, const VectorState &s) {
    detail::require_same_dim(tuple.dim(), s.dim(), "measure");
    MeasurementReport r;
    for (const auto &t : tuple.ops()) {
        const auto [var, sd] = variance_sd(t, s);
        r.exp.push_back(expectation(t, s));
        r.var.push_back(var);
        r.sd.push_back(sd);
    }
    return r;
}

/// Witness that a state is (or is not) in AMU({T_j}; sigma) near lambda.
struct AmuCertificate {
    Point lambda;
    VectorState state;
    MeasurementReport report;
    double sigma = 0.0;
    double eps = 0.0;
    bool amu_member = false;        ///< max_j sd_j < sigma
    bool expectation_close = false; ///< max_j |exp_j - lambda_j| < eps

    [[nodiscard]] double max_sd() const { return report.max_sd(); }

    [[nodiscard]] double max_expectation_gap() const {
        double g = 0.0;
        for (std::size_t j = 0; j < lambda.size(); ++j) {
            g = std::max(g, std::abs(report.exp[j] - lambda[j]));
        }
        return g;
    }
};

inline AmuCertificate amu_check(const OperatorTuple &tuple, const VectorState &s,
                                const Point &lambda, double sigma, double eps) {
    if (lambda.size() != tuple.size()) {
        throw ConfigError("amu_check: lambda has " + std::to_string(lambda.size()) +
                          " coordinates, tuple has " + std::to_string(tuple.size()) +
                          " observables");
    }
    if (!(sigma > 0.0) || !(eps > 0.0)) {
        throw ConfigError("amu_check: sigma and eps must be positive");
    }
    AmuCertificate c{lambda, s, measure(tuple, s), sigma, eps};
    c.amu_member = c.max_sd() < sigma;
    c.expectation_close = c.max_expectation_gap() < eps;
    return c;
}

inline ComplexMatrix commutator(const HermitianMatrix &a, const HermitianMatrix &b) {
    return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

/// Symmetric matrix of ||[T_i, T_j]||, zero diagonal.
inline RealMatrix commutator_profile(const OperatorTuple &tuple) {
    const auto n = static_cast<Eigen::Index>(tuple.size());
    RealMatrix p = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            p(i, j) = p(j, i) = operator_norm(commutator(tuple[i], tuple[j]));
        }
    }
    return p;
}

} // namespace amu
