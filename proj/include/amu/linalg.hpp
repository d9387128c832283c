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
 * Dense complex linear algebra used by every other module: Hermitian
 * eigendecomposition, operator norm, orthonormalization.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace amu {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline bool all_finite(const ComplexMatrix &a) {
    return a.real().allFinite() && a.imag().allFinite();
}

/// Largest entrywise modulus of A - A^*.
inline double max_asymmetry(const ComplexMatrix &a) {
    if (a.rows() == 0) {
        return 0.0;
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/**
 * A self-adjoint matrix. Stored symmetrized as (A + A^*)/2, so the stored
 * entries satisfy A = A^* exactly.
 */
class HermitianMatrix {
  public:
    HermitianMatrix() = default;

    /// Checks squareness, finiteness and ||A - A^*||_max <= tol.
    explicit HermitianMatrix(const ComplexMatrix &a,
                             double tol = default_tolerances.hermitian_asymmetry) {
        validate_shape(a);
        const double asym = max_asymmetry(a);
        if (!(asym <= tol)) {
            throw ConfigError("matrix is not Hermitian: max |A - A^*| = " +
                              std::to_string(asym));
        }
        m_ = (a + a.adjoint()) / 2.0;
    }

    /// Symmetrizes without an asymmetry check. For results of computations
    /// that are Hermitian up to rounding.
    static HermitianMatrix symmetrized(const ComplexMatrix &a) {
        validate_shape(a);
        HermitianMatrix h;
        h.m_ = (a + a.adjoint()) / 2.0;
        return h;
    }

    static HermitianMatrix from_real_diagonal(const RealVector &d) {
        HermitianMatrix h;
        h.m_ = d.cast<Complex>().asDiagonal();
        if (!all_finite(h.m_)) {
            throw ConfigError("non-finite diagonal entry");
        }
        return h;
    }

    static HermitianMatrix identity(Eigen::Index dim) {
        HermitianMatrix h;
        h.m_ = ComplexMatrix::Identity(dim, dim);
        return h;
    }

    [[nodiscard]] Eigen::Index dim() const noexcept { return m_.rows(); }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return m_; }
    [[nodiscard]] Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  private:
    static void validate_shape(const ComplexMatrix &a) {
        if (a.rows() != a.cols()) {
            throw ConfigError("matrix is not square: " + std::to_string(a.rows()) +
                              "x" + std::to_string(a.cols()));
        }
        if (!all_finite(a)) {
            throw ConfigError("matrix has non-finite entries");
        }
    }

    ComplexMatrix m_;
};

struct EigenDecomposition {
    RealVector eigenvalues;     ///< ascending
    ComplexMatrix eigenvectors; ///< unitary, columns
};

inline EigenDecomposition eig_hermitian(const HermitianMatrix &a) {
    if (a.dim() < 1) {
        throw ConfigError("eig_hermitian: empty matrix");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        const double residual = solver.eigenvectors().allFinite()
                                    ? (a.matrix() * solver.eigenvectors() -
                                       solver.eigenvectors() *
                                           solver.eigenvalues().cast<Complex>().asDiagonal())
                                          .norm()
                                    : std::nan("");
        throw NumericalError("eig_hermitian: QR iteration did not converge (residual " +
                             std::to_string(residual) + ")");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues only, ascending.
inline RealVector eigvals_hermitian(const ComplexMatrix &a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigvals_hermitian: QR iteration did not converge");
    }
    return solver.eigenvalues();
}

/// Largest singular value, via the top eigenvalue of the smaller Gram matrix.
inline double operator_norm(const ComplexMatrix &a) {
    if (a.size() == 0) {
        return 0.0;
    }
    const ComplexMatrix gram =
        a.rows() < a.cols() ? ComplexMatrix(a * a.adjoint()) : ComplexMatrix(a.adjoint() * a);
    if (gram.rows() == 1) {
        return std::sqrt(std::max(0.0, gram(0, 0).real()));
    }
    const RealVector ev = eigvals_hermitian(gram);
    return std::sqrt(std::max(0.0, ev(ev.size() - 1)));
}

/// max |eigenvalue|; the Hermitian-only route to the operator norm.
inline double spectral_radius(const HermitianMatrix &a) {
    const RealVector ev = eigvals_hermitian(a.matrix());
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

/**
 * Orthonormalizes @p vectors in order (modified Gram-Schmidt with one
 * reorthogonalization pass). Throws ConfigError naming the first vector whose
 * component orthogonal to its predecessors has squared norm below
 * @p independence_tol relative to its own squared norm.
 */
inline std::vector<ComplexVector>
gram_schmidt(const std::vector<ComplexVector> &vectors,
             double independence_tol = default_tolerances.independence) {
    std::vector<ComplexVector> basis;
    basis.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const ComplexVector &v = vectors[i];
        if (!basis.empty() && v.size() != basis.front().size()) {
            throw ConfigError("gram_schmidt: vector " + std::to_string(i) +
                              " has mismatched length");
        }
        const double n0 = v.squaredNorm();
        if (!(n0 > 0.0) || !v.allFinite()) {
            throw ConfigError("gram_schmidt: vector " + std::to_string(i) +
                              " is zero or non-finite");
        }
        ComplexVector w = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto &b : basis) {
                w -= b * b.dot(w);
            }
        }
        const double n1 = w.squaredNorm();
        if (n1 < independence_tol * n0) {
            throw ConfigError("gram_schmidt: vector " + std::to_string(i) +
                              " is linearly dependent on its predecessors");
        }
        basis.push_back(w / std::sqrt(n1));
    }
    return basis;
}

} // namespace amu
