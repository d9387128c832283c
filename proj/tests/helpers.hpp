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

// Test-only generators and oracles. Nothing here calls into the code path it
// is used to check.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <amu/linalg.hpp>
#include <amu/observables.hpp>
#include <amu/random.hpp>

namespace amu::testing {

inline ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    SplitMix64 rng(seed);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = rng.uniform(-1.0, 1.0);
            const double im = rng.uniform(-1.0, 1.0);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

inline HermitianMatrix random_hermitian(Eigen::Index dim, std::uint64_t seed, double scale = 1.0) {
    const ComplexMatrix g = random_complex(dim, dim, seed);
    return HermitianMatrix::symmetrized(scale * (g + g.adjoint()) / 2.0);
}

inline VectorState random_state(Eigen::Index dim, std::uint64_t seed) {
    return VectorState::normalized(random_complex(dim, 1, seed).col(0));
}

/// <Tv, v> by explicit double loop.
inline Complex naive_quadratic_form(const ComplexMatrix &t, const ComplexVector &v) {
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        for (Eigen::Index j = 0; j < t.cols(); ++j) {
            acc += std::conj(v(i)) * t(i, j) * v(j);
        }
    }
    return acc;
}

/// Truncated unilateral shift pair, built entry by entry:
/// A1 = (S + S^*)/2 has 1/2 on both off-diagonals; A2 = -(S - S^*)/(2i) has
/// -i/2 above and +i/2 below the diagonal.
inline OperatorTuple hand_shift_pair(Eigen::Index dim) {
    ComplexMatrix a1 = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix a2 = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i + 1 < dim; ++i) {
        a1(i, i + 1) = a1(i + 1, i) = 0.5;
        a2(i, i + 1) = Complex(0.0, -0.5);
        a2(i + 1, i) = Complex(0.0, 0.5);
    }
    return OperatorTuple({HermitianMatrix(a1), HermitianMatrix(a2)}, 1.0);
}

/// Normalized triangular envelope times a plane wave exp(i theta k), supported
/// on [begin, begin + width).
inline VectorState windowed_plane_wave(Eigen::Index dim, Eigen::Index begin, Eigen::Index width,
                                       double theta) {
    ComplexVector v = ComplexVector::Zero(dim);
    const double half = static_cast<double>(width) / 2.0;
    for (Eigen::Index k = 0; k < width; ++k) {
        const double x = static_cast<double>(k) + 0.5;
        const double env = 1.0 - std::abs(x - half) / half;
        v(begin + k) = env * std::polar(1.0, theta * static_cast<double>(begin + k));
    }
    return VectorState::normalized(v);
}

/// Joint diagonal tuple from explicit columns of eigenvalues.
inline OperatorTuple diagonal_tuple(const std::vector<std::vector<double>> &diag) {
    std::vector<HermitianMatrix> ops;
    for (const auto &d : diag) {
        ops.push_back(HermitianMatrix::from_real_diagonal(
            Eigen::Map<const RealVector>(d.data(), static_cast<Eigen::Index>(d.size()))));
    }
    return OperatorTuple(std::move(ops));
}

} // namespace amu::testing
