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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <amu/essential.hpp>
#include <amu/models_io.hpp>

#include "helpers.hpp"

using namespace amu;
using Catch::Matchers::WithinAbs;

namespace {

double distance_to_circle(const Point &p) { return std::abs(std::hypot(p[0], p[1]) - 1.0); }

/// <Q v, v> for the block of @p t on window w, with v given on the window.
double block_energy(const OperatorTuple &t, const Window &w, const Point &lambda, const ComplexVector &v) {
    double e = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        ComplexMatrix b = t[j].matrix().block(w.begin, w.begin, w.length(), w.length());
        b.diagonal().array() -= lambda[j];
        e += (b * v).squaredNorm();
    }
    return e;
}

} // namespace

TEST_CASE("compression windows", "[essential]") {
    CHECK(compression_window(10, 2, WindowKind::interior).begin == 2);
    CHECK(compression_window(10, 2, WindowKind::interior).end == 8);
    CHECK(compression_window(10, 2, WindowKind::one_sided).end == 10);
    REQUIRE_THROWS_AS(compression_window(10, 10, WindowKind::one_sided), ConfigError);
    REQUIRE_THROWS_AS(compression_window(10, 5, WindowKind::interior), ConfigError);
    REQUIRE_THROWS_AS(compression_window(10, -1, WindowKind::interior), ConfigError);
    CHECK(sequence_window(512, 32).end == 64);
    CHECK(sequence_window(100, 40).end == 60);
    REQUIRE_THROWS_AS(sequence_window(10, 0), ConfigError);

    const auto t = testing::random_hermitian(9, 3);
    const auto tc = tail_compression(OperatorTuple({t}), 2, WindowKind::interior);
    CHECK(tc.tuple.dim() == 5);
    CHECK((tc.tuple[0].matrix() - t.matrix().block(2, 2, 5, 5)).norm() == 0.0);
}

TEST_CASE("tail_commutator_decay", "[essential]") {
    SECTION("commuting tuple gives zeros") {
        const auto t = testing::diagonal_tuple({{0.1, 0.2, 0.3, 0.4}, {1.0, 0.0, -1.0, 0.5}});
        for (const auto &d : tail_commutator_decay(t, {0, 1, 3})) {
            CHECK(d.norm == 0.0);
        }
    }
    SECTION("shift pair keeps the far boundary term") {
        for (Eigen::Index dim : {4, 17, 256}) {
            const auto decay = tail_commutator_decay(shift_pair(dim), {0, 1, dim / 2, dim - 1});
            for (const auto &d : decay) {
                CHECK_THAT(d.norm, WithinAbs(0.5, 1e-10));
            }
        }
    }
    SECTION("rank-one commutator supported on the first column") {
        // [D, P] with P = e_0 u^* + u e_0^* touches only column/row 0 and u's support
        const Eigen::Index dim = 8;
        ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
        p(0, 1) = p(1, 0) = 1.0;
        const OperatorTuple t({HermitianMatrix::symmetrized(p),
                               HermitianMatrix::from_real_diagonal(RealVector::LinSpaced(dim, 0.0, 1.0))});
        const auto decay = tail_commutator_decay(t, {0, 1, 2, 5});
        CHECK(decay[0].norm > 0.1);
        CHECK(decay[1].norm > 0.1);
        CHECK(decay[2].norm == 0.0);
        CHECK(decay[3].norm == 0.0);
    }
    REQUIRE_THROWS_AS(tail_commutator_decay(shift_pair(8), {8}), ConfigError);
}

TEST_CASE("essential spectrum estimate", "[essential]") {
    SECTION("isolated eigenvalue in the first basis vector disappears") {
        std::vector<double> a(24), b(24);
        for (std::size_t i = 0; i < 24; ++i) {
            a[i] = -0.5 + 0.3 * static_cast<double>(i % 2);
            b[i] = 0.2;
        }
        a[0] = 0.9;
        b[0] = -0.8;
        const auto t = testing::diagonal_tuple({a, b});
        const auto full = scan(t, 0.2);
        CHECK(full.covers({0.9, -0.8}));
        const auto est = essential_spectrum_estimate(t, 0.2, {1, 4});
        for (const auto &level : est.levels) {
            CHECK_FALSE(level.spectrum.covers({0.9, -0.8}));
            CHECK(level.spectrum.covers({-0.5, 0.2}));
            CHECK(level.spectrum.covers({-0.2, 0.2}));
        }
        REQUIRE(est.stability.has_value());
        CHECK(*est.stability == 0.0);
        CHECK(est.stabilized_within_pitch);
    }
    SECTION("identity tuple collapses to a single point") {
        const OperatorTuple t({HermitianMatrix::identity(12), HermitianMatrix::identity(12)});
        const auto est = essential_spectrum_estimate(t, 0.3, {1, 3}, {WindowKind::one_sided, {}});
        for (const auto &p : est.stabilized) {
            CHECK(euclidean(p, {1.0, 1.0}) <= 0.3 * std::sqrt(2.0));
        }
        CHECK(est.levels.front().spectrum.covers({1.0, 1.0}));
    }
    SECTION("shift pair dim 512 stabilizes on the circle") {
        ScanOptions so;
        so.threads = 2;
        const auto est = essential_spectrum_estimate(shift_pair(512), 0.25, {32, 64, 128},
                                                     {WindowKind::interior, so});
        REQUIRE(est.levels.size() == 3);
        for (const auto &level : est.levels) {
            REQUIRE_FALSE(level.spectrum.accepted.empty());
            for (const auto &p : level.spectrum.accepted_points()) {
                CHECK(distance_to_circle(p) <= std::sqrt(2.0) * 0.25);
            }
        }
        REQUIRE(est.stability.has_value());
        CHECK(*est.stability <= est.levels.back().spectrum.grid.pitch() + 1e-12);
        CHECK(est.stabilized_within_pitch);
        CHECK(est.notes.empty());
    }
    REQUIRE_THROWS_AS(essential_spectrum_estimate(shift_pair(16), 0.3, {2, 2}), ConfigError);
    REQUIRE_THROWS_AS(essential_spectrum_estimate(shift_pair(16), 0.3, {2, 8}), ConfigError);
}

TEST_CASE("amu_sequence", "[essential]") {
    const auto t = shift_pair(512);
    const std::vector<Eigen::Index> cuts{32, 64, 128};
    for (double th : {0.0, std::numbers::pi / 2.0}) {
        const Point lambda{std::cos(th), std::sin(th)};
        const auto seq = amu_sequence(t, lambda, cuts, {0.3, 0.2, 0.15});
        REQUIRE(seq.steps.size() == 3);
        for (std::size_t i = 1; i < seq.max_sd_trend.size(); ++i) {
            CHECK(seq.max_sd_trend[i] < seq.max_sd_trend[i - 1]);
        }
        CHECK(seq.max_sd_trend.back() <= 0.15);
        for (const auto &step : seq.steps) {
            const auto &v = step.certificate.state.vector();
            CHECK(v.head(step.window.begin).norm() == 0.0);
            CHECK(v.tail(512 - step.window.end).norm() == 0.0);
            const auto wave = testing::windowed_plane_wave(step.window.length(), 0, step.window.length(), th);
            double local_var = 0.0;
            for (std::size_t j = 0; j < 2; ++j) {
                const double full = step.certificate.report.sd[j];
                const double local = step.sd_compressed[j];
                CHECK(full >= local - 1e-12);
                CHECK(full - local <= step.boundary_norm[j] + 1e-12);
                local_var += local * local;
            }
            CHECK(local_var <= block_energy(t, step.window, lambda, wave.vector()) + 1e-10);
        }
        CHECK(seq.warnings.empty());
    }
    SECTION("commuting tuple has zero sd at a joint eigenvalue") {
        const auto d = testing::diagonal_tuple({std::vector<double>(16, 0.25), std::vector<double>(16, -0.5)});
        const auto seq = amu_sequence(d, {0.25, -0.5}, {2, 4}, {1e-6});
        for (const auto &step : seq.steps) {
            CHECK(step.certificate.max_sd() <= 1e-12);
            CHECK(step.certificate.amu_member);
        }
    }
    SECTION("warning when lambda is off the stabilized estimate") {
        const auto small = shift_pair(64);
        const auto est = essential_spectrum_estimate(small, 0.3, {4, 8});
        const auto seq = amu_sequence(small, {0.0, 0.0}, {8}, {0.5}, &est);
        CHECK(seq.warnings.size() == 1);
    }
    REQUIRE_THROWS_AS(amu_sequence(t, {1.0, 0.0}, cuts, {0.1, 0.2}), ConfigError);
}
