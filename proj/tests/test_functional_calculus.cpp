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

#include <thread>

#include <amu/functional_calculus.hpp>
#include <amu/models_io.hpp>

#include "helpers.hpp"

using namespace amu;
using Catch::Matchers::WithinAbs;

TEST_CASE("bump_eval is the exact trapezoid", "[functional]") {
    const BumpFunction b{0.0, 1.0};
    CHECK(bump_eval(b, 0.75) == 1.0);
    CHECK(bump_eval(b, 1.0) == 0.0);
    CHECK(bump_eval(b, 0.875) == 0.5);
    CHECK(bump_eval(b, -0.875) == 0.5);
    CHECK(bump_eval(b, 0.0) == 1.0);
    CHECK(bump_eval(b, 3.0) == 0.0);
    const BumpFunction c{0.5, 0.4};
    CHECK_THAT(c(0.5 + 0.35), WithinAbs(0.5, 1e-15));
    CHECK_THAT(c(0.5 - 0.32), WithinAbs(0.8, 1e-12));
    for (int i = -200; i <= 200; ++i) {
        const double t = i / 100.0;
        CHECK(c(t) >= 0.0);
        CHECK(c(t) <= 1.0);
    }
}

TEST_CASE("apply_function", "[functional]") {
    const auto a = testing::random_hermitian(8, 11);
    SECTION("identity function") {
        const auto id = apply_function([](double t) { return t; }, a);
        CHECK((id.matrix() - a.matrix()).norm() <= 1e-9);
    }
    SECTION("square equals the matrix product") {
        const auto sq = apply_function([](double t) { return t * t; }, a);
        CHECK((sq.matrix() - a.matrix() * a.matrix()).norm() <= 1e-9);
    }
    SECTION("bump at an eigenvalue of a diagonal matrix is its spectral projection") {
        RealVector d(5);
        d << 0.1, -0.5, 0.1, 0.9, 0.1;
        const auto p = apply_function(BumpFunction{0.1, 0.3}, HermitianMatrix::from_real_diagonal(d));
        RealVector expected(5);
        expected << 1, 0, 1, 0, 1;
        CHECK((p.matrix() - ComplexMatrix(expected.cast<Complex>().asDiagonal())).norm() <= 1e-12);
    }
    SECTION("composition on monomials") {
        const auto cube = [](double t) { return t * t * t; };
        const auto sq = [](double t) { return t * t; };
        const auto lhs = apply_function([&](double t) { return cube(sq(t)); }, a);
        const auto rhs = apply_function(cube, apply_function(sq, a));
        CHECK((lhs.matrix() - rhs.matrix()).norm() <= 1e-8 * std::max(1.0, lhs.matrix().norm()));
    }
}

TEST_CASE("theta_product basics", "[functional]") {
    const auto t = testing::diagonal_tuple({{0.0, 0.5, -0.5, 0.9}, {0.2, 0.2, -0.7, 0.0}});
    SECTION("joint eigenvalue gives norm 1") {
        const auto th = theta_product(t, {0.5, 0.2}, 0.3);
        CHECK_THAT(operator_norm(th.value), WithinAbs(1.0, 1e-12));
        CHECK(witness_test(th, VectorState::basis(4, 1), 0.3));
    }
    SECTION("every coordinate far from every eigenvalue gives zero") {
        const auto th = theta_product(t, {-0.2, 0.6}, 0.15);
        CHECK(th.value.cwiseAbs().maxCoeff() == 0.0);
        CHECK_FALSE(witness_test(th, VectorState::basis(4, 0), 0.15));
    }
    SECTION("n = 1 reduces to apply_function") {
        RealVector d(4);
        d << 0.0, 0.5, -0.5, 0.9;
        const OperatorTuple one({HermitianMatrix::from_real_diagonal(d)});
        const auto th = theta_product(one, {0.4}, 0.2);
        const auto f = apply_function(BumpFunction{0.4, 0.2}, one[0]);
        CHECK((th.value - f.matrix()).norm() <= 1e-12);
    }
    SECTION("bad width") {
        REQUIRE_THROWS_AS(theta_product(t, {0.0, 0.0}, 1.0), ConfigError);
        REQUIRE_THROWS_AS(theta_product(t, {0.0}, 0.5), ConfigError);
    }
}

TEST_CASE("theta_product keeps factor order", "[functional]") {
    const OperatorTuple t({testing::random_hermitian(6, 1, 0.5), testing::random_hermitian(6, 2, 0.5)});
    const ThetaEvaluator ev(t);
    const auto th = ev.product({0.1, -0.2}, 0.6);
    const ComplexMatrix f1 = *ev.factor(0, 0.1, 0.6);
    const ComplexMatrix f2 = *ev.factor(1, -0.2, 0.6);
    CHECK((th.value - f1 * f2).norm() <= 1e-14);
    CHECK((f1 * f2 - f2 * f1).norm() > 1e-6); // order matters for this pair
}

TEST_CASE("two routes to ||Theta|| agree", "[functional][property]") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const Eigen::Index dim = 4 + static_cast<Eigen::Index>(seed % 9);
        const std::size_t n = 1 + seed % 3;
        std::vector<HermitianMatrix> ops;
        for (std::size_t j = 0; j < n; ++j) {
            ops.push_back(testing::random_hermitian(dim, seed * 10 + j, 0.4));
        }
        const OperatorTuple t(std::move(ops));
        const ThetaEvaluator ev(t);
        SplitMix64 rng(seed);
        for (int trial = 0; trial < 5; ++trial) {
            Point xi;
            for (std::size_t j = 0; j < n; ++j) {
                xi.push_back(rng.uniform(-1.0, 1.0));
            }
            const double eta = rng.uniform(0.2, 0.9);
            const auto th = ev.product(xi, eta);
            const double direct = operator_norm(th.value);
            CHECK_THAT(ev.norm(xi, eta), WithinAbs(direct, 1e-9));
            CHECK(direct <= 1.0 + 1e-9);
            // submultiplicativity
            double smallest = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                smallest = std::min(smallest, operator_norm(*ev.factor(j, xi[j], eta)));
            }
            CHECK(direct <= smallest + 1e-9);
        }
    }
}

TEST_CASE("shift pair theta norm near the circle", "[functional]") {
    const auto t = shift_pair(128);
    const auto th = theta_product(t, {1.0, 0.0}, 0.25);
    CHECK(operator_norm(th.value) >= 1.0 - 0.25);
}

TEST_CASE("witness_test certifies the norm bound", "[functional][property]") {
    const OperatorTuple t({testing::random_hermitian(10, 5, 0.3), testing::random_hermitian(10, 6, 0.3)});
    const ThetaEvaluator ev(t);
    SplitMix64 rng(77);
    int passes = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const Point xi{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
        const double eta = rng.uniform(0.3, 0.9);
        const auto th = ev.product(xi, eta);
        const auto x = testing::random_state(10, 1000 + trial);
        if (witness_test(th, x, eta)) {
            ++passes;
            CHECK(operator_norm(th.value) >= 1.0 - eta);
        }
    }
    // the top right-singular vector need not pass, but the test is satisfiable
    const auto th = ev.product({0.0, 0.0}, 0.9);
    Eigen::JacobiSVD<ComplexMatrix> svd(th.value, Eigen::ComputeFullV);
    const auto top = VectorState::normalized(svd.matrixV().col(0));
    if (witness_test(th, top, 0.9)) {
        CHECK(svd.singularValues()(0) >= 0.1);
    }
    CHECK(passes > 0);
    SECTION("vector orthogonal to the range fails") {
        const auto d = testing::diagonal_tuple({{0.0, 0.8}, {0.0, 0.8}});
        const auto p = theta_product(d, {0.0, 0.0}, 0.3);
        CHECK_FALSE(witness_test(p, VectorState::basis(2, 1), 0.3));
    }
}

TEST_CASE("factor cache under concurrent readers", "[functional]") {
    const auto t = shift_pair(32);
    const ThetaEvaluator ev(t);
    const ComplexMatrix reference = *ev.factor(0, 0.5, 0.25);
    std::vector<std::thread> pool;
    std::vector<double> diffs(8, 1.0);
    for (int w = 0; w < 8; ++w) {
        pool.emplace_back([&, w] {
            double worst = 0.0;
            for (int i = 0; i < 20; ++i) {
                const double c = (i % 5) * 0.25;
                const auto j = static_cast<std::size_t>((i / 5) % 2);
                const auto f = ev.factor(j, c, 0.25);
                if (c == 0.5 && j == 0) {
                    worst = std::max(worst, (*f - reference).norm());
                }
            }
            diffs[w] = worst;
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    for (double d : diffs) {
        CHECK(d == 0.0);
    }
    CHECK(ev.cached_factors() == 10);
}
