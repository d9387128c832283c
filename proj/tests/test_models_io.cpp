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
#include <cstdio>
#include <filesystem>
#include <numbers>

#include <amu/models_io.hpp>

#include "helpers.hpp"

using namespace amu;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;

namespace {

std::string temp_path(const std::string &name) {
    return (std::filesystem::temp_directory_path() / ("amu_models_io_" + name)).string();
}

bool same_entries(const OperatorTuple &a, const OperatorTuple &b) {
    if (a.size() != b.size() || a.dim() != b.dim() || a.bound() != b.bound()) {
        return false;
    }
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j].matrix() != b[j].matrix()) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("shift pair matches the hand computation", "[models]") {
    const auto t = shift_pair(2);
    const Complex i(0.0, 1.0);
    ComplexMatrix a1(2, 2), a2(2, 2);
    a1 << 0.0, 0.5, 0.5, 0.0;
    // S = e_2 e_1^*, A2 = -(S - S^*)/(2i)
    a2 << 0.0, -0.5 * i, 0.5 * i, 0.0;
    CHECK(t[0].matrix() == a1);
    CHECK(t[1].matrix() == a2);
    for (Eigen::Index dim : {3, 8, 65}) {
        CHECK(same_entries(shift_pair(dim), testing::hand_shift_pair(dim)));
    }
}

TEST_CASE("generator families", "[models]") {
    SECTION("commuting diag has a zero commutator profile") {
        const auto t = generate({Family::commuting_diag, 12, 5, 3});
        CHECK(t.size() == 3);
        CHECK(commutator_profile(t).maxCoeff() == 0.0);
    }
    SECTION("clock and shift") {
        for (Eigen::Index dim : {4, 16, 32}) {
            const auto t = clock_shift_triple(dim);
            REQUIRE(t.size() == 3);
            const double bound = 2.0 * std::sin(std::numbers::pi / static_cast<double>(dim));
            CHECK(commutator_profile(t).maxCoeff() <= bound + 1e-12);
            // U = T0 + i T1 is the clock and unitary
            const ComplexMatrix u = t[0].matrix() + Complex(0.0, 1.0) * t[1].matrix();
            CHECK((u.adjoint() * u - ComplexMatrix::Identity(dim, dim)).norm() <= 1e-12);
        }
    }
    SECTION("perturbed commuting stays within the perturbation of a commuting tuple") {
        ModelSpec spec{Family::perturbed_commuting, 16, 11, 2, 0.01};
        const auto t = generate(spec);
        const auto c = commutator_profile(t)(0, 1);
        CHECK(c > 0.0);
        // ||[A+E, B+F]|| <= 2(||A|| ||F|| + ||E|| ||B||) + 2||E|| ||F||
        CHECK(c <= 2.0 * (1.0 * 0.01 + 0.01 * 1.0) + 2.0 * 1e-4 + 1e-12);
        spec.perturbation = -1.0;
        REQUIRE_THROWS_AS(generate(spec), ConfigError);
    }
    SECTION("random hermitian perturbation has the requested operator norm") {
        SplitMix64 rng(4);
        const ComplexMatrix e = detail::random_hermitian(10, 0.25, rng);
        CHECK_THAT(operator_norm(e), WithinAbs(0.25, 1e-12));
    }
    SECTION("determinism") {
        for (auto f : {Family::commuting_diag, Family::perturbed_commuting, Family::clock_shift_triple}) {
            const ModelSpec spec{f, 9, 42, 2, 0.05};
            CHECK(tuple_to_binary(generate(spec)) == tuple_to_binary(generate(spec)));
        }
        CHECK(tuple_to_binary(generate({Family::commuting_diag, 9, 1})) !=
              tuple_to_binary(generate({Family::commuting_diag, 9, 2})));
    }
    SECTION("bad specs") {
        REQUIRE_THROWS_AS(generate({Family::shift_pair, 1}), ConfigError);
        REQUIRE_THROWS_AS(generate({Family::commuting_diag, 4, 0, 0}), ConfigError);
    }
}

TEST_CASE("family names", "[models]") {
    CHECK(parse_family("shift") == Family::shift_pair);
    CHECK(parse_family("clock") == Family::clock_shift_triple);
    CHECK(family_name(parse_family("perturbed")) == "perturbed");
    REQUIRE_THROWS_WITH(parse_family("torus"), ContainsSubstring("shift") && ContainsSubstring("clock"));
}

TEST_CASE("tuple persistence", "[models]") {
    SECTION("round trips are lossless") {
        const auto shift = shift_pair(64);
        const auto random = generate({Family::perturbed_commuting, 7, 3, 3, 0.1});
        for (const auto &t : {shift, random}) {
            CHECK(same_entries(parse_tuple(tuple_to_json(t).dump()), t));
            CHECK(same_entries(parse_tuple(tuple_to_binary(t)), t));
            const auto path = temp_path("roundtrip.bin");
            save_tuple(t, path, TupleFormat::binary);
            CHECK(same_entries(load_tuple(path), t));
            save_tuple(t, path, TupleFormat::json, {{"note", "x"}});
            CHECK(same_entries(load_tuple(path), t));
            std::filesystem::remove(path);
        }
    }
    SECTION("shortest decimal formatting round-trips") {
        SplitMix64 rng(1);
        for (int i = 0; i < 1000; ++i) {
            const double x = rng.normal() * std::pow(10.0, rng.uniform(-20.0, 20.0));
            CHECK(std::stod(format_double(x)) == x);
        }
    }
    SECTION("non-Hermitian observable is rejected") {
        auto j = tuple_to_json(shift_pair(3));
        j["ops"][1]["re"][0][2] = 0.25;
        REQUIRE_THROWS_WITH(parse_tuple(j.dump()),
                            ContainsSubstring("observable 1") && ContainsSubstring("max |A - A^*|"));
    }
    SECTION("dimension mismatch is rejected") {
        auto j = tuple_to_json(shift_pair(3));
        j["dim"] = 4;
        REQUIRE_THROWS_AS(parse_tuple(j.dump()), ConfigError);
        auto k = tuple_to_json(shift_pair(3));
        k["ops"][0]["im"][2].erase(0);
        REQUIRE_THROWS_WITH(parse_tuple(k.dump()), ContainsSubstring("row 2"));
        auto m = tuple_to_json(shift_pair(3));
        m["n"] = 3;
        REQUIRE_THROWS_AS(parse_tuple(m.dump()), ConfigError);
    }
    SECTION("malformed JSON reports the byte offset") {
        const std::string text = R"({"n": 1, "dim": 2, "M": 1, "ops": [ oops ]})";
        try {
            parse_tuple(text);
            FAIL("expected a parse error");
        } catch (const ParseError &e) {
            CHECK(e.byte_offset() == text.find("oops") + 1);
            CHECK_THAT(std::string(e.what()), ContainsSubstring("byte"));
        }
    }
    SECTION("truncated binary is rejected") {
        auto bin = tuple_to_binary(shift_pair(4));
        bin.resize(bin.size() - 3);
        REQUIRE_THROWS_AS(parse_tuple(bin), ParseError);
        REQUIRE_THROWS_AS(load_tuple(temp_path("does_not_exist")), ConfigError);
    }
}

TEST_CASE("spectrum CSV", "[models]") {
    const auto t = testing::diagonal_tuple({{0.0, 0.5}, {0.0, -0.5}, {0.2, 0.2}});
    const auto r = scan(t, 0.5);
    const auto csv = spectrum_csv(r);
    CHECK_THAT(csv, StartsWith("coord_1,coord_2,coord_3,theta_norm\n"));
    CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == r.accepted.size() + 1);
}
