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
 * Seeded model generators and tuple persistence.
 *
 * JSON tuple schema: {"n", "dim", "M", "ops": [{"re": [[...]], "im": [[...]]}],
 * optional "meta"}. Binary tuple layout (little-endian): "AMUT", u32 version
 * (1), u64 n, u64 dim, f64 M, then for each observable dim*dim (re, im) f64
 * pairs in row-major order.
 */

#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "observables.hpp"
#include "random.hpp"
#include "synthetic_spectrum.hpp"

namespace amu {

using json = nlohmann::json;

enum class Family { shift_pair, commuting_diag, perturbed_commuting, clock_shift_triple, custom_file };

inline const std::vector<std::pair<std::string, Family>> &family_names() {
    static const std::vector<std::pair<std::string, Family>> names{
        {"shift", Family::shift_pair},
        {"diag", Family::commuting_diag},
        {"perturbed", Family::perturbed_commuting},
        {"clock", Family::clock_shift_triple},
        {"file", Family::custom_file},
    };
    return names;
}

inline std::string family_list() {
    std::string s;
    for (const auto &[name, f] : family_names()) {
        s += (s.empty() ? "" : ", ") + name;
    }
    return s;
}

inline Family parse_family(const std::string &name) {
    static const std::vector<std::pair<std::string, Family>> aliases{
        {"shift_pair", Family::shift_pair},
        {"commuting_diag", Family::commuting_diag},
        {"perturbed_commuting", Family::perturbed_commuting},
        {"clock_shift_triple", Family::clock_shift_triple},
        {"custom_file", Family::custom_file},
    };
    for (const auto &table : {family_names(), aliases}) {
        for (const auto &[n, f] : table) {
            if (n == name) {
                return f;
            }
        }
    }
    throw ConfigError("unknown model family '" + name + "'; known families: " + family_list());
}

inline std::string family_name(Family f) {
    for (const auto &[n, g] : family_names()) {
        if (g == f) {
            return n;
        }
    }
    return "unknown";
}

struct ModelSpec {
    Family family = Family::shift_pair;
    Eigen::Index dim = 2;
    std::uint64_t seed = 0;
    std::size_t n = 2;           ///< observables, diag/perturbed only
    double perturbation = 0.0;   ///< operator norm of each perturbation, perturbed only
    double lo = -1.0;            ///< eigenvalue range, diag/perturbed only
    double hi = 1.0;
    std::string path;            ///< custom_file only
};

inline OperatorTuple load_tuple(const std::string &path);

namespace detail {

inline ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, SplitMix64 &rng) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

/// Haar-distributed unitary: Q from QR of a Gaussian matrix, phases fixed by R's diagonal.
inline ComplexMatrix random_unitary(Eigen::Index dim, SplitMix64 &rng) {
    const ComplexMatrix g = random_gaussian(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double a = std::abs(r(i, i));
        if (a > 0.0) {
            q.col(i) *= r(i, i) / a;
        }
    }
    return q;
}

/// Random Hermitian matrix scaled to operator norm @p size.
inline ComplexMatrix random_hermitian(Eigen::Index dim, double size, SplitMix64 &rng) {
    const ComplexMatrix g = random_gaussian(dim, dim, rng);
    ComplexMatrix h = (g + g.adjoint()) / 2.0;
    const double nrm = spectral_radius(HermitianMatrix::symmetrized(h));
    if (size == 0.0 || nrm == 0.0) {
        return ComplexMatrix::Zero(dim, dim);
    }
    return h * (size / nrm);
}

} // namespace detail

inline OperatorTuple shift_pair(Eigen::Index dim) {
    ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i + 1 < dim; ++i) {
        s(i + 1, i) = 1.0;
    }
    const ComplexMatrix a1 = (s + s.adjoint()) / 2.0;
    const ComplexMatrix a2 = -(s - s.adjoint()) / Complex(0.0, 2.0);
    return OperatorTuple({HermitianMatrix(a1), HermitianMatrix(a2)}, 1.0);
}

/// (Re U, Im U, (V + V^*)/2) for the clock U = diag(w^j) and cyclic shift V,
/// w = exp(2 pi i / dim), so that UV = w VU.
inline OperatorTuple clock_shift_triple(Eigen::Index dim) {
    ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
    ComplexMatrix v = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        u(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(dim));
        v((j + 1) % dim, j) = 1.0;
    }
    const ComplexMatrix re = (u + u.adjoint()) / 2.0;
    const ComplexMatrix im = (u - u.adjoint()) / Complex(0.0, 2.0);
    const ComplexMatrix hop = (v + v.adjoint()) / 2.0;
    return OperatorTuple({HermitianMatrix(re), HermitianMatrix(im), HermitianMatrix(hop)}, 1.0);
}

inline OperatorTuple generate(const ModelSpec &spec) {
    if (spec.family == Family::custom_file) {
        return load_tuple(spec.path);
    }
    if (spec.dim < 2) {
        throw ConfigError("model dimension must be >= 2");
    }
    if (!(spec.perturbation >= 0.0)) {
        throw ConfigError("perturbation size must be >= 0");
    }
    switch (spec.family) {
    case Family::shift_pair:
        return shift_pair(spec.dim);
    case Family::clock_shift_triple:
        return clock_shift_triple(spec.dim);
    case Family::commuting_diag:
    case Family::perturbed_commuting: {
        if (spec.n < 1) {
            throw ConfigError("need at least one observable");
        }
        if (!(spec.lo <= spec.hi)) {
            throw ConfigError("eigenvalue range must satisfy lo <= hi");
        }
        SplitMix64 rng(spec.seed);
        std::vector<RealVector> diags;
        for (std::size_t j = 0; j < spec.n; ++j) {
            RealVector d(spec.dim);
            for (Eigen::Index i = 0; i < spec.dim; ++i) {
                d(i) = rng.uniform(spec.lo, spec.hi);
            }
            diags.push_back(std::move(d));
        }
        std::vector<HermitianMatrix> ops;
        if (spec.family == Family::commuting_diag) {
            for (const auto &d : diags) {
                ops.push_back(HermitianMatrix::from_real_diagonal(d));
            }
            return OperatorTuple(std::move(ops));
        }
        const ComplexMatrix q = detail::random_unitary(spec.dim, rng);
        for (const auto &d : diags) {
            const ComplexMatrix t = q * d.cast<Complex>().asDiagonal() * q.adjoint() +
                                    detail::random_hermitian(spec.dim, spec.perturbation, rng);
            ops.push_back(HermitianMatrix::symmetrized(t));
        }
        return OperatorTuple(std::move(ops));
    }
    case Family::custom_file:
        break;
    }
    throw ConfigError("unknown model family");
}

/// Shortest decimal that round-trips.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline json tuple_to_json(const OperatorTuple &tuple, const json &meta = nullptr) {
    json j;
    j["n"] = tuple.size();
    j["dim"] = tuple.dim();
    j["M"] = tuple.bound();
    j["ops"] = json::array();
    for (const auto &t : tuple.ops()) {
        json re = json::array();
        json im = json::array();
        for (Eigen::Index r = 0; r < t.dim(); ++r) {
            json rr = json::array();
            json ii = json::array();
            for (Eigen::Index c = 0; c < t.dim(); ++c) {
                rr.push_back(t(r, c).real());
                ii.push_back(t(r, c).imag());
            }
            re.push_back(std::move(rr));
            im.push_back(std::move(ii));
        }
        j["ops"].push_back({{"re", std::move(re)}, {"im", std::move(im)}});
    }
    if (!meta.is_null()) {
        j["meta"] = meta;
    }
    return j;
}

inline OperatorTuple tuple_from_json(const json &j) {
    try {
        const auto n = j.at("n").get<std::size_t>();
        const auto dim = j.at("dim").get<Eigen::Index>();
        const auto bound = j.at("M").get<double>();
        const auto &ops = j.at("ops");
        if (!ops.is_array() || ops.size() != n) {
            throw ConfigError("tuple file: expected " + std::to_string(n) + " observables");
        }
        std::vector<HermitianMatrix> out;
        for (std::size_t k = 0; k < n; ++k) {
            const auto &re = ops[k].at("re");
            const auto &im = ops[k].at("im");
            if (re.size() != static_cast<std::size_t>(dim) || im.size() != re.size()) {
                throw ConfigError("tuple file: observable " + std::to_string(k) +
                                  " has dimension " + std::to_string(re.size()) + ", expected " +
                                  std::to_string(dim));
            }
            ComplexMatrix m(dim, dim);
            for (Eigen::Index r = 0; r < dim; ++r) {
                const auto &rr = re[static_cast<std::size_t>(r)];
                const auto &ii = im[static_cast<std::size_t>(r)];
                if (rr.size() != static_cast<std::size_t>(dim) || ii.size() != rr.size()) {
                    throw ConfigError("tuple file: observable " + std::to_string(k) + " row " +
                                      std::to_string(r) + " has wrong length");
                }
                for (Eigen::Index c = 0; c < dim; ++c) {
                    m(r, c) = Complex(rr[static_cast<std::size_t>(c)].get<double>(),
                                      ii[static_cast<std::size_t>(c)].get<double>());
                }
            }
            try {
                out.emplace_back(m);
            } catch (const ConfigError &e) {
                throw ConfigError("tuple file: observable " + std::to_string(k) + ": " + e.what());
            }
        }
        return OperatorTuple(std::move(out), bound);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("tuple file: ") + e.what());
    }
}

enum class TupleFormat { json, binary };

namespace detail {
inline constexpr char binary_magic[4] = {'A', 'M', 'U', 'T'};

template <typename T> void put(std::string &out, T v) {
    static_assert(std::endian::native == std::endian::little, "binary format is little-endian");
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <typename T> T get(const std::string &in, std::size_t &pos) {
    if (pos + sizeof(T) > in.size()) {
        throw ParseError("binary tuple file truncated", pos);
    }
    T v;
    std::memcpy(&v, in.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}
} // namespace detail

inline std::string tuple_to_binary(const OperatorTuple &tuple) {
    std::string out(detail::binary_magic, 4);
    detail::put<std::uint32_t>(out, 1);
    detail::put<std::uint64_t>(out, tuple.size());
    detail::put<std::uint64_t>(out, static_cast<std::uint64_t>(tuple.dim()));
    detail::put<double>(out, tuple.bound());
    for (const auto &t : tuple.ops()) {
        for (Eigen::Index r = 0; r < t.dim(); ++r) {
            for (Eigen::Index c = 0; c < t.dim(); ++c) {
                detail::put<double>(out, t(r, c).real());
                detail::put<double>(out, t(r, c).imag());
            }
        }
    }
    return out;
}

inline OperatorTuple tuple_from_binary(const std::string &in) {
    std::size_t pos = 0;
    if (in.size() < 4 || std::memcmp(in.data(), detail::binary_magic, 4) != 0) {
        throw ParseError("not a binary tuple file (bad magic)", 0);
    }
    pos = 4;
    const auto version = detail::get<std::uint32_t>(in, pos);
    if (version != 1) {
        throw ParseError("unsupported binary tuple version " + std::to_string(version), pos - 4);
    }
    const auto n = detail::get<std::uint64_t>(in, pos);
    const auto dim = detail::get<std::uint64_t>(in, pos);
    const auto bound = detail::get<double>(in, pos);
    if (n == 0 || dim == 0 || n * dim * dim * 16 != in.size() - pos) {
        throw ParseError("binary tuple size does not match header (n=" + std::to_string(n) +
                             ", dim=" + std::to_string(dim) + ")",
                         pos);
    }
    std::vector<HermitianMatrix> ops;
    const auto d = static_cast<Eigen::Index>(dim);
    for (std::uint64_t k = 0; k < n; ++k) {
        ComplexMatrix m(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                const double re = detail::get<double>(in, pos);
                const double im = detail::get<double>(in, pos);
                m(r, c) = Complex(re, im);
            }
        }
        try {
            ops.emplace_back(m);
        } catch (const ConfigError &e) {
            throw ConfigError("tuple file: observable " + std::to_string(k) + ": " + e.what());
        }
    }
    return OperatorTuple(std::move(ops), bound);
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open '" + path + "' for reading");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw ConfigError("failed writing '" + path + "'");
    }
}

inline OperatorTuple parse_tuple(const std::string &content) {
    if (content.size() >= 4 && std::memcmp(content.data(), detail::binary_magic, 4) == 0) {
        return tuple_from_binary(content);
    }
    json j;
    try {
        j = json::parse(content);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed tuple JSON: ") + e.what(), e.byte);
    }
    return tuple_from_json(j);
}

inline OperatorTuple load_tuple(const std::string &path) { return parse_tuple(read_file(path)); }

inline void save_tuple(const OperatorTuple &tuple, const std::string &path,
                       TupleFormat format = TupleFormat::json, const json &meta = nullptr) {
    write_file(path, format == TupleFormat::json ? tuple_to_json(tuple, meta).dump() + "\n"
                                                 : tuple_to_binary(tuple));
}

/// CSV of accepted points: coord_1..coord_n,theta_norm.
inline std::string spectrum_csv(const SyntheticSpectrumResult &r) {
    std::ostringstream os;
    for (std::size_t j = 0; j < r.grid.n(); ++j) {
        os << "coord_" << (j + 1) << ',';
    }
    os << "theta_norm\n";
    for (const auto &a : r.accepted) {
        for (double x : a.point) {
            os << format_double(x) << ',';
        }
        os << format_double(a.norm) << '\n';
    }
    return os.str();
}

} // namespace amu
