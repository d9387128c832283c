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
 * Rational grids P_k^M, the eta-synthetic-spectrum scan and Hausdorff
 * distances between finite point sets.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "functional_calculus.hpp"
#include "parallel.hpp"

namespace amu {

/// Smallest l in N with (M + 1)/l < eta / (2 sqrt(n)).
inline std::int64_t grid_subdivision(std::size_t n, double bound, double eta) {
    if (n == 0 || !(eta > 0.0) || !(bound > 0.0)) {
        throw ConfigError("grid_subdivision: need n >= 1, M > 0, eta > 0");
    }
    const double rhs = eta / (2.0 * std::sqrt(static_cast<double>(n)));
    const double guess = std::floor((bound + 1.0) / rhs);
    if (!(guess < 1e15)) {
        throw ResourceCapError("grid_subdivision: eta too small");
    }
    auto l = std::max<std::int64_t>(1, static_cast<std::int64_t>(guess));
    while (l > 1 && (bound + 1.0) / static_cast<double>(l - 1) < rhs) {
        --l;
    }
    while (!((bound + 1.0) / static_cast<double>(l) < rhs)) {
        ++l;
    }
    return l;
}

/**
 * P_k^M in R^n: points (m_1/k, ..., m_n/k) with |m_j| <= M k, enumerated
 * lexicographically (first coordinate most significant, m ascending).
 */
class GridSpec {
  public:
    GridSpec(std::size_t n, double bound, std::int64_t k) : n_(n), bound_(bound), k_(k) {
        if (n == 0 || k < 1 || !(bound > 0.0)) {
            throw ConfigError("grid: need n >= 1, k >= 1, M > 0");
        }
        half_ = static_cast<std::int64_t>(std::floor(bound * static_cast<double>(k)));
        side_ = static_cast<std::uint64_t>(2 * half_ + 1);
        double count = std::pow(static_cast<double>(side_), static_cast<double>(n));
        count_ = count < 1.8e19 ? static_cast<std::uint64_t>(count)
                                : std::numeric_limits<std::uint64_t>::max();
    }

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] double bound() const noexcept { return bound_; }
    [[nodiscard]] std::int64_t k() const noexcept { return k_; }
    [[nodiscard]] double pitch() const noexcept { return 1.0 / static_cast<double>(k_); }
    /// Largest |m_j|, i.e. floor(M k).
    [[nodiscard]] std::int64_t half_width() const noexcept { return half_; }
    /// 2 floor(M k) + 1.
    [[nodiscard]] std::uint64_t side() const noexcept { return side_; }
    [[nodiscard]] std::uint64_t size() const noexcept { return count_; }

    [[nodiscard]] double coordinate(std::int64_t m) const noexcept {
        return static_cast<double>(m) / static_cast<double>(k_);
    }

    /// Integer numerators m_j of point @p index.
    [[nodiscard]] std::vector<std::int64_t> numerators(std::uint64_t index) const {
        std::vector<std::int64_t> m(n_);
        for (std::size_t j = n_; j-- > 0;) {
            m[j] = static_cast<std::int64_t>(index % side_) - half_;
            index /= side_;
        }
        return m;
    }

    [[nodiscard]] Point point(std::uint64_t index) const {
        Point p;
        p.reserve(n_);
        for (auto m : numerators(index)) {
            p.push_back(coordinate(m));
        }
        return p;
    }

    [[nodiscard]] std::vector<Point> points() const {
        std::vector<Point> out;
        out.reserve(static_cast<std::size_t>(count_));
        for (std::uint64_t i = 0; i < count_; ++i) {
            out.push_back(point(i));
        }
        return out;
    }

    /// Exact membership of the rational point m/k_other.
    [[nodiscard]] bool contains(std::int64_t m, std::int64_t k_other) const noexcept {
        if ((m * k_) % k_other != 0) {
            return false;
        }
        const std::int64_t mine = m * k_ / k_other;
        return mine >= -half_ && mine <= half_;
    }

  private:
    std::size_t n_;
    double bound_;
    std::int64_t k_;
    std::int64_t half_ = 0;
    std::uint64_t side_ = 1;
    std::uint64_t count_ = 1;
};

struct GridOptions {
    std::optional<std::int64_t> k_override; ///< replaces the k-rule when set
    std::size_t cap = default_tolerances.grid_cap;
};

inline GridSpec build_grid(std::size_t n, double bound, double eta, const GridOptions &opt = {}) {
    if (!(eta > 0.0 && eta < 1.0) && !opt.k_override) {
        throw ConfigError("build_grid: eta must lie in (0, 1)");
    }
    if (!(bound >= 1.0)) {
        throw ConfigError("build_grid: M must be >= 1");
    }
    const std::int64_t k = opt.k_override ? *opt.k_override : grid_subdivision(n, bound, eta);
    GridSpec g(n, bound, k);
    if (g.size() > opt.cap) {
        throw ResourceCapError("grid has " + std::to_string(g.size()) +
                               " points, over the cap of " + std::to_string(opt.cap) +
                               "; use a larger eta");
    }
    return g;
}

/// Whether every point of @p coarse is a point of @p fine.
inline bool grid_contains(const GridSpec &fine, const GridSpec &coarse) {
    if (fine.n() != coarse.n()) {
        return false;
    }
    for (std::int64_t m = -coarse.half_width(); m <= coarse.half_width(); ++m) {
        if (!fine.contains(m, coarse.k())) {
            return false;
        }
    }
    return true;
}

/// D^coarse_eta contained in D^fine_eta under the k-rule.
inline bool grids_nested(std::size_t n, double bound, double coarse_eta, double fine_eta) {
    const GridSpec coarse(n, bound, grid_subdivision(n, bound, coarse_eta));
    const GridSpec fine(n, bound, grid_subdivision(n, bound, fine_eta));
    return grid_contains(fine, coarse);
}

struct AcceptedPoint {
    Point point;
    double norm = 0.0;
};

/**
 * Accepted grid points with their ||Theta||; the synthetic spectrum is the
 * union of closed eta-balls around them.
 */
struct SyntheticSpectrumResult {
    double eta = 0.0;
    GridSpec grid{1, 1.0, 1};
    double slack = default_tolerances.scan_slack;
    std::vector<AcceptedPoint> accepted;

    [[nodiscard]] double threshold() const noexcept { return 1.0 - eta - slack; }

    [[nodiscard]] std::vector<Point> accepted_points() const {
        std::vector<Point> out;
        out.reserve(accepted.size());
        for (const auto &a : accepted) {
            out.push_back(a.point);
        }
        return out;
    }

    /// Whether @p z lies in the union of closed eta-balls.
    [[nodiscard]] bool covers(const Point &z) const {
        for (const auto &a : accepted) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < z.size(); ++j) {
                d2 += (a.point[j] - z[j]) * (a.point[j] - z[j]);
            }
            if (std::sqrt(d2) <= eta) {
                return true;
            }
        }
        return false;
    }
};

struct ScanOptions {
    GridOptions grid;
    unsigned threads = 1;
    double slack = default_tolerances.scan_slack;
};

inline SyntheticSpectrumResult scan(const ThetaEvaluator &evaluator, double eta,
                                    const ScanOptions &opt = {}) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw ConfigError("scan: eta must lie in (0, 1)");
    }
    const GridSpec grid = build_grid(evaluator.size(), evaluator.bound(), eta, opt.grid);
    const std::size_t n = grid.n();

    // Supports depend on one coordinate at a time: side() values per observable.
    std::vector<std::vector<ThetaEvaluator::Support>> table(n);
    for (std::size_t j = 0; j < n; ++j) {
        table[j].resize(grid.side());
        parallel_for(grid.side(), opt.threads, [&](std::size_t i) {
            table[j][i] = evaluator.support(
                j, grid.coordinate(static_cast<std::int64_t>(i) - grid.half_width()), eta);
        });
    }

    SyntheticSpectrumResult result;
    result.eta = eta;
    result.grid = grid;
    result.slack = opt.slack;
    const double threshold = result.threshold();

    const auto count = static_cast<std::size_t>(grid.size());
    std::vector<double> norms(count, -1.0);
    parallel_for(count, opt.threads, [&](std::size_t idx) {
        std::vector<const ThetaEvaluator::Support *> s(n);
        std::uint64_t rest = idx;
        for (std::size_t j = n; j-- > 0;) {
            s[j] = &table[j][rest % grid.side()];
            rest /= grid.side();
        }
        if (auto v = evaluator.chain_norm(s, threshold); v && *v >= threshold) {
            norms[idx] = *v;
        }
    });
    for (std::size_t idx = 0; idx < count; ++idx) {
        if (norms[idx] >= 0.0) {
            result.accepted.push_back({grid.point(idx), norms[idx]});
        }
    }
    return result;
}

inline SyntheticSpectrumResult scan(const OperatorTuple &tuple, double eta,
                                    const ScanOptions &opt = {}) {
    return scan(ThetaEvaluator(tuple), eta, opt);
}

inline double euclidean(const Point &a, const Point &b) {
    if (a.size() != b.size()) {
        throw ConfigError("point dimension mismatch");
    }
    double d2 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        d2 += (a[j] - b[j]) * (a[j] - b[j]);
    }
    return std::sqrt(d2);
}

/// sup_{x in X} min_{y in Y} |x - y|.
inline double directed_hausdorff(const std::vector<Point> &x, const std::vector<Point> &y) {
    double worst = 0.0;
    for (const auto &p : x) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto &q : y) {
            best = std::min(best, euclidean(p, q));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

inline double hausdorff(const std::vector<Point> &x, const std::vector<Point> &y) {
    if (x.empty() || y.empty()) {
        throw ConfigError("hausdorff distance is undefined for an empty set");
    }
    return std::max(directed_hausdorff(x, y), directed_hausdorff(y, x));
}

} // namespace amu
