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
 * Compact-commutator regime: compressions of a tuple to windows of the
 * standard basis away from the first m vectors, scans of those compressions
 * as finite stand-ins for the quotient by compact operators, and sequences of
 * AMU states pushed out along the basis.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "amu_search.hpp"
#include "synthetic_spectrum.hpp"

namespace amu {

/// Basis indices [begin, end), 0-based.
struct Window {
    Eigen::Index begin = 0;
    Eigen::Index end = 0;

    [[nodiscard]] Eigen::Index length() const noexcept { return end - begin; }
};

enum class WindowKind {
    one_sided, ///< span{u_{m+1}, ..., u_dim}
    interior,  ///< span{u_{m+1}, ..., u_{dim-m}}
};

inline Window compression_window(Eigen::Index dim, Eigen::Index m, WindowKind kind) {
    if (m < 0 || m >= dim) {
        throw ConfigError("cut " + std::to_string(m) + " must lie in [0, " + std::to_string(dim) +
                          ")");
    }
    const Window w{m, kind == WindowKind::interior ? dim - m : dim};
    if (w.length() < 2) {
        throw ConfigError("cut " + std::to_string(m) + " leaves a window of length " +
                          std::to_string(std::max<Eigen::Index>(0, w.length())) +
                          " on dimension " + std::to_string(dim) + " (need >= 2)");
    }
    return w;
}

struct TailCompression {
    Eigen::Index m = 0;
    Window window;
    OperatorTuple tuple; ///< blocks T_j[window, window]
};

inline TailCompression tail_compression(const OperatorTuple &tuple, Eigen::Index m,
                                        WindowKind kind = WindowKind::interior) {
    const Window w = compression_window(tuple.dim(), m, kind);
    std::vector<HermitianMatrix> ops;
    for (const auto &t : tuple.ops()) {
        ops.push_back(
            HermitianMatrix::symmetrized(t.matrix().block(w.begin, w.begin, w.length(), w.length())));
    }
    return {m, w, OperatorTuple(std::move(ops), tuple.bound())};
}

struct TailDecay {
    Eigen::Index m = 0;
    double norm = 0.0; ///< max_{i<j} ||[T_i, T_j](1 - p_m)||
};

inline std::vector<TailDecay> tail_commutator_decay(const OperatorTuple &tuple,
                                                    const std::vector<Eigen::Index> &cuts) {
    const Eigen::Index d = tuple.dim();
    for (auto m : cuts) {
        if (m < 0 || m >= d) {
            throw ConfigError("cut " + std::to_string(m) + " must lie in [0, " +
                              std::to_string(d) + ")");
        }
    }
    std::vector<ComplexMatrix> comms;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        for (std::size_t j = i + 1; j < tuple.size(); ++j) {
            comms.push_back(commutator(tuple[i], tuple[j]));
        }
    }
    std::vector<TailDecay> out;
    for (auto m : cuts) {
        double worst = 0.0;
        for (const auto &c : comms) {
            worst = std::max(worst, operator_norm(c.rightCols(d - m)));
        }
        out.push_back({m, worst});
    }
    return out;
}

struct EssentialLevel {
    Eigen::Index m = 0;
    Window window;
    SyntheticSpectrumResult spectrum;
    /// d_H to the previous level's accepted set; empty on the first level or
    /// when either set is empty.
    std::optional<double> distance_to_previous;
};

struct EssentialSpectrumEstimate {
    double eta = 0.0;
    WindowKind kind = WindowKind::interior;
    std::vector<EssentialLevel> levels;
    std::vector<Point> stabilized;   ///< accepted points of the last level
    std::optional<double> stability; ///< d_H between the last two levels
    bool stabilized_within_pitch = false;
    std::vector<std::string> notes;  ///< non-fatal events (empty levels)
};

struct EssentialOptions {
    WindowKind kind = WindowKind::interior;
    ScanOptions scan;
};

/// Scans each compression in increasing cut order. Empty accepted sets are
/// recorded in notes, not raised.
inline EssentialSpectrumEstimate essential_spectrum_estimate(const OperatorTuple &tuple, double eta,
                                                             std::vector<Eigen::Index> cuts,
                                                             const EssentialOptions &opt = {}) {
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.size() < 2) {
        throw ConfigError("essential spectrum estimate needs at least two distinct cuts");
    }
    for (auto m : cuts) {
        compression_window(tuple.dim(), m, opt.kind);
    }
    EssentialSpectrumEstimate est;
    est.eta = eta;
    est.kind = opt.kind;
    for (auto m : cuts) {
        const auto tc = tail_compression(tuple, m, opt.kind);
        EssentialLevel level{m, tc.window, scan(tc.tuple, eta, opt.scan), std::nullopt};
        if (level.spectrum.accepted.empty()) {
            est.notes.push_back("empty accepted set at cut " + std::to_string(m));
        }
        if (!est.levels.empty() && !est.levels.back().spectrum.accepted.empty() &&
            !level.spectrum.accepted.empty()) {
            level.distance_to_previous = hausdorff(est.levels.back().spectrum.accepted_points(),
                                                   level.spectrum.accepted_points());
        }
        est.levels.push_back(std::move(level));
    }
    const auto &last = est.levels.back();
    est.stabilized = last.spectrum.accepted_points();
    est.stability = last.distance_to_previous;
    est.stabilized_within_pitch =
        est.stability && *est.stability <= last.spectrum.grid.pitch() + 1e-12;
    return est;
}

/// [m, min(2m, dim - m)): orthogonal to the first m basis vectors, length m
/// when room allows, clear of the far end of the truncation.
inline Window sequence_window(Eigen::Index dim, Eigen::Index m) {
    if (m < 1 || m >= dim) {
        throw ConfigError("cut " + std::to_string(m) + " must lie in [1, " + std::to_string(dim) +
                          ")");
    }
    const Window w{m, std::min(2 * m, dim - m)};
    if (w.length() < 2) {
        throw ConfigError("cut " + std::to_string(m) + " leaves no room for a window of length 2 on dimension " +
                          std::to_string(dim));
    }
    return w;
}

struct SequenceStep {
    Eigen::Index m = 0;
    Window window;
    AmuCertificate certificate;          ///< measured against the full tuple
    std::vector<double> sd_compressed;   ///< sd against the window block
    std::vector<double> boundary_norm;   ///< ||T_j[outside, window]||
};

struct AmuSequence {
    std::vector<SequenceStep> steps;
    std::vector<double> max_sd_trend;
    std::vector<std::string> warnings;
};

/**
 * For each cut m, the ground state of Q(lambda) for the block on
 * sequence_window(dim, m), zero-padded to the full space and measured
 * against the original tuple with sigma = eps = sigma_schedule[i].
 * A single-entry schedule applies to every cut.
 */
inline AmuSequence amu_sequence(const OperatorTuple &tuple, const Point &lambda,
                                const std::vector<Eigen::Index> &cuts,
                                const std::vector<double> &sigma_schedule,
                                const EssentialSpectrumEstimate *estimate = nullptr) {
    if (sigma_schedule.empty() || (sigma_schedule.size() != 1 && sigma_schedule.size() != cuts.size())) {
        throw ConfigError("sigma schedule must have one entry or one per cut");
    }
    AmuSequence seq;
    if (estimate != nullptr) {
        const bool inside = std::any_of(estimate->stabilized.begin(), estimate->stabilized.end(),
                                        [&](const Point &p) { return euclidean(p, lambda) <= estimate->eta; });
        if (!inside) {
            seq.warnings.push_back("lambda is not within eta of the stabilized estimate");
        }
    }
    const Eigen::Index d = tuple.dim();
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const Window w = sequence_window(d, cuts[i]);
        std::vector<HermitianMatrix> blocks;
        for (const auto &t : tuple.ops()) {
            blocks.push_back(HermitianMatrix::symmetrized(
                t.matrix().block(w.begin, w.begin, w.length(), w.length())));
        }
        const OperatorTuple local(std::move(blocks), tuple.bound());
        const auto gs = ground_state(local, lambda);

        ComplexVector full = ComplexVector::Zero(d);
        full.segment(w.begin, w.length()) = gs.state.vector();
        const double sigma = sigma_schedule.size() == 1 ? sigma_schedule[0] : sigma_schedule[i];

        SequenceStep step{cuts[i], w, amu_check(tuple, VectorState(full), lambda, sigma, sigma), {}, {}};
        const auto local_report = measure(local, gs.state);
        step.sd_compressed = local_report.sd;
        for (const auto &t : tuple.ops()) {
            ComplexMatrix outside(d - w.length(), w.length());
            outside << t.matrix().block(0, w.begin, w.begin, w.length()),
                t.matrix().block(w.end, w.begin, d - w.end, w.length());
            step.boundary_norm.push_back(operator_norm(outside));
        }
        seq.max_sd_trend.push_back(step.certificate.max_sd());
        seq.steps.push_back(std::move(step));
    }
    return seq;
}

} // namespace amu
