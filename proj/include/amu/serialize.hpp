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
 * JSON encodings of results, certificates, plans and estimates. Doubles are
 * written in shortest round-trip form; state vectors as interleaved
 * [re0, im0, re1, im1, ...] arrays.
 */

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "amu_search.hpp"
#include "essential.hpp"
#include "synthetic_spectrum.hpp"

namespace amu {

using json = nlohmann::json;

inline json state_to_json(const VectorState &s) {
    json a = json::array();
    for (Eigen::Index i = 0; i < s.dim(); ++i) {
        a.push_back(s.vector()(i).real());
        a.push_back(s.vector()(i).imag());
    }
    return a;
}

inline VectorState state_from_json(const json &a) {
    if (!a.is_array() || a.empty() || a.size() % 2 != 0) {
        throw ConfigError("state must be a non-empty interleaved re/im array");
    }
    ComplexVector v(static_cast<Eigen::Index>(a.size() / 2));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = Complex(a[2 * i].get<double>(), a[2 * i + 1].get<double>());
    }
    return VectorState(std::move(v));
}

inline json matrix_to_json(const RealMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            r.push_back(m(i, j));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline json spectrum_to_json(const SyntheticSpectrumResult &r) {
    json acc = json::array();
    for (const auto &a : r.accepted) {
        acc.push_back({{"point", a.point}, {"norm", a.norm}});
    }
    return {{"eta", r.eta}, {"M", r.grid.bound()}, {"n", r.grid.n()},  {"k", r.grid.k()},
            {"slack", r.slack}, {"grid_points", r.grid.size()}, {"accepted", std::move(acc)}};
}

inline SyntheticSpectrumResult spectrum_from_json(const json &j) {
    SyntheticSpectrumResult r;
    r.eta = j.at("eta").get<double>();
    r.grid = GridSpec(j.at("n").get<std::size_t>(), j.at("M").get<double>(),
                      j.at("k").get<std::int64_t>());
    r.slack = j.value("slack", default_tolerances.scan_slack);
    for (const auto &a : j.at("accepted")) {
        r.accepted.push_back({a.at("point").get<Point>(), a.at("norm").get<double>()});
    }
    return r;
}

inline json report_to_json(const MeasurementReport &r) {
    return {{"exp", r.exp}, {"var", r.var}, {"sd", r.sd}};
}

inline json certificate_to_json(const AmuCertificate &c) {
    return {{"lambda", c.lambda},
            {"sigma", c.sigma},
            {"eps", c.eps},
            {"amu_member", c.amu_member},
            {"expectation_close", c.expectation_close},
            {"max_sd", c.max_sd()},
            {"max_expectation_gap", c.max_expectation_gap()},
            {"report", report_to_json(c.report)},
            {"state", state_to_json(c.state)}};
}

inline AmuCertificate certificate_from_json(const json &j) {
    AmuCertificate c;
    c.lambda = j.at("lambda").get<Point>();
    c.sigma = j.at("sigma").get<double>();
    c.eps = j.at("eps").get<double>();
    c.amu_member = j.at("amu_member").get<bool>();
    c.expectation_close = j.at("expectation_close").get<bool>();
    const auto &r = j.at("report");
    c.report = {r.at("exp").get<std::vector<double>>(), r.at("var").get<std::vector<double>>(),
                r.at("sd").get<std::vector<double>>()};
    c.state = state_from_json(j.at("state"));
    return c;
}

inline json plan_to_json(const SuperpositionPlan &p) {
    json comps = json::array();
    for (std::size_t k = 0; k < p.components.size(); ++k) {
        comps.push_back({{"weight", p.weights[k]},
                         {"point", p.component_points[k]},
                         {"state", state_to_json(p.components[k])}});
    }
    return {{"target", p.target},
            {"weights", p.weights},
            {"reorthogonalized", p.reorthogonalized},
            {"hull_distance", p.hull_distance},
            {"achieved_distance", p.achieved_distance},
            {"cross_term", p.cross_term},
            {"cross_bound", p.cross_bound},
            {"report", report_to_json(p.report)},
            {"components", std::move(comps)},
            {"state", state_to_json(p.state)}};
}

inline json window_to_json(const Window &w) { return {{"begin", w.begin}, {"end", w.end}}; }

inline json essential_to_json(const EssentialSpectrumEstimate &e) {
    json levels = json::array();
    for (const auto &l : e.levels) {
        levels.push_back({{"cut", l.m},
                          {"window", window_to_json(l.window)},
                          {"distance_to_previous", l.distance_to_previous
                                                       ? json(*l.distance_to_previous)
                                                       : json(nullptr)},
                          {"spectrum", spectrum_to_json(l.spectrum)}});
    }
    return {{"eta", e.eta},
            {"windows", e.kind == WindowKind::interior ? "interior" : "one_sided"},
            {"levels", std::move(levels)},
            {"stability", e.stability ? json(*e.stability) : json(nullptr)},
            {"stabilized_within_pitch", e.stabilized_within_pitch},
            {"stabilized", e.stabilized},
            {"notes", e.notes}};
}

inline json sequence_to_json(const AmuSequence &s) {
    json steps = json::array();
    for (const auto &st : s.steps) {
        steps.push_back({{"cut", st.m},
                         {"window", window_to_json(st.window)},
                         {"sd_compressed", st.sd_compressed},
                         {"boundary_norm", st.boundary_norm},
                         {"certificate", certificate_to_json(st.certificate)}});
    }
    return {{"steps", std::move(steps)}, {"max_sd_trend", s.max_sd_trend}, {"warnings", s.warnings}};
}

} // namespace amu
