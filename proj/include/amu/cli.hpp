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
 * Batch front-end. run_cli() is the whole program; tools/amu_spectra.cpp only
 * forwards argv. Exit codes: 0 success, 2 configuration or parse error,
 * 3 resource cap, 4 numerical failure.
 */

#pragma once

#include <charconv>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "amu_search.hpp"
#include "essential.hpp"
#include "models_io.hpp"
#include "serialize.hpp"
#include "synthetic_spectrum.hpp"

namespace amu::cli {

enum ExitCode : int { ok = 0, config_error = 2, resource_cap = 3, numerical_failure = 4 };

inline std::vector<double> parse_list(const std::string &text, const char *what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b == std::string::npos) {
            throw ConfigError(std::string("empty entry in ") + what + " '" + text + "'");
        }
        item = item.substr(b, e - b + 1);
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc() || res.ptr != item.data() + item.size() || !std::isfinite(v)) {
            throw ConfigError(std::string("cannot parse ") + what + " entry '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigError(std::string("empty ") + what);
    }
    return out;
}

inline std::vector<Eigen::Index> parse_cuts(const std::string &text) {
    std::vector<Eigen::Index> cuts;
    for (double v : parse_list(text, "cut list")) {
        if (v != std::floor(v) || v < 0) {
            throw ConfigError("cuts must be non-negative integers");
        }
        cuts.push_back(static_cast<Eigen::Index>(v));
    }
    return cuts;
}

inline void check_eta(double eta) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw ConfigError("eta must lie in (0, 1), got " + format_double(eta));
    }
}

inline void check_tolerance(double v, const char *name) {
    if (!(v > 0.0)) {
        throw ConfigError(std::string(name) + " must be positive");
    }
}

inline void emit(const json &j, const std::string &path, std::ostream &out) {
    const std::string text = j.dump(1) + "\n";
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_file(path, text);
    }
}

struct RunConfig {
    std::string family;
    ModelSpec model;
    std::string format = "json";
    std::string input;
    std::string output;
    std::string csv;
    std::string certs;
    double eta = 0.25;
    double sigma = 0.25;
    double eps = 0.25;
    std::vector<std::string> lambdas;
    std::string mu;
    std::string cuts;
    std::optional<std::int64_t> k_override;
    bool one_sided = false;
    bool joint_diag = false;
    unsigned threads = 0;
};

inline json spectrum_report(const OperatorTuple &tuple, const SyntheticSpectrumResult &r) {
    json j = spectrum_to_json(r);
    j["commutator_profile"] = matrix_to_json(commutator_profile(tuple));
    j["dim"] = tuple.dim();
    return j;
}

inline int cmd_models(const RunConfig &cfg, std::ostream &out) {
    ModelSpec spec = cfg.model;
    spec.family = parse_family(cfg.family);
    const OperatorTuple tuple = generate(spec);
    if (cfg.output.empty()) {
        throw ConfigError("models gen needs -o <file>");
    }
    json meta{{"family", family_name(spec.family)},
              {"seed", spec.seed},
              {"commutator_norms", matrix_to_json(commutator_profile(tuple))}};
    if (cfg.format != "json" && cfg.format != "bin") {
        throw ConfigError("format must be json or bin");
    }
    save_tuple(tuple, cfg.output, cfg.format == "json" ? TupleFormat::json : TupleFormat::binary,
               meta);
    out << "wrote " << family_name(spec.family) << " n=" << tuple.size()
        << " dim=" << tuple.dim() << " to " << cfg.output << "\n";
    return ok;
}

inline ScanOptions scan_options(const RunConfig &cfg) {
    ScanOptions opt;
    opt.grid.k_override = cfg.k_override;
    opt.threads = cfg.threads;
    return opt;
}

inline int cmd_spectrum(const RunConfig &cfg, std::ostream &out) {
    check_eta(cfg.eta);
    const OperatorTuple tuple = load_tuple(cfg.input);
    const auto result = scan(tuple, cfg.eta, scan_options(cfg));
    if (!cfg.csv.empty()) {
        write_file(cfg.csv, spectrum_csv(result));
    }
    emit(spectrum_report(tuple, result), cfg.output, out);
    if (!cfg.output.empty()) {
        out << "k=" << result.grid.k() << " grid=" << result.grid.size()
            << " accepted=" << result.accepted.size() << "\n";
    }
    return ok;
}

inline int cmd_amu(const RunConfig &cfg, std::ostream &out) {
    check_tolerance(cfg.sigma, "sigma");
    check_tolerance(cfg.eps, "eps");
    const OperatorTuple tuple = load_tuple(cfg.input);
    std::vector<Point> lambdas;
    json spectrum = nullptr;
    if (cfg.lambdas.size() == 1 && cfg.lambdas[0] == "all-accepted") {
        check_eta(cfg.eta);
        const auto r = scan(tuple, cfg.eta, scan_options(cfg));
        lambdas = r.accepted_points();
        spectrum = spectrum_to_json(r);
    } else {
        if (cfg.lambdas.empty()) {
            throw ConfigError("amu needs --lambda <x1,...,xn> or --lambda all-accepted");
        }
        for (const auto &s : cfg.lambdas) {
            auto p = parse_list(s, "lambda");
            if (p.size() != tuple.size()) {
                throw ConfigError("lambda '" + s + "' has " + std::to_string(p.size()) +
                                  " coordinates, tuple has " + std::to_string(tuple.size()));
            }
            lambdas.push_back(std::move(p));
        }
    }
    std::optional<DigitalDecomposition> dec;
    if (cfg.joint_diag) {
        dec = joint_diagonalize(tuple, 100, 1e-12, cfg.eta / 2.0);
    }
    std::vector<std::optional<AmuCertificate>> slots(lambdas.size());
    parallel_for(lambdas.size(), cfg.threads, [&](std::size_t i) {
        slots[i] = amu_at(tuple, lambdas[i], cfg.sigma, cfg.eps, dec ? &*dec : nullptr);
    });
    json certs = json::array();
    std::size_t certified = 0;
    std::ostringstream summary;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const auto &c = *slots[i];
        certified += (c.amu_member && c.expectation_close) ? 1 : 0;
        certs.push_back(certificate_to_json(c));
        summary << "lambda=(";
        for (std::size_t j = 0; j < c.lambda.size(); ++j) {
            summary << (j ? "," : "") << format_double(c.lambda[j]);
        }
        summary << ") amu_member=" << (c.amu_member ? "true" : "false")
                << " expectation_close=" << (c.expectation_close ? "true" : "false")
                << " max_sd=" << format_double(c.max_sd())
                << " max_gap=" << format_double(c.max_expectation_gap()) << "\n";
    }
    json j{{"sigma", cfg.sigma},
           {"eps", cfg.eps},
           {"count", lambdas.size()},
           {"certified", certified},
           {"certificates", std::move(certs)}};
    if (!spectrum.is_null()) {
        j["spectrum"] = std::move(spectrum);
    }
    if (dec) {
        j["joint_diagonalization_residual"] = dec->residual;
    }
    emit(j, cfg.output, out);
    if (!cfg.output.empty()) {
        out << summary.str() << "certified " << certified << "/" << lambdas.size() << "\n";
    }
    return ok;
}

inline int cmd_essential(const RunConfig &cfg, std::ostream &out) {
    check_eta(cfg.eta);
    const OperatorTuple tuple = load_tuple(cfg.input);
    if (cfg.cuts.empty()) {
        throw ConfigError("essential needs --cuts m1,m2,...");
    }
    const auto cuts = parse_cuts(cfg.cuts);
    EssentialOptions opt;
    opt.kind = cfg.one_sided ? WindowKind::one_sided : WindowKind::interior;
    opt.scan = scan_options(cfg);
    const auto est = essential_spectrum_estimate(tuple, cfg.eta, cuts, opt);
    json j = essential_to_json(est);
    json decay = json::array();
    for (const auto &d : tail_commutator_decay(tuple, cuts)) {
        decay.push_back({{"cut", d.m}, {"norm", d.norm}});
    }
    j["tail_commutator_decay"] = std::move(decay);
    if (!cfg.lambdas.empty()) {
        check_tolerance(cfg.sigma, "sigma");
        json seqs = json::array();
        for (const auto &s : cfg.lambdas) {
            auto p = parse_list(s, "lambda");
            if (p.size() != tuple.size()) {
                throw ConfigError("lambda '" + s + "' dimension mismatch");
            }
            std::vector<Eigen::Index> seq_cuts;
            for (auto m : cuts) {
                if (m >= 1) {
                    seq_cuts.push_back(m);
                }
            }
            auto seq = amu_sequence(tuple, p, seq_cuts, {cfg.sigma}, &est);
            json sj = sequence_to_json(seq);
            sj["lambda"] = p;
            seqs.push_back(std::move(sj));
        }
        j["amu_sequences"] = std::move(seqs);
    }
    emit(j, cfg.output, out);
    if (!cfg.output.empty()) {
        out << "levels=" << est.levels.size() << " stability="
            << (est.stability ? format_double(*est.stability) : std::string("n/a")) << "\n";
    }
    return ok;
}

inline int cmd_superpose(const RunConfig &cfg, std::ostream &out) {
    const OperatorTuple tuple = load_tuple(cfg.input);
    const std::string text = read_file(cfg.certs);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed certificate JSON: ") + e.what(), e.byte);
    }
    std::vector<AmuCertificate> certs;
    try {
        for (const auto &c : j.at("certificates")) {
            certs.push_back(certificate_from_json(c));
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("certificate file: ") + e.what());
    }
    const auto mu = parse_list(cfg.mu, "mu");
    const auto plan = superpose(tuple, certs, mu);
    emit(plan_to_json(plan), cfg.output, out);
    if (!cfg.output.empty()) {
        out << "achieved_distance=" << format_double(plan.achieved_distance) << "\n";
    }
    return ok;
}

inline int run_cli(int argc, const char *const *argv, std::ostream &out = std::cout,
                   std::ostream &err = std::cerr) {
    CLI::App app{"Synthetic spectra and approximate joint eigenvectors of Hermitian tuples",
                 "amu-spectra"};
    app.require_subcommand(1);
    RunConfig cfg;
    cfg.threads = default_thread_count();

    auto *models = app.add_subcommand("models", "Generate model tuples");
    models->require_subcommand(1);
    auto *gen = models->add_subcommand("gen", "Generate a tuple file");
    gen->add_option("family", cfg.family, "Model family: " + family_list())->required();
    gen->add_option("--dim", cfg.model.dim, "Hilbert space dimension")->default_val(64);
    gen->add_option("--seed", cfg.model.seed, "PRNG seed")->default_val(0);
    gen->add_option("--n", cfg.model.n, "Observables (diag, perturbed)")->default_val(2);
    gen->add_option("--perturbation", cfg.model.perturbation, "Perturbation norm (perturbed)")
        ->default_val(0.0);
    gen->add_option("--lo", cfg.model.lo, "Lowest eigenvalue (diag, perturbed)")->default_val(-1.0);
    gen->add_option("--hi", cfg.model.hi, "Highest eigenvalue (diag, perturbed)")->default_val(1.0);
    gen->add_option("--from", cfg.model.path, "Source tuple (file family)");
    gen->add_option("-o,--output", cfg.output, "Output tuple file");
    gen->add_option("--format", cfg.format, "json or bin")->default_val("json");

    auto add_threads = [&](CLI::App *c) {
        c->add_option("--threads", cfg.threads, "Worker threads (default AMU_SPECTRA_THREADS)");
    };
    auto add_k = [&](CLI::App *c) {
        c->add_option("--k", cfg.k_override, "Override the grid subdivision k");
    };

    auto *spectrum = app.add_subcommand("spectrum", "Scan the eta-synthetic spectrum");
    spectrum->add_option("-i,--input", cfg.input, "Tuple file")->required();
    spectrum->add_option("--eta", cfg.eta, "Bump width eta in (0,1)")->required();
    spectrum->add_option("-o,--output", cfg.output, "Result JSON (default stdout)");
    spectrum->add_option("--csv", cfg.csv, "Also write accepted points as CSV");
    add_threads(spectrum);
    add_k(spectrum);

    auto *amu_cmd = app.add_subcommand("amu", "Find AMU states at given points");
    amu_cmd->add_option("-i,--input", cfg.input, "Tuple file")->required();
    amu_cmd->add_option("--lambda", cfg.lambdas,
                        "Point x1,...,xn (repeatable) or all-accepted");
    amu_cmd->add_option("--eta", cfg.eta, "Scan width for all-accepted")->default_val(0.25);
    amu_cmd->add_option("--sigma", cfg.sigma, "sd tolerance")->default_val(0.25);
    amu_cmd->add_option("--eps", cfg.eps, "Expectation tolerance")->default_val(0.25);
    amu_cmd->add_flag("--joint-diag", cfg.joint_diag, "Also try joint-diagonalization candidates");
    amu_cmd->add_option("-o,--output", cfg.output, "Certificates JSON (default stdout)");
    add_threads(amu_cmd);
    add_k(amu_cmd);

    auto *ess = app.add_subcommand("essential", "Essential synthetic spectrum from compressions");
    ess->add_option("-i,--input", cfg.input, "Tuple file")->required();
    ess->add_option("--eta", cfg.eta, "Bump width eta in (0,1)")->required();
    ess->add_option("--cuts", cfg.cuts, "Cut indices m1,m2,...")->required();
    ess->add_flag("--one-sided", cfg.one_sided, "Compress to [m, dim) instead of [m, dim-m)");
    ess->add_option("--lambda", cfg.lambdas, "Also build AMU sequences at these points");
    ess->add_option("--sigma", cfg.sigma, "sd tolerance for AMU sequences")->default_val(0.25);
    ess->add_option("-o,--output", cfg.output, "Estimate JSON (default stdout)");
    add_threads(ess);
    add_k(ess);

    auto *sup = app.add_subcommand("superpose", "Superpose certificate states toward a target");
    sup->add_option("-i,--input", cfg.input, "Tuple file")->required();
    sup->add_option("--certs", cfg.certs, "Certificates JSON from the amu command")->required();
    sup->add_option("--mu", cfg.mu, "Target point x1,...,xn")->required();
    sup->add_option("-o,--output", cfg.output, "Plan JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : config_error;
    }

    try {
        if (cfg.threads == 0) {
            throw ConfigError("--threads must be >= 1");
        }
        if (*gen) {
            return cmd_models(cfg, out);
        }
        if (*spectrum) {
            return cmd_spectrum(cfg, out);
        }
        if (*amu_cmd) {
            return cmd_amu(cfg, out);
        }
        if (*ess) {
            return cmd_essential(cfg, out);
        }
        if (*sup) {
            return cmd_superpose(cfg, out);
        }
    } catch (const ResourceCapError &e) {
        err << "error: " << e.what() << "\n";
        return resource_cap;
    } catch (const ConfigError &e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    } catch (const std::exception &e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    }
    return config_error;
}

} // namespace amu::cli
