// Copyright 2026 The bosonic Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <CLI11.hpp>

#include <bosonic/pipeline.hpp>
#include <bosonic/qp_expansion.hpp>
#include <bosonic/sk.hpp>
#include <bosonic/state_prep.hpp>

#include <functional>
#include <iostream>
#include <string>

using namespace bosonic;

namespace {

struct Common {
    std::uint64_t seed = 1;
    double tol_unitary = 1e-10;
    double tol_block = 1e-12;
    std::string json_report;
};

void add_common(CLI::App *app, Common &c) {
    app->add_option("--seed", c.seed, "seed of every random choice")->capture_default_str();
    app->add_option("--tol-unitary", c.tol_unitary, "unitarity tolerance")->capture_default_str();
    app->add_option("--tol-block", c.tol_block, "cross-block tolerance of synthesized polynomials")
        ->capture_default_str();
    app->add_option("--json-report", c.json_report, "write a JSON report here");
}

void apply(const Common &c) {
    if (!(c.tol_unitary > 0.0) || !(c.tol_block > 0.0)) throw ConfigurationError("tolerances must be positive");
    tolerances().unitary = c.tol_unitary;
    tolerances().block = c.tol_block;
}

// Runs a subcommand body; the body returns its report and exit code.
int run(const Common &c, const std::function<std::pair<json, int>()> &body) {
    json report;
    int code = 0;
    try {
        apply(c);
        std::tie(report, code) = body();
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        code = e.exit_code();
        report = {{"status", "error"}, {"error", e.what()}, {"exit_code", code}};
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        code = 1;
        report = {{"status", "error"}, {"error", e.what()}, {"exit_code", code}};
    }
    if (!c.json_report.empty()) {
        try {
            write_json_file(c.json_report, report);
        } catch (const Error &e) {
            std::cerr << "error: " << e.what() << '\n';
            if (code == 0) code = e.exit_code();
        }
    }
    return code;
}

void print_failures(const std::vector<std::string> &f) {
    for (const auto &s : f) std::cerr << "FAILED: " << s << '\n';
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Polynomial Hamiltonians for bosonic unitaries"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    Common common;
    int code = 0;

    // truncate
    std::string t_oracle;
    double t_E = 0.5, t_eps = 0.5;
    int t_samples = 2000;
    std::string t_out;
    auto *truncate = app.add_subcommand("truncate", "effective-dimension certificate of an oracle");
    truncate->add_option("--oracle", t_oracle, "builtin name[:params] or oracle file")->required();
    truncate->add_option("--energy", t_E, "mean photon number bound E")->required();
    truncate->add_option("--eps", t_eps, "target distance")->required();
    truncate->add_option("--samples", t_samples, "sampled states")->capture_default_str();
    truncate->add_option("--out", t_out, "certificate JSON");
    add_common(truncate, common);
    truncate->callback([&] {
        code = run(common, [&] {
            auto oracle = make_oracle(t_oracle, required_columns(t_E, t_eps));
            const auto r = run_truncation(*oracle, t_E, t_eps, t_samples, common.seed);
            const json cert = to_json(r.certificate);
            if (!t_out.empty()) write_json_file(t_out, cert);
            std::cout << "M = " << r.params.M << ", N = " << r.params.N
                      << ", sampled distance = " << r.certificate.sampled_worst_distance << '\n';
            return std::make_pair(json{{"status", "pass"}, {"certificate", cert}}, 0);
        });
    });

    // synth
    std::string s_ham, s_qp, s_out;
    std::vector<int> s_cutoffs;
    int s_modes = 1;
    auto *synth = app.add_subcommand("synth", "polynomial Hamiltonian of a Hermitian matrix");
    synth->add_option("--hamiltonian", s_ham, "matrix JSON")->required()->check(CLI::ExistingFile);
    synth->add_option("--modes", s_modes, "number of modes")->capture_default_str();
    synth->add_option("--cutoffs", s_cutoffs, "per-mode block cutoffs (multimode)");
    synth->add_option("--qp", s_qp, "also write the expansion in q and p here");
    synth->add_option("--out", s_out, "polynomial JSON")->required();
    add_common(synth, common);
    synth->callback([&] {
        code = run(common, [&] {
            const Mat m = matrix_from_json(read_json_file(s_ham));
            if (m.rows() != m.cols()) throw ConfigurationError("Hamiltonian must be square");
            const HermitianMatrix H(m);
            PolyHamiltonian P;
            if (s_cutoffs.empty() && s_modes == 1) {
                P = synth_hermitian(H);
            } else {
                if (static_cast<int>(s_cutoffs.size()) != s_modes)
                    throw ConfigurationError("--cutoffs needs one entry per mode");
                P = synth_multimode(H, s_cutoffs);
            }
            write_json_file(s_out, to_json(P));
            json rep{{"status", "pass"}, {"degree", P.degree()}, {"terms", P.terms().size()}};
            if (!s_qp.empty()) {
                const QPPolynomial q = expand_qp(P);
                write_json_file(s_qp, to_json(q));
                rep["qp_degree"] = q.degree();
            }
            std::cout << "terms = " << P.terms().size() << ", degree = " << P.degree() << '\n';
            return std::make_pair(rep, 0);
        });
    });

    // prepare-state
    std::string p_target, p_out;
    double p_eps = 0.1;
    auto *prep = app.add_subcommand("prepare-state", "polynomial Hamiltonian preparing a state from the vacuum");
    prep->add_option("--target", p_target, "JSON array of amplitudes [re, im]")->required()->check(CLI::ExistingFile);
    prep->add_option("--eps", p_eps, "trace-distance budget")->required();
    prep->add_option("--out", p_out, "output JSON")->required();
    add_common(prep, common);
    prep->callback([&] {
        code = run(common, [&] {
            json tj = read_json_file(p_target);
            const Vec target = vector_from_json(tj.is_object() && tj.contains("amplitudes") ? tj.at("amplitudes") : tj);
            const auto s = prepare_state(target, p_eps);
            json out{{"tool_version", kToolVersion},
                     {"d_eps", s.d_eps},
                     {"truncation_distance", s.truncation_distance},
                     {"truncated", vector_to_json(s.truncated)},
                     {"generator", matrix_to_json(s.generator.mat())},
                     {"polynomial", to_json(s.P)}};
            write_json_file(p_out, out);
            std::cout << "d = " << s.d_eps << ", truncation distance = " << s.truncation_distance << '\n';
            return std::make_pair(json{{"status", "pass"}, {"d_eps", s.d_eps}}, 0);
        });
    });

    // compile
    std::string c_oracle, c_out;
    double c_E = 0.5, c_eps = 0.5;
    int c_samples = 2000;
    auto *compile = app.add_subcommand("compile", "polynomial Hamiltonian of a physical unitary");
    compile->add_option("--oracle", c_oracle, "builtin name[:params] or oracle file")->required();
    compile->add_option("--energy", c_E, "mean photon number bound E")->required();
    compile->add_option("--eps", c_eps, "target distance")->required();
    compile->add_option("--samples", c_samples, "sampled states")->capture_default_str();
    compile->add_option("--out", c_out, "polynomial JSON")->required();
    add_common(compile, common);
    compile->callback([&] {
        code = run(common, [&] {
            PipelineConfig cfg;
            cfg.oracle = c_oracle;
            cfg.E = c_E;
            cfg.epsilon = c_eps;
            cfg.samples = c_samples;
            cfg.seed = common.seed;
            cfg.polynomial_out = c_out;
            const auto r = compile_physical_unitary(cfg);
            std::cout << "generator cutoff = " << r.report.generator_cutoff << ", degree = " << r.report.degree
                      << ", status = " << (r.report.passed ? "pass" : "failed") << '\n';
            print_failures(r.report.failures);
            return std::make_pair(to_json(r.report), r.report.passed ? 0 : 2);
        });
    });

    // sk-compile
    std::string k_oracle, k_gateset = "ht:3", k_out;
    double k_E = 0.02, k_eps = 0.8;
    int k_depth = 3, k_samples = 2000, k_fit = 8;
    NetOptions net_opt;
    auto *sk = app.add_subcommand("sk-compile", "gate word over a finite gate set, lifted to polynomial Hamiltonians");
    sk->add_option("--oracle", k_oracle, "builtin name[:params] or oracle file")->required();
    sk->add_option("--energy", k_E, "mean photon number bound E")->required();
    sk->add_option("--eps", k_eps, "target distance")->required();
    sk->add_option("--gateset", k_gateset, "gate set JSON or ht:<d>")->capture_default_str();
    sk->add_option("--depth", k_depth, "maximal recursion depth")->capture_default_str();
    sk->add_option("--samples", k_samples, "sampled states")->capture_default_str();
    sk->add_option("--fit-targets", k_fit, "targets for the contraction fit (0 skips)")->capture_default_str();
    sk->add_option("--net-eps0", net_opt.epsilon0, "net covering radius")->capture_default_str();
    sk->add_option("--net-length", net_opt.max_length, "longest net word")->capture_default_str();
    sk->add_option("--net-entries", net_opt.max_entries, "net size limit")->capture_default_str();
    sk->add_option("--out", k_out, "word JSON")->required();
    add_common(sk, common);
    sk->callback([&] {
        code = run(common, [&] {
            if (k_depth < 0 || k_depth > kMaxSKDepth)
                throw ConfigurationError("--depth must lie in [0, " + std::to_string(kMaxSKDepth) + "]");
            const GateSet G = load_gateset(k_gateset);
            net_opt.seed = common.seed;
            const NetDictionary net(G, net_opt);
            auto oracle = make_oracle(k_oracle, std::max(required_columns(k_E, k_eps), 3 * G.dim() + 2));
            SKCompileOptions opt;
            opt.depth = k_depth;
            opt.samples = k_samples;
            opt.seed = common.seed;
            opt.fit_targets = k_fit;
            const auto r = compile_physical(*oracle, k_E, k_eps, G, net, opt);
            const json word = to_json(r, G);
            write_json_file(k_out, word);
            std::cout << "length = " << r.word.length() << ", depth = " << r.depth_used
                      << ", sampled distance = " << r.sampled_distance << '\n';
            return std::make_pair(json{{"status", "pass"},
                                       {"length", r.word.length()},
                                       {"depth", r.depth_used},
                                       {"sk_error", r.sk_error},
                                       {"sampled_distance", r.sampled_distance},
                                       {"sk_fit", to_json(r.fit)}},
                                  0);
        });
    });

    // verify
    std::string v_poly, v_report;
    auto *verify_cmd = app.add_subcommand("verify", "re-check compiled artifacts");
    verify_cmd->add_option("--polynomial", v_poly, "polynomial JSON")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--report", v_report, "compile report JSON")->required()->check(CLI::ExistingFile);
    add_common(verify_cmd, common);
    verify_cmd->callback([&] {
        code = run(common, [&] {
            const auto r = verify_files(v_poly, v_report);
            std::cout << "verify: " << (r.passed ? "pass" : "failed") << '\n';
            print_failures(r.failures);
            return std::make_pair(to_json(r), r.passed ? 0 : 2);
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }
    return code;
}
