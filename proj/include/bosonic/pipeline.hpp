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


#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fock.hpp"
#include "json_io.hpp"
#include "oracle.hpp"
#include "polyham.hpp"
#include "tolerances.hpp"
#include "truncation.hpp"

namespace bosonic {

struct PipelineConfig {
    std::string oracle = "identity"; ///< builtin spec or oracle file
    double E = 0.5;
    double epsilon = 0.5;
    int samples = 2000;
    std::uint64_t seed = 1;
    std::string polynomial_out; ///< P.json, empty to skip
    std::string report_out;     ///< report.json, empty to skip
    Tolerances tol = tolerances();

    void validate() const {
        if (!(E > 0.0) || !std::isfinite(E)) throw ConfigurationError("E must be positive");
        if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigurationError("epsilon must lie in (0, 1]");
        if (samples < 1) throw ConfigurationError("samples must be at least 1");
        if (oracle.empty()) throw ConfigurationError("no oracle given");
        if (!(tol.block > 0.0) || !(tol.unitary > 0.0)) throw ConfigurationError("tolerances must be positive");
    }
};

inline json to_json(const PipelineConfig &c) {
    return {{"oracle", c.oracle},   {"E", c.E},
            {"epsilon", c.epsilon}, {"samples", c.samples},
            {"seed", c.seed},       {"tol_block", c.tol.block},
            {"tol_unitary", c.tol.unitary}};
}

inline PipelineConfig pipeline_config_from_json(const json &j) {
    try {
        PipelineConfig c;
        c.oracle = j.at("oracle").get<std::string>();
        c.E = j.at("E").get<double>();
        c.epsilon = j.at("epsilon").get<double>();
        c.samples = j.at("samples").get<int>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.tol.block = j.value("tol_block", c.tol.block);
        c.tol.unitary = j.value("tol_unitary", c.tol.unitary);
        c.validate();
        return c;
    } catch (const json::exception &e) {
        throw ConfigurationError(std::string("malformed config: ") + e.what());
    }
}

struct Residuals {
    double cross_block = 0.0;          ///< couplings of levels 0..L to the rest
    double block_equality = 0.0;       ///< block of eval(P) vs the generator
    double exponential_identity = 0.0; ///< block of exp(i eval(P)) vs V_N
    double sampled_distance = 0.0;     ///< oracle vs exp(i P) on the block, identity above
    double coefficient_mismatch = 0.0; ///< num_poly vs nodes, verify only
};

struct CompilationReport {
    bool passed = false;
    std::vector<std::string> failures;
    PipelineConfig config;
    TruncationCertificate certificate;
    int generator_cutoff = 0; ///< L: V_N acts as the identity above this level
    int degree = 0;
    int verification_cutoff = 0;
    Residuals residuals;
    Residuals limits;
    std::size_t states_evaluated = 0;
    std::map<std::string, double> timings; ///< seconds, not reproducible
};

inline json to_json(const Residuals &r) {
    return {{"cross_block", r.cross_block},
            {"block_equality", r.block_equality},
            {"exponential_identity", r.exponential_identity},
            {"sampled_distance", r.sampled_distance},
            {"coefficient_mismatch", r.coefficient_mismatch}};
}

/// Report as JSON; `with_timings = false` gives the reproducible part.
inline json to_json(const CompilationReport &r, bool with_timings = true) {
    json j{{"tool_version", kToolVersion},
           {"status", r.passed ? "pass" : "failed"},
           {"failures", r.failures},
           {"config", to_json(r.config)},
           {"certificate", to_json(r.certificate)},
           {"generator_cutoff", r.generator_cutoff},
           {"truncation_cutoff", r.certificate.N},
           {"polynomial_degree", r.degree},
           {"verification_cutoff", r.verification_cutoff},
           {"residuals", to_json(r.residuals)},
           {"tolerances", to_json(r.limits)},
           {"complement", "identity"},
           {"states_evaluated", r.states_evaluated}};
    if (with_timings) j["timings"] = r.timings;
    return j;
}

/// Drops the wall-clock part of a report.
inline json strip_timings(json j) {
    j.erase("timings");
    return j;
}

namespace detail {

class Stopwatch {
  public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

  private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline std::string stage_message(const char *stage, const std::exception &e) {
    return std::string(stage) + ": " + e.what();
}

/// Runs f, prefixing any library error with the stage name; the error type is kept.
template <class F>
auto staged(const char *stage, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConvergenceFailure &e) {
        throw ConvergenceFailure(stage_message(stage, e));
    } catch (const CertificateFailure &e) {
        throw CertificateFailure(stage_message(stage, e));
    } catch (const DomainError &e) {
        throw DomainError(stage_message(stage, e));
    } catch (const ContractViolation &e) {
        throw ContractViolation(stage_message(stage, e));
    } catch (const ConfigurationError &e) {
        throw ConfigurationError(stage_message(stage, e));
    } catch (const ResourceLimit &e) {
        throw ResourceLimit(stage_message(stage, e));
    } catch (const NumericalError &e) {
        throw NumericalError(stage_message(stage, e));
    } catch (const Error &e) {
        throw Error(stage_message(stage, e));
    }
}

inline Residuals residual_limits(const PipelineConfig &c, const Mat &H) {
    Residuals t;
    t.cross_block = c.tol.block;
    t.block_equality = 1e-10 * std::max(1.0, max_abs(H));
    t.exponential_identity = 1e-9;
    t.sampled_distance = c.epsilon;
    t.coefficient_mismatch = 0.0;
    return t;
}

/// Residuals of P against the truncated unitary; fills report fields.
inline void check_polynomial(const UnitaryOracle &oracle, const PolyHamiltonian &P, const UnitaryMatrix &V,
                             std::int64_t N, const HermitianMatrix &H, CompilationReport &rep) {
    const int L = V.cutoff();
    if (P.modes() != 1 || P.block_cutoffs().front() != L) {
        rep.failures.push_back("polynomial block cutoff matches the generator cutoff");
        return;
    }
    rep.degree = P.degree();
    rep.verification_cutoff = L + rep.degree + 2;
    const Mat m = eval_border(P, rep.verification_cutoff, L);
    const Mat blk = m.topLeftCorner(L + 1, L + 1);
    rep.residuals.cross_block = cross_block_norm(m, {rep.verification_cutoff}, {L});
    rep.residuals.block_equality = max_abs(blk - H.mat());
    const Mat hb = 0.5 * (blk + blk.adjoint());
    const Mat ex = exp_i_hermitian(HermitianMatrix(hb)).mat();
    rep.residuals.exponential_identity = max_abs(ex - V.mat());
    const EmbeddedUnitary W(N, UnitaryMatrix(ex));
    const int K = sample_cutoff(rep.certificate.M, N);
    auto st = worst_distance(
        oracle, [&](const Vec &psi) { return W.apply(psi); }, rep.config.E, K, rep.config.samples,
        rep.config.seed ^ 0xe1e1e1ULL);
    rep.residuals.sampled_distance = st.worst;
    rep.states_evaluated = st.evaluated;

    const Residuals &t = rep.limits;
    if (rep.degree > 3 * L) rep.failures.push_back("degree <= 3 L");
    if (rep.residuals.cross_block > t.cross_block) rep.failures.push_back("cross-block residual <= tol_block");
    if (rep.residuals.block_equality > t.block_equality)
        rep.failures.push_back("block of eval(P) equals the generator");
    if (rep.residuals.exponential_identity > t.exponential_identity)
        rep.failures.push_back("block of exp(i eval(P)) equals V_N");
    if (rep.residuals.sampled_distance > t.sampled_distance)
        rep.failures.push_back("sampled distance of exp(i P) to the oracle <= epsilon");
}

inline void write_outputs(const PipelineConfig &c, const CompilationReport &rep, const PolyHamiltonian *P) {
    if (P && !c.polynomial_out.empty()) write_json_file(c.polynomial_out, to_json(*P));
    if (!c.report_out.empty()) write_json_file(c.report_out, to_json(rep));
}

} // namespace detail

struct PipelineResult {
    CompilationReport report;
    PolyHamiltonian P;
};

/// Truncation, principal logarithm and polynomial synthesis of a physical
/// unitary, with every residual measured. Writes the configured files.
/// Stage errors propagate tagged with the stage name; residual failures
/// are recorded in the report.
inline PipelineResult compile_physical_unitary(const PipelineConfig &config) {
    config.validate();
    PipelineResult out;
    CompilationReport &rep = out.report;
    rep.config = config;
    detail::Stopwatch sw;

    const OraclePtr oracle =
        detail::staged("oracle", [&] { return make_oracle(config.oracle, required_columns(config.E, config.epsilon)); });
    rep.timings["oracle"] = sw.lap();
    const TruncationResult tr = detail::staged(
        "truncation", [&] { return run_truncation(*oracle, config.E, config.epsilon, config.samples, config.seed); });
    rep.certificate = tr.certificate;
    rep.timings["truncation"] = sw.lap();
    const UnitaryMatrix &V = tr.truncation.V.block();
    rep.generator_cutoff = V.cutoff();
    const HermitianMatrix H = detail::staged("logarithm", [&] { return principal_log_unitary(V); });
    rep.timings["logarithm"] = sw.lap();
    out.P = detail::staged("synthesis", [&] { return synth_hermitian(H); });
    rep.timings["synthesis"] = sw.lap();
    rep.limits = detail::residual_limits(config, H.mat());
    detail::staged("verification", [&] {
        detail::check_polynomial(*oracle, out.P, V, tr.params.N, H, rep);
        return 0;
    });
    rep.timings["verification"] = sw.lap();
    rep.passed = rep.failures.empty();
    detail::write_outputs(config, rep, &out.P);
    return out;
}

/// Largest |sum c_k n^k - node_n| over the nodes of every factor carrying
/// both forms, relative to the rounding scale sum |c_k| n^k.
inline double coefficient_mismatch(const json &pj) {
    double worst = 0.0;
    for (const auto &t : pj.at("terms"))
        for (const auto &f : t.at("factors")) {
            if (!f.contains("num_poly") || !f.contains("nodes")) continue;
            const auto c = f.at("num_poly").get<std::vector<double>>();
            const auto v = f.at("nodes").get<std::vector<double>>();
            for (std::size_t n = 0; n < v.size(); ++n) {
                long double s = 0.0L, scale = 0.0L, pw = 1.0L;
                for (double ck : c) {
                    s += ck * pw;
                    scale += std::fabs(ck) * pw;
                    pw *= static_cast<long double>(n);
                }
                const long double err = std::fabs(s - v[n]);
                const long double allow = 1e-12L * (1.0L + scale + std::fabs(v[n]));
                if (err > allow) worst = std::max(worst, static_cast<double>(err / (1.0L + scale)));
            }
        }
    return worst;
}

/// Re-checks shipped artifacts: the certificate inequalities, a fresh
/// truncation from the recorded configuration, and every residual of P.
inline CompilationReport verify(const json &polynomial, const json &report) {
    CompilationReport rep;
    detail::Stopwatch sw;
    json cfg;
    TruncationCertificate claimed;
    try {
        cfg = report.at("config");
        claimed = certificate_from_json(report.at("certificate"));
    } catch (const json::exception &e) {
        throw ConfigurationError(std::string("malformed report: ") + e.what());
    }
    rep.config = pipeline_config_from_json(cfg);
    for (const auto &v : certificate_violations(claimed)) rep.failures.push_back("certificate: " + v);

    const PolyHamiltonian P = polyham_from_json(polynomial);
    const OraclePtr oracle = detail::staged(
        "oracle", [&] { return make_oracle(rep.config.oracle, required_columns(rep.config.E, rep.config.epsilon)); });
    const CutoffParams p = cutoff_params(rep.config.E, rep.config.epsilon, *oracle);
    if (claimed.M != p.M || claimed.N != p.N || std::fabs(claimed.delta - p.delta) > 1e-12 * std::max(1.0, p.delta))
        rep.failures.push_back("certificate M, N, delta match the recomputed cutoffs");
    Truncation tr;
    try {
        const GramReport g = gram_measure(*oracle, p.M, p.N, p.delta);
        tr = truncate_unitary(*oracle, p.M, p.N, p.delta);
        rep.certificate = certify(*oracle, tr.V, p, g, tr.bounds, rep.config.E, rep.config.epsilon,
                                  rep.config.samples, rep.config.seed);
    } catch (const CertificateFailure &e) {
        rep.failures.push_back(std::string("recomputed truncation: ") + e.what());
        rep.timings["verify"] = sw.lap();
        return rep;
    }
    for (const auto &v : certificate_violations(rep.certificate)) rep.failures.push_back("recomputed certificate: " + v);

    const UnitaryMatrix &V = tr.V.block();
    rep.generator_cutoff = V.cutoff();
    const HermitianMatrix H = principal_log_unitary(V);
    rep.limits = detail::residual_limits(rep.config, H.mat());
    detail::check_polynomial(*oracle, P, V, p.N, H, rep);
    rep.residuals.coefficient_mismatch = coefficient_mismatch(polynomial);
    if (rep.residuals.coefficient_mismatch > rep.limits.coefficient_mismatch)
        rep.failures.push_back("num_poly coefficients agree with the node values");
    rep.timings["verify"] = sw.lap();
    rep.passed = rep.failures.empty();
    return rep;
}

inline CompilationReport verify_files(const std::string &polynomial_path, const std::string &report_path) {
    return verify(read_json_file(polynomial_path), read_json_file(report_path));
}

} // namespace bosonic
