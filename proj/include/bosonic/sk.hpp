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

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "commutator.hpp"
#include "gates.hpp"
#include "net.hpp"
#include "oracle.hpp"
#include "polyham.hpp"
#include "sampling.hpp"
#include "truncation.hpp"

namespace bosonic {

inline constexpr int kMaxSKDepth = 8;

struct SKResult {
    GateWord word;
    std::vector<double> errors; ///< distance to the target (modulo the center) after each depth 0..k
};

namespace detail {

inline GateWord sk_impl(const Mat &U, int depth, const NetDictionary &net, std::vector<double> *errs) {
    if (depth == 0) {
        GateWord w = net.nearest(U);
        if (errs) errs->push_back(center_distance(U, w.net));
        return w;
    }
    GateWord V = sk_impl(U, depth - 1, net, errs);
    const int d = static_cast<int>(U.rows());
    Mat delta = U * V.net.adjoint();
    delta *= std::polar(1.0, kTwoPi * nearest_center(delta) / d);
    const double off = op_norm(delta - Mat::Identity(d, d));
    if (off > 0.5)
        throw ConvergenceFailure("Solovay-Kitaev step starts " + std::to_string(off) +
                                 " from the identity; the base net is too coarse (need <= 0.5)");
    GateWord w = V;
    if (off > 0.0) {
        const Commutator bc = gc_decompose(delta);
        const GateWord Bw = sk_impl(bc.B, depth - 1, net, nullptr);
        const GateWord Cw = sk_impl(bc.C, depth - 1, net, nullptr);
        w = V.then(Cw.inverse()).then(Bw.inverse()).then(Cw).then(Bw);
    }
    if (errs) errs->push_back(center_distance(U, w.net));
    return w;
}

} // namespace detail

/// Solovay-Kitaev approximation of a special unitary. With `strict`, an
/// error that fails to shrink from one depth to the next is reported as a
/// convergence failure.
inline SKResult sk_approximate(const Mat &target, int depth, const NetDictionary &net, bool strict = false) {
    if (depth < 0) throw ContractViolation("depth must be non-negative");
    if (depth > kMaxSKDepth) throw ConvergenceFailure("depth " + std::to_string(depth) + " exceeds the limit " +
                                                      std::to_string(kMaxSKDepth));
    if (target.rows() != net.dim() || target.cols() != net.dim()) throw ContractViolation("target dimension mismatch");
    if (unitarity_defect(target) > tolerances().unitary) throw ContractViolation("target is not unitary");
    if (std::abs(target.determinant() - 1.0) > 1e-9) throw DomainError("target must have unit determinant");
    SKResult r;
    r.word = detail::sk_impl(target, depth, net, &r.errors);
    if (strict)
        for (std::size_t k = 1; k < r.errors.size(); ++k)
            if (r.errors[k - 1] > 1e-13 && r.errors[k] >= r.errors[k - 1]) {
                std::string msg = "Solovay-Kitaev error stopped contracting:";
                for (double e : r.errors) msg += " " + std::to_string(e);
                throw ConvergenceFailure(msg);
            }
    return r;
}

inline GateWord sk_recurse(const UnitaryMatrix &target, int depth, const NetDictionary &net) {
    return sk_approximate(target.mat(), depth, net, true).word;
}

/// err_k = c err_{k-1}^a fitted by least squares in log space.
struct SKFit {
    double exponent = std::nan("");
    double constant = std::nan("");
    std::vector<double> depth_errors;
};

inline SKFit fit_sk_contraction(const std::vector<double> &e) {
    SKFit f;
    f.depth_errors = e;
    std::vector<double> x, y;
    for (std::size_t k = 1; k < e.size(); ++k)
        if (e[k - 1] > 0.0 && e[k] > 0.0) {
            x.push_back(std::log(e[k - 1]));
            y.push_back(std::log(e[k]));
        }
    if (x.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            mx += x[i] / x.size();
            my += y[i] / x.size();
        }
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
        }
        f.exponent = sxx > 0 ? sxy / sxx : std::nan("");
        f.constant = std::exp(my - f.exponent * mx);
    } else if (x.size() == 1) {
        f.constant = std::exp(y[0] - 1.5 * x[0]);
    }
    return f;
}

/// Geometric-mean error per depth over Haar-random targets, and its fit.
inline SKFit measure_sk_contraction(const NetDictionary &net, int max_depth, int targets, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> logsum(max_depth + 1, 0.0);
    for (int t = 0; t < targets; ++t) {
        const Mat u = haar_special_unitary(rng, net.dim());
        const auto r = sk_approximate(u, max_depth, net);
        for (int k = 0; k <= max_depth; ++k) logsum[k] += std::log(std::max(r.errors[k], 1e-300));
    }
    std::vector<double> e(max_depth + 1);
    for (int k = 0; k <= max_depth; ++k) e[k] = std::exp(logsum[k] / targets);
    return fit_sk_contraction(e);
}

struct LiftedGate {
    int gate = 0;
    HermitianMatrix generator;
    PolyHamiltonian P;
};

/// e^{iH} = G with H the principal logarithm, realized by synth_hermitian.
inline LiftedGate lift_gate(const Mat &G, int index = 0) {
    LiftedGate g;
    g.gate = index;
    g.generator = principal_log_unitary(UnitaryMatrix(G));
    g.P = synth_hermitian(g.generator);
    return g;
}

/// One polynomial Hamiltonian per distinct gate in the word; inverted
/// occurrences use the negated generator.
inline std::vector<LiftedGate> lift_word(const GateWord &w, const GateSet &G) {
    std::map<int, bool> used;
    for (const auto &r : w.indices) used[r.gate] = true;
    std::vector<LiftedGate> out;
    for (const auto &[g, _] : used) out.push_back(lift_gate(G.gate(g).mat(), g));
    return out;
}

/// Product of e^{+-i eval(P_k)} along the word at cutoff D.
inline Mat lifted_product(const std::vector<GateRef> &indices, const std::vector<LiftedGate> &lifted, int D) {
    std::map<int, Mat> ex;
    for (const auto &l : lifted) ex[l.gate] = exp_i_hermitian(HermitianMatrix(eval_matrix(l.P, D).mat())).mat();
    Mat u = Mat::Identity(D + 1, D + 1);
    for (const auto &r : indices) {
        auto it = ex.find(r.gate);
        if (it == ex.end()) throw ContractViolation("word uses a gate that was not lifted");
        u = (r.inverted ? Mat(it->second.adjoint()) : it->second) * u;
    }
    return u;
}

struct SKCompileOptions {
    int depth = 3;
    int samples = 2000;
    std::uint64_t seed = 1;
    int fit_targets = 8;
};

struct SKCompilation {
    GateWord word;
    std::vector<LiftedGate> lifted;
    TruncationCertificate certificate;
    Mat block;                 ///< V_N on H_N
    double global_phase = 0.0; ///< V_N ~ e^{i phase} * word
    int depth_used = 0;
    std::vector<double> sk_errors;
    double sk_error = 0.0;
    int lift_cutoff = 0;
    double lift_residual = 0.0;
    double sampled_distance = 0.0;
    double min_tail_margin = 0.0;
    std::size_t states_evaluated = 0;
    SKFit fit;
};

/// Gate-word compilation of a physical unitary on the levels 0..N of the gate set.
inline SKCompilation compile_physical(const UnitaryOracle &oracle, double E, double epsilon, const GateSet &G,
                                      const NetDictionary &net, const SKCompileOptions &opt) {
    const int N = G.dim() - 1;
    if (detail::guarded_ceil(64.0 * E / (epsilon * epsilon)) > N)
        throw ConfigurationError("gate set dimension too small: need N >= 64 E / eps^2 = " +
                                 std::to_string(64.0 * E / (epsilon * epsilon)) + ", have N = " + std::to_string(N));
    if (net.dim() != G.dim()) throw ContractViolation("net and gate set dimensions differ");
    if (opt.samples < 1) throw ContractViolation("samples must be positive");
    const int M = std::min(energy_cutoff(E, epsilon), N);
    SKCompilation out;

    Mat c(N + 1, N + 1);
    for (int j = 0; j <= N; ++j) c.col(j) = oracle.column(j, N);
    auto [q, r] = phase_fixed_qr(c);
    out.block = q;
    CutoffParams p;
    p.M = M;
    p.N = N;
    p.profile = oracle.energy_profile(M);
    p.delta = p.profile / N;
    const GramReport g = gram_measure(oracle, M, N, p.delta);
    out.certificate = certify(oracle, EmbeddedUnitary(N, UnitaryMatrix(q)), p, g, r_bounds(r), E, epsilon,
                              opt.samples, opt.seed);
    if (out.certificate.sampled_worst_distance > epsilon)
        throw CertificateFailure("no effective dimension N + 1 = " + std::to_string(N + 1) +
                                 ": sampled distance " + std::to_string(out.certificate.sampled_worst_distance) +
                                 " exceeds epsilon");

    const double chi = std::arg(q.determinant());
    const Mat vsu = q * std::polar(1.0, -chi / (N + 1));
    for (int k = 0; k <= opt.depth; ++k) {
        auto res = sk_approximate(vsu, k, net, true);
        out.word = std::move(res.word);
        out.sk_errors = std::move(res.errors);
        out.depth_used = k;
        out.sk_error = out.sk_errors.back();
        if (out.sk_error <= epsilon / 4.0) break;
    }
    if (out.sk_error > epsilon / 4.0)
        throw ConvergenceFailure("Solovay-Kitaev error " + std::to_string(out.sk_error) + " above eps/4 at depth " +
                                 std::to_string(opt.depth));
    int best = 0;
    double bd = 1e300;
    for (int k = 0; k <= N; ++k) {
        const double dist = op_norm(vsu - std::polar(1.0, kTwoPi * k / (N + 1)) * out.word.net);
        if (dist < bd) {
            bd = dist;
            best = k;
        }
    }
    out.global_phase = chi / (N + 1) + kTwoPi * best / (N + 1);

    out.lifted = lift_word(out.word, G);
    out.lift_cutoff = 4 * N + 2;
    const Mat lp = lifted_product(out.word.indices, out.lifted, out.lift_cutoff);
    out.lift_residual = max_abs(lp.topLeftCorner(N + 1, N + 1) - out.word.net);
    if (out.lift_residual > 1e-8 * std::max<std::size_t>(1, out.word.length()))
        throw CertificateFailure("lifted word does not reproduce the gate product on the block");

    const Mat S = std::polar(1.0, out.global_phase) * lp.topLeftCorner(N + 1, N + 1);
    const EmbeddedUnitary W(N, UnitaryMatrix(S));
    const int K = sample_cutoff(M, N);
    auto st = worst_distance(
        oracle, [&](const Vec &psi) { return W.apply(psi); }, E, K, opt.samples, opt.seed ^ 0x5c5c5cULL, N);
    out.sampled_distance = st.worst;
    out.min_tail_margin = st.min_tail_margin;
    out.states_evaluated = st.evaluated;
    if (out.min_tail_margin < -1e-12) throw CertificateFailure("tail bound <psi|Pi_N|psi> >= 1 - E/N violated");
    if (out.sampled_distance > 2.0 * epsilon)
        throw CertificateFailure("sampled distance " + std::to_string(out.sampled_distance) + " exceeds 2 eps");
    if (opt.fit_targets > 0)
        out.fit = measure_sk_contraction(net, std::clamp(opt.depth, 2, 3), opt.fit_targets, opt.seed);
    return out;
}

inline json to_json(const SKFit &f) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return {{"exponent", num(f.exponent)}, {"constant", num(f.constant)}, {"depth_errors", f.depth_errors}};
}

inline json to_json(const SKCompilation &c, const GateSet &G) {
    json gates = json::array();
    for (const auto &l : c.lifted)
        gates.push_back({{"gate", l.gate},
                         {"name", G.name(l.gate)},
                         {"generator", matrix_to_json(l.generator.mat())},
                         {"polynomial", to_json(l.P)}});
    return {{"tool_version", kToolVersion},
            {"gateset", to_json(G)},
            {"indices", to_json(c.word.indices)},
            {"length", c.word.length()},
            {"net_unitary", matrix_to_json(c.word.net)},
            {"target_block", matrix_to_json(c.block)},
            {"global_phase", c.global_phase},
            {"depth", c.depth_used},
            {"sk_errors", c.sk_errors},
            {"sk_error", c.sk_error},
            {"sk_fit", to_json(c.fit)},
            {"lifted_gates", gates},
            {"lift_cutoff", c.lift_cutoff},
            {"lift_residual", c.lift_residual},
            {"sampled_distance", c.sampled_distance},
            {"min_tail_margin", c.min_tail_margin},
            {"states_evaluated", c.states_evaluated},
            {"certificate", to_json(c.certificate)}};
}

} // namespace bosonic
