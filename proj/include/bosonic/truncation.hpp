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

#include <cstdint>
#include <string>
#include <vector>

#include "fock.hpp"
#include "json_io.hpp"
#include "oracle.hpp"
#include "sampling.hpp"

namespace bosonic {

inline constexpr const char *kToolVersion = "0.1.0";

namespace detail {

// ceiling that ignores floating noise just above an integer
inline double guarded_ceil(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return r;
    return std::ceil(x);
}

} // namespace detail

struct CutoffParams {
    int M = 0;
    std::int64_t N = 0;
    double profile = 0.0; ///< energy_profile(M)
    double delta = 0.0;
};

inline double sqrt_term(int M) { return 2.0 + std::sqrt(12.0 * (12.0 + 9.0 * M)); }

inline int energy_cutoff(double E, double epsilon) {
    if (!(E > 0.0) || !std::isfinite(E)) throw ContractViolation("energy bound must be positive");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ContractViolation("epsilon must lie in (0, 1]");
    const double m = detail::guarded_ceil(64.0 * E / (epsilon * epsilon));
    if (m > 1e8) throw ResourceLimit("energy cutoff M is too large");
    return std::max(2, static_cast<int>(m));
}

/// M = ceil(64 E / eps^2) (at least 2) and N = ceil(4 E_U(M) (2 + sqrt(12 (12 + 9M)))^2 / eps^2).
inline CutoffParams cutoff_params(double E, double epsilon, const UnitaryOracle &oracle) {
    CutoffParams p;
    p.M = energy_cutoff(E, epsilon);
    p.profile = oracle.energy_profile(p.M);
    if (!std::isfinite(p.profile) || p.profile < 0.0)
        throw ContractViolation("physicality violation: energy profile at " + std::to_string(p.M) + " is not finite");
    const double t = sqrt_term(p.M);
    const double n = detail::guarded_ceil(4.0 * p.profile * t * t / (epsilon * epsilon));
    if (n > 9e18) throw ResourceLimit("cutoff N overflows");
    p.N = std::max<std::int64_t>(static_cast<std::int64_t>(n), p.M);
    p.delta = p.profile / static_cast<double>(p.N);
    if (!(p.delta * 2.0 * p.M < 1.0)) throw NumericalError("cutoff N does not ensure delta < 1/(2M)");
    return p;
}

struct GramReport {
    double delta = 0.0;
    double max_offdiag = 0.0;
    double min_diag = 1.0;
    double max_diag = 1.0;
    double proj_max = 0.0; ///< max_j <u_j|P_j|u_j>
    int rows = 0;          ///< rows actually carrying weight, min(N, support)
};

inline int active_rows(const UnitaryOracle &oracle, int M, std::int64_t N) {
    return static_cast<int>(std::max<std::int64_t>(M, std::min<std::int64_t>(N, oracle.support_cutoff(M))));
}

/// Gram statistics of the first M+1 oracle columns truncated at row N, unchecked.
inline GramReport gram_measure(const UnitaryOracle &oracle, int M, std::int64_t N, double delta) {
    if (M < 0 || N < M) throw ContractViolation("gram_check needs 0 <= M <= N");
    GramReport g;
    g.delta = delta;
    g.rows = active_rows(oracle, M, N);
    Mat c(g.rows + 1, M + 1);
    for (int j = 0; j <= M; ++j) c.col(j) = oracle.column(j, g.rows);
    Mat gram = c.adjoint() * c;
    g.min_diag = gram.diagonal().real().minCoeff();
    g.max_diag = gram.diagonal().real().maxCoeff();
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j)
            if (i != j) g.max_offdiag = std::max(g.max_offdiag, std::abs(gram(i, j)));
    Eigen::LLT<Mat> llt(gram);
    if (llt.info() != Eigen::Success) throw CertificateFailure("truncated columns are rank deficient");
    Mat l = llt.matrixL();
    for (int j = 1; j <= M; ++j)
        g.proj_max = std::max(g.proj_max, gram(j, j).real() - std::norm(l(j, j)));
    return g;
}

/// gram_measure plus the inequalities |<u_i|u_j>| <= delta, 1 - delta <= <u_k|u_k> <= 1
/// and <u_j|P_j|u_j> <= delta.
inline GramReport gram_check(const UnitaryOracle &oracle, int M, std::int64_t N, double delta) {
    if (!(delta * 2.0 * M < 1.0)) throw ContractViolation("gram_check needs delta < 1/(2M)");
    const GramReport g = gram_measure(oracle, M, N, delta);
    const double tol = 1e-10;
    std::string bad;
    if (g.max_offdiag > delta + tol) bad += " |<u_i|u_j>| <= delta;";
    if (g.min_diag < 1.0 - delta - tol) bad += " <u_k|u_k> >= 1 - delta;";
    if (g.max_diag > 1.0 + tol) bad += " <u_k|u_k> <= 1;";
    if (g.proj_max > delta + tol) bad += " <u_j|P_j|u_j> <= delta;";
    if (!bad.empty()) throw CertificateFailure("Gram inequalities violated (energy profile is wrong?):" + bad);
    return g;
}

/// Unitary on H_N that equals `block` on levels 0..L and the identity above.
class EmbeddedUnitary {
  public:
    EmbeddedUnitary() = default;
    EmbeddedUnitary(std::int64_t cutoff, UnitaryMatrix block) : cutoff_(cutoff), block_(std::move(block)) {
        if (cutoff_ < block_.cutoff()) throw ContractViolation("embedding cutoff below block size");
    }
    std::int64_t cutoff() const { return cutoff_; }
    int block_cutoff() const { return block_.cutoff(); }
    const UnitaryMatrix &block() const { return block_; }

    Vec apply(const Vec &psi) const {
        const Eigen::Index b = block_.dim();
        Vec out = psi;
        if (psi.size() <= b) {
            Vec x = Vec::Zero(b);
            x.head(psi.size()) = psi;
            return block_.mat() * x;
        }
        out.head(b) = block_.mat() * psi.head(b);
        return out;
    }

  private:
    std::int64_t cutoff_ = 0;
    UnitaryMatrix block_;
};

struct RBounds {
    double min_diag = 1.0;
    double max_diag = 1.0;
    double max_offdiag = 0.0;
};

inline RBounds r_bounds(const Mat &r) {
    RBounds b;
    b.min_diag = r.diagonal().real().minCoeff();
    b.max_diag = r.diagonal().real().maxCoeff();
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index j = 0; j < r.cols(); ++j)
            if (i != j) b.max_offdiag = std::max(b.max_offdiag, std::abs(r(i, j)));
    return b;
}

struct Truncation {
    EmbeddedUnitary V;
    Mat R; ///< top (M+1) x (M+1) block, non-negative diagonal
    RBounds bounds;
};

/// Full Householder QR c = Q R with diag(R) >= 0; R is the top square block.
inline std::pair<Mat, Mat> phase_fixed_qr(const Mat &c) {
    const Eigen::Index rows = c.rows(), cols = c.cols();
    Eigen::HouseholderQR<Mat> qr(c);
    Mat q = qr.householderQ() * Mat::Identity(rows, rows);
    Mat r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < cols; ++k) {
        const cplx d = r(k, k);
        const cplx ph = std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0);
        q.col(k) *= ph;
        r.row(k) *= std::conj(ph);
        r(k, k) = std::abs(d);
    }
    return {std::move(q), std::move(r)};
}

/// Householder QR of the first M+1 columns with the phase convention
/// diag(R) >= 0. Rows beyond the oracle support are zero, so the QR is
/// taken on the active rows only and V_N is the identity above them.
inline Truncation truncate_unitary(const UnitaryOracle &oracle, int M, std::int64_t N, double delta) {
    const int L = active_rows(oracle, M, N);
    Mat c(L + 1, M + 1);
    for (int j = 0; j <= M; ++j) c.col(j) = oracle.column(j, L);
    auto [q, r] = phase_fixed_qr(c);
    Truncation t{EmbeddedUnitary(N, UnitaryMatrix(std::move(q))), std::move(r), {}};
    t.bounds = r_bounds(t.R);
    if (t.bounds.min_diag < std::sqrt(std::max(0.0, 1.0 - 2.0 * delta)) - 1e-8)
        throw CertificateFailure("rank deficiency: R diagonal below sqrt(1 - 2 delta)");
    return t;
}

struct TruncationCertificate {
    std::string oracle;
    double E = 0.0;
    double epsilon = 0.0;
    int M = 0;
    std::int64_t N = 0;
    double delta = 0.0;
    double profile = 0.0;
    double gram_max_offdiag = 0.0;
    double gram_min_diag = 1.0;
    double proj_max = 0.0;
    RBounds r;
    int active_cutoff = 0;
    double composite_bound = 0.0;
    double sampled_worst_distance = 0.0;
    std::size_t states_evaluated = 0;
    int samples = 0;
    int sample_cutoff = 0;
    std::uint64_t seed = 0;
};

/// 4 sqrt(E/M) + sqrt(E_U(M)/N) (2 + sqrt(12 (12 + 9M))).
inline double composite_bound(double E, int M, double profile, std::int64_t N) {
    return 4.0 * std::sqrt(E / M) + std::sqrt(profile / static_cast<double>(N)) * sqrt_term(M);
}

/// Levels used for sampled states.
inline int sample_cutoff(int M, std::int64_t N) {
    return static_cast<int>(std::min<std::int64_t>(N, 2LL * M)) + M + 2;
}

inline std::vector<std::string> certificate_violations(const TruncationCertificate &c) {
    std::vector<std::string> v;
    const double tol = 1e-10;
    if (!(c.delta * 2.0 * c.M < 1.0)) v.push_back("delta < 1/(2M)");
    if (c.gram_max_offdiag > c.delta + tol) v.push_back("|<u_i|u_j>| <= delta");
    if (c.gram_min_diag < 1.0 - c.delta - tol) v.push_back("<u_k|u_k> >= 1 - delta");
    if (c.proj_max > c.delta + tol) v.push_back("<u_j|P_j|u_j> <= delta");
    if (c.r.min_diag < std::sqrt(std::max(0.0, 1.0 - 2.0 * c.delta)) - 1e-8 || c.r.max_diag > 1.0 + tol)
        v.push_back("R diagonal in [sqrt(1 - 2 delta), 1]");
    if (c.r.max_offdiag > 4.0 * c.delta + tol) v.push_back("R off-diagonal <= 4 delta");
    if (c.sampled_worst_distance > c.composite_bound + tol) v.push_back("sampled distance <= composite bound");
    if (c.sampled_worst_distance > c.epsilon) v.push_back("sampled_worst_distance <= epsilon");
    return v;
}

/// Falsification test of the truncation guarantee on sampled energy-E states,
/// with the complement of V_N fixed to the identity.
inline TruncationCertificate certify(const UnitaryOracle &oracle, const EmbeddedUnitary &V, const CutoffParams &p,
                                     const GramReport &g, const RBounds &rb, double E, double epsilon, int samples,
                                     std::uint64_t seed) {
    if (samples < 1) throw ContractViolation("samples must be positive");
    TruncationCertificate c;
    c.oracle = oracle.spec();
    c.E = E;
    c.epsilon = epsilon;
    c.M = p.M;
    c.N = p.N;
    c.delta = p.delta;
    c.profile = p.profile;
    c.gram_max_offdiag = g.max_offdiag;
    c.gram_min_diag = g.min_diag;
    c.proj_max = g.proj_max;
    c.r = rb;
    c.active_cutoff = V.block_cutoff();
    c.composite_bound = composite_bound(E, p.M, p.profile, p.N);
    c.samples = samples;
    c.seed = seed;
    c.sample_cutoff = sample_cutoff(p.M, p.N);
    auto st = worst_distance(
        oracle, [&](const Vec &psi) { return V.apply(psi); }, E, c.sample_cutoff, samples, seed);
    c.sampled_worst_distance = st.worst;
    c.states_evaluated = st.evaluated;
    return c;
}

struct TruncationResult {
    CutoffParams params;
    GramReport gram;
    Truncation truncation;
    TruncationCertificate certificate;
};

/// cutoff_params, gram_check, truncate_unitary and certify in sequence.
/// Throws CertificateFailure when any certificate inequality fails.
inline TruncationResult run_truncation(const UnitaryOracle &oracle, double E, double epsilon, int samples,
                                       std::uint64_t seed) {
    TruncationResult r;
    r.params = cutoff_params(E, epsilon, oracle);
    r.gram = gram_check(oracle, r.params.M, r.params.N, r.params.delta);
    r.truncation = truncate_unitary(oracle, r.params.M, r.params.N, r.params.delta);
    r.certificate = certify(oracle, r.truncation.V, r.params, r.gram, r.truncation.bounds, E, epsilon, samples, seed);
    auto bad = certificate_violations(r.certificate);
    if (!bad.empty()) throw CertificateFailure("certificate inequality failed: " + bad.front());
    return r;
}

/// Columns an oracle must provide for a run at (E, epsilon).
inline int required_columns(double E, double epsilon) {
    const int M = energy_cutoff(E, epsilon);
    return 3 * M + 2;
}

inline json to_json(const TruncationCertificate &c) {
    return {{"tool_version", kToolVersion},
            {"oracle", c.oracle},
            {"E", c.E},
            {"epsilon", c.epsilon},
            {"M", c.M},
            {"N", c.N},
            {"delta", c.delta},
            {"energy_profile_M", c.profile},
            {"gram_max_offdiag", c.gram_max_offdiag},
            {"gram_min_diag", c.gram_min_diag},
            {"proj_max", c.proj_max},
            {"r_min_diag", c.r.min_diag},
            {"r_max_diag", c.r.max_diag},
            {"r_max_offdiag", c.r.max_offdiag},
            {"active_cutoff", c.active_cutoff},
            {"composite_bound", c.composite_bound},
            {"sampled_worst_distance", c.sampled_worst_distance},
            {"states_evaluated", c.states_evaluated},
            {"samples", c.samples},
            {"sample_cutoff", c.sample_cutoff},
            {"seed", c.seed}};
}

inline TruncationCertificate certificate_from_json(const json &j) {
    try {
        TruncationCertificate c;
        c.oracle = j.at("oracle").get<std::string>();
        c.E = j.at("E").get<double>();
        c.epsilon = j.at("epsilon").get<double>();
        c.M = j.at("M").get<int>();
        c.N = j.at("N").get<std::int64_t>();
        c.delta = j.at("delta").get<double>();
        c.profile = j.at("energy_profile_M").get<double>();
        c.gram_max_offdiag = j.at("gram_max_offdiag").get<double>();
        c.gram_min_diag = j.at("gram_min_diag").get<double>();
        c.proj_max = j.at("proj_max").get<double>();
        c.r.min_diag = j.at("r_min_diag").get<double>();
        c.r.max_diag = j.at("r_max_diag").get<double>();
        c.r.max_offdiag = j.at("r_max_offdiag").get<double>();
        c.active_cutoff = j.at("active_cutoff").get<int>();
        c.composite_bound = j.at("composite_bound").get<double>();
        c.sampled_worst_distance = j.at("sampled_worst_distance").get<double>();
        c.states_evaluated = j.at("states_evaluated").get<std::size_t>();
        c.samples = j.at("samples").get<int>();
        c.sample_cutoff = j.at("sample_cutoff").get<int>();
        c.seed = j.at("seed").get<std::uint64_t>();
        return c;
    } catch (const json::exception &e) {
        throw ConfigurationError(std::string("malformed certificate: ") + e.what());
    }
}

} // namespace bosonic
