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

#include <climits>
#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "fock.hpp"
#include "json_io.hpp"

namespace bosonic {

/// Column access to the Fock matrix of a physical unitary together with
/// an upper bound on its energy profile.
class UnitaryOracle {
  public:
    virtual ~UnitaryOracle() = default;

    /// Text form accepted by make_oracle (or the source file path).
    virtual std::string spec() const = 0;
    /// <i|U|j> for i = 0..row_cutoff.
    virtual Vec column(int j, int row_cutoff) const = 0;
    /// Upper bound on sup <psi|U^dagger n U|psi> over states supported on H_n.
    virtual double energy_profile(int n) const = 0;
    /// Rows beyond this index vanish in every column 0..max_col.
    virtual int support_cutoff(int max_col) const = 0;
    /// Largest column the oracle can produce.
    virtual int max_column() const = 0;

    /// U psi over rows 0..row_cutoff, psi given on levels 0..psi.size()-1.
    virtual Vec apply(const Vec &psi, int row_cutoff) const {
        Vec out = Vec::Zero(row_cutoff + 1);
        for (Eigen::Index j = 0; j < psi.size(); ++j)
            if (psi(j) != cplx(0.0)) out += psi(j) * column(static_cast<int>(j), row_cutoff);
        return out;
    }

  protected:
    void check_column(int j) const {
        if (j < 0) throw ContractViolation("negative column index");
        if (j > max_column())
            throw ResourceLimit("oracle " + spec() + " was prepared for columns <= " + std::to_string(max_column()));
    }
};

using OraclePtr = std::shared_ptr<const UnitaryOracle>;

/// Diagonal unitary e^{i phase(n)} |n><n|.
class DiagonalOracle : public UnitaryOracle {
  public:
    DiagonalOracle(std::string spec, std::function<double(int)> phase)
        : spec_(std::move(spec)), phase_(std::move(phase)) {}

    std::string spec() const override { return spec_; }
    Vec column(int j, int row_cutoff) const override {
        check_column(j);
        Vec v = Vec::Zero(row_cutoff + 1);
        if (j <= row_cutoff) v(j) = std::polar(1.0, phase_(j));
        return v;
    }
    double energy_profile(int n) const override { return static_cast<double>(n); }
    int support_cutoff(int max_col) const override { return max_col; }
    int max_column() const override { return INT_MAX - 1; }
    Vec apply(const Vec &psi, int row_cutoff) const override {
        Vec out = Vec::Zero(row_cutoff + 1);
        for (Eigen::Index j = 0; j < std::min<Eigen::Index>(psi.size(), row_cutoff + 1); ++j)
            out(j) = psi(j) * std::polar(1.0, phase_(static_cast<int>(j)));
        return out;
    }

  private:
    std::string spec_;
    std::function<double(int)> phase_;
};

/// Oracle backed by a stored block of columns at a reference cutoff.
class MatrixOracle : public UnitaryOracle {
  public:
    /// `profile` empty means: derive it from the stored columns plus `tail_allowance`.
    MatrixOracle(std::string spec, Mat columns, std::vector<double> profile, double tail_allowance = 1e-6)
        : spec_(std::move(spec)), m_(std::move(columns)), profile_(std::move(profile)), tail_(tail_allowance) {
        if (!all_finite(m_)) throw ConfigurationError("oracle matrix has non-finite entries");
        if (m_.rows() < m_.cols()) throw ConfigurationError("oracle matrix needs at least as many rows as columns");
        support_.resize(m_.cols());
        int run = 0;
        for (Eigen::Index j = 0; j < m_.cols(); ++j) {
            int last = 0;
            for (Eigen::Index i = m_.rows() - 1; i >= 0; --i)
                if (m_(i, j) != cplx(0.0)) {
                    last = static_cast<int>(i);
                    break;
                }
            run = std::max(run, last);
            support_[j] = run;
        }
    }

    std::string spec() const override { return spec_; }
    int reference_cutoff() const { return static_cast<int>(m_.rows()) - 1; }
    int max_column() const override { return static_cast<int>(m_.cols()) - 1; }

    Vec column(int j, int row_cutoff) const override {
        check_column(j);
        Vec v = Vec::Zero(row_cutoff + 1);
        const Eigen::Index n = std::min<Eigen::Index>(row_cutoff + 1, m_.rows());
        v.head(n) = m_.col(j).head(n);
        return v;
    }

    double energy_profile(int n) const override {
        if (n < 0) throw ContractViolation("negative profile argument");
        if (!profile_.empty()) {
            if (static_cast<std::size_t>(n) >= profile_.size()) return std::numeric_limits<double>::infinity();
            return profile_[n];
        }
        if (n > max_column()) return std::numeric_limits<double>::infinity();
        const int rows = support_[n] + 1;
        Mat c = m_.topLeftCorner(rows, n + 1);
        Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(rows, 0.0, rows - 1.0);
        Mat g = c.adjoint() * w.cast<cplx>().asDiagonal() * c;
        Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff() + tail_;
    }

    int support_cutoff(int max_col) const override {
        check_column(max_col);
        return support_[max_col];
    }

    Vec apply(const Vec &psi, int row_cutoff) const override {
        if (psi.size() == 0) return Vec::Zero(row_cutoff + 1);
        check_column(static_cast<int>(psi.size()) - 1);
        Vec out = Vec::Zero(row_cutoff + 1);
        const Eigen::Index n = std::min<Eigen::Index>(row_cutoff + 1, m_.rows());
        out.head(n) = m_.topLeftCorner(n, psi.size()) * psi;
        return out;
    }

    const Mat &columns() const { return m_; }

  private:
    std::string spec_;
    Mat m_;
    std::vector<double> profile_;
    double tail_;
    std::vector<int> support_;
};

inline constexpr int kMaxReferenceCutoff = 3000;
inline constexpr double kNegligibleAmplitude = 1e-12;

/// Columns 0..ncols-1 of exp(G) for a real skew-symmetric tridiagonal G
/// with G(k+1,k) = c_k. Conjugating by diag(i^k) turns G into -iT with
/// T real symmetric, so one real tridiagonal eigensolve suffices.
inline Mat skew_chain_exp(const Eigen::VectorXd &c, Eigen::Index ncols) {
    const Eigen::Index n = c.size() + 1;
    ncols = std::min(ncols, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(Eigen::VectorXd::Zero(n), c, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed");
    const Eigen::MatrixXd &w = es.eigenvectors();
    const Eigen::VectorXd &l = es.eigenvalues();
    Eigen::MatrixXd top = w.topRows(ncols).transpose();
    Eigen::MatrixXd re = w * (l.array().cos().matrix().asDiagonal() * top);
    Eigen::MatrixXd im = -(w * (l.array().sin().matrix().asDiagonal() * top));
    static const cplx ipow[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    Mat out(n, ncols);
    for (Eigen::Index k = 0; k < ncols; ++k)
        for (Eigen::Index j = 0; j < n; ++j) out(j, k) = cplx(re(j, k), im(j, k)) * ipow[((j - k) % 4 + 4) % 4];
    return out;
}

/// Reference cutoff grown until the last 16 rows of every requested
/// column carry less than 1e-13 weight; entries below 1e-12 are zeroed.
inline Mat reference_columns(const std::function<Mat(int, int)> &columns_at, int max_column) {
    int k = std::max(200, max_column + 64);
    for (;;) {
        if (k > kMaxReferenceCutoff)
            throw ResourceLimit("reference cutoff would exceed " + std::to_string(kMaxReferenceCutoff));
        Mat cols = columns_at(k, max_column);
        double leak = cols.bottomRows(16).cwiseAbs2().colwise().sum().maxCoeff();
        if (leak < 1e-13) {
            return cols.unaryExpr([](cplx z) { return std::abs(z) < kNegligibleAmplitude ? cplx(0.0) : z; });
        }
        k = static_cast<int>(std::ceil(1.25 * k));
    }
}

/// D(alpha) = exp(alpha a^dagger - conj(alpha) a).
inline std::shared_ptr<MatrixOracle> make_displacement(cplx alpha, int max_column, std::string spec) {
    const double r = std::abs(alpha), phi = std::arg(alpha);
    auto cols = [r, phi](int k, int J) {
        Eigen::VectorXd c(k);
        for (int n = 0; n < k; ++n) c(n) = r * std::sqrt(n + 1.0);
        Mat m = skew_chain_exp(c, J + 1);
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) *= std::polar(1.0, phi * double(i - j));
        return m;
    };
    return std::make_shared<MatrixOracle>(std::move(spec), reference_columns(cols, max_column), std::vector<double>{});
}

/// S(r) = exp((r/2)(a^2 - a^dagger^2)), one chain per parity.
inline std::shared_ptr<MatrixOracle> make_squeezing(double r, int max_column, std::string spec) {
    auto cols = [r](int k, int J) {
        Mat m = Mat::Zero(k + 1, J + 1);
        for (int p = 0; p < 2; ++p) {
            const int len = (k - p) / 2 + 1;
            Eigen::VectorXd c(len - 1);
            for (int t = 0; t + 1 < len; ++t) {
                const double n = p + 2.0 * t;
                c(t) = -0.5 * r * std::sqrt((n + 1) * (n + 2));
            }
            const int want = J < p ? 0 : (J - p) / 2 + 1;
            if (want == 0) continue;
            Mat e = skew_chain_exp(c, want);
            for (int b = 0; b < e.cols(); ++b)
                for (int a = 0; a < len; ++a) m(p + 2 * a, p + 2 * b) = e(a, b);
        }
        return m;
    };
    return std::make_shared<MatrixOracle>(std::move(spec), reference_columns(cols, max_column), std::vector<double>{});
}

/// Oracle file: {"name", "matrix": <matrix JSON>, "energy_profile": [...]}.
inline std::shared_ptr<MatrixOracle> load_oracle_file(const std::string &path) {
    json j = read_json_file(path);
    if (!j.contains("matrix") || !j.contains("energy_profile"))
        throw ConfigurationError("oracle file needs \"matrix\" and \"energy_profile\"");
    std::vector<double> prof = j.at("energy_profile").get<std::vector<double>>();
    for (std::size_t n = 1; n < prof.size(); ++n)
        if (prof[n] < prof[n - 1]) throw ConfigurationError("energy profile must be non-decreasing");
    if (prof.empty()) throw ConfigurationError("energy profile must not be empty");
    return std::make_shared<MatrixOracle>(path, matrix_from_json(j.at("matrix")), std::move(prof));
}

namespace detail {

inline std::vector<double> parse_params(const std::string &s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception &) {
            throw ConfigurationError("bad oracle parameter '" + tok + "'");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

} // namespace detail

/// Builds an oracle from "identity", "rotation[:theta]", "kerr[:theta]",
/// "displacement[:re[,im]]", "squeezing[:r]" or the path of an oracle file.
/// Reference-matrix oracles are prepared for columns up to `max_column`.
inline OraclePtr make_oracle(const std::string &spec, int max_column) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::vector<double> p =
        colon == std::string::npos ? std::vector<double>{} : detail::parse_params(spec.substr(colon + 1));
    auto param = [&](std::size_t i, double dflt) { return i < p.size() ? p[i] : dflt; };
    auto arity = [&](std::size_t n) {
        if (p.size() > n) throw ConfigurationError("too many parameters for oracle " + kind);
    };
    if (kind == "identity") {
        arity(0);
        return std::make_shared<DiagonalOracle>("identity", [](int) { return 0.0; });
    }
    if (kind == "rotation") {
        arity(1);
        const double th = param(0, 0.4);
        return std::make_shared<DiagonalOracle>(spec, [th](int n) { return th * n; });
    }
    if (kind == "kerr") {
        arity(1);
        const double th = param(0, 0.3);
        return std::make_shared<DiagonalOracle>(spec, [th](int n) { return th * double(n) * double(n); });
    }
    if (kind == "displacement") {
        arity(2);
        return make_displacement(cplx(param(0, 0.3), param(1, 0.0)), max_column, spec);
    }
    if (kind == "squeezing") {
        arity(1);
        return make_squeezing(param(0, 0.2), max_column, spec);
    }
    if (colon == std::string::npos && spec.size() > 5 && spec.substr(spec.size() - 5) == ".json")
        return load_oracle_file(spec);
    throw ConfigurationError("unknown oracle '" + spec + "'");
}

/// Names of the builtin families, in their default parameterization.
inline std::vector<std::string> builtin_oracle_specs() {
    return {"identity", "rotation:0.4", "kerr:0.3", "displacement:0.3", "squeezing:0.2"};
}

inline std::vector<OraclePtr> builtin_oracles(int max_column) {
    std::vector<OraclePtr> out;
    for (const auto &s : builtin_oracle_specs()) out.push_back(make_oracle(s, max_column));
    return out;
}

} // namespace bosonic
