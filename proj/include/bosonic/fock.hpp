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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "tolerances.hpp"

namespace bosonic {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double max_abs(const Mat &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool all_finite(const Mat &m) {
    for (Eigen::Index k = 0; k < m.size(); ++k)
        if (!std::isfinite(m.data()[k].real()) || !std::isfinite(m.data()[k].imag())) return false;
    return true;
}

/// Dense matrix over a truncated Fock space, rows 0..row_cutoff, columns 0..col_cutoff.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(Mat m) : m_(std::move(m)) {
        if (m_.rows() == 0 || m_.cols() == 0) throw ContractViolation("matrix must have at least one row and column");
        if (!all_finite(m_)) throw NumericalError("matrix has non-finite entries");
    }

    int row_cutoff() const { return static_cast<int>(m_.rows()) - 1; }
    int col_cutoff() const { return static_cast<int>(m_.cols()) - 1; }
    bool square() const { return m_.rows() == m_.cols(); }
    int cutoff() const {
        if (!square()) throw ContractViolation("cutoff() called on a rectangular matrix");
        return row_cutoff();
    }
    Eigen::Index dim() const { return m_.rows(); }

    const Mat &mat() const { return m_; }
    cplx operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  protected:
    Mat m_;
};

inline double hermiticity_defect(const Mat &m) {
    return max_abs(m - m.adjoint()) / std::max(1.0, max_abs(m));
}

inline double unitarity_defect(const Mat &m) {
    return max_abs(m.adjoint() * m - Mat::Identity(m.cols(), m.cols()));
}

class HermitianMatrix : public ComplexMatrix {
  public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(Mat m) : ComplexMatrix(std::move(m)) {
        if (!square()) throw ContractViolation("Hermitian matrix must be square");
        double d = hermiticity_defect(m_);
        if (d > tolerances().hermitian) {
            std::ostringstream os;
            os << "matrix is not Hermitian: defect " << d;
            throw ContractViolation(os.str());
        }
    }
};

class UnitaryMatrix : public ComplexMatrix {
  public:
    UnitaryMatrix() = default;
    explicit UnitaryMatrix(Mat m) : ComplexMatrix(std::move(m)) {
        if (!square()) throw ContractViolation("unitary matrix must be square");
        double d = unitarity_defect(m_);
        if (d > tolerances().unitary) {
            std::ostringstream os;
            os << "matrix is not unitary: defect " << d;
            throw ContractViolation(os.str());
        }
    }
    static UnitaryMatrix identity(int cutoff) { return UnitaryMatrix(Mat::Identity(cutoff + 1, cutoff + 1)); }
};

/// Normalized state vector on span{|0>, ..., |cutoff>}.
class PureState {
  public:
    PureState() = default;
    explicit PureState(Vec v) : v_(std::move(v)) {
        if (v_.size() == 0) throw ContractViolation("state must have at least one amplitude");
        if (!all_finite(v_)) throw NumericalError("state has non-finite amplitudes");
        if (std::abs(v_.norm() - 1.0) > tolerances().state_norm)
            throw ContractViolation("state is not normalized");
    }
    static PureState basis(int n, int cutoff) {
        Vec v = Vec::Zero(cutoff + 1);
        v(n) = 1.0;
        return PureState(std::move(v));
    }
    int cutoff() const { return static_cast<int>(v_.size()) - 1; }
    const Vec &amps() const { return v_; }

  private:
    Vec v_;
};

struct LadderSet {
    ComplexMatrix A, Adag, Nop, Q, P;
};

/// a, a^dagger, n, q and p truncated at the given cutoff.
inline LadderSet ladder_matrices(int cutoff) {
    if (cutoff < 0) throw ContractViolation("cutoff must be non-negative");
    const Eigen::Index d = cutoff + 1;
    Mat a = Mat::Zero(d, d);
    for (Eigen::Index n = 0; n + 1 < d; ++n) a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
    Mat ad = a.adjoint();
    Mat num = Mat::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) num(n, n) = static_cast<double>(n);
    const double s = 1.0 / std::sqrt(2.0);
    Mat q = (a + ad) * s;
    Mat p = (a - ad) * cplx(0.0, -s);
    return {ComplexMatrix(a), ComplexMatrix(ad), ComplexMatrix(num), ComplexMatrix(q), ComplexMatrix(p)};
}

namespace detail {

// connected components of the nonzero pattern of a square matrix
inline std::vector<std::vector<Eigen::Index>> sparsity_blocks(const Mat &h) {
    const Eigen::Index n = h.rows();
    std::vector<Eigen::Index> parent(n);
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j && h(i, j) != cplx(0.0)) {
                Eigen::Index a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    std::vector<std::vector<Eigen::Index>> out;
    std::vector<Eigen::Index> slot(n, -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<Eigen::Index>(out.size());
            out.emplace_back();
        }
        out[slot[r]].push_back(i);
    }
    return out;
}

inline Mat exp_i_dense(const Mat &h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Hermitian eigendecomposition failed: dimension " << h.rows() << ", max entry " << max_abs(h);
        throw NumericalError(os.str());
    }
    const Vec ph = es.eigenvalues().unaryExpr([](double l) { return std::polar(1.0, l); }).cast<cplx>();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace detail

/// e^{iH} by Hermitian eigendecomposition. Exactly decoupled blocks
/// of H are diagonalized separately, so the result is exactly block
/// diagonal whenever H is.
inline UnitaryMatrix exp_i_hermitian(const HermitianMatrix &H) {
    const Mat &h = H.mat();
    auto blocks = detail::sparsity_blocks(h);
    if (blocks.size() == 1) return UnitaryMatrix(detail::exp_i_dense(h));
    Mat u = Mat::Zero(h.rows(), h.cols());
    for (const auto &b : blocks) {
        const auto k = static_cast<Eigen::Index>(b.size());
        Mat sub(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = h(b[i], b[j]);
        Mat e = detail::exp_i_dense(sub);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j) u(b[i], b[j]) = e(i, j);
    }
    return UnitaryMatrix(std::move(u));
}

namespace detail {

// Schur form of a unitary: V = Z diag(t) Z^dagger with Z unitary
inline std::pair<Mat, Vec> unitary_schur(const Mat &v) {
    Eigen::ComplexSchur<Mat> cs(v);
    if (cs.info() != Eigen::Success) throw NumericalError("Schur decomposition of unitary failed");
    return {cs.matrixU(), cs.matrixT().diagonal()};
}

inline HermitianMatrix log_from_phases(const Mat &z, const Eigen::VectorXd &phases, const Mat &v) {
    Mat h = z * phases.cast<cplx>().asDiagonal() * z.adjoint();
    h = 0.5 * (h + h.adjoint()).eval();
    HermitianMatrix out(std::move(h));
    double err = max_abs(exp_i_hermitian(out).mat() - v);
    if (err > 1e-9) {
        std::ostringstream os;
        os << "unitary logarithm does not round-trip: residual " << err;
        throw NumericalError(os.str());
    }
    return out;
}

} // namespace detail

/// Hermitian H with e^{iH} = V and eigenphases in [0, 2*pi). Phases
/// within 1e-12 below 2*pi are wrapped to (tiny negative) zero.
inline HermitianMatrix principal_log_unitary(const UnitaryMatrix &V) {
    auto [z, t] = detail::unitary_schur(V.mat());
    Eigen::VectorXd ph(t.size());
    for (Eigen::Index k = 0; k < t.size(); ++k) {
        double a = std::arg(t(k));
        if (a < 0) a += kTwoPi;
        if (a >= kTwoPi - 1e-12) a -= kTwoPi;
        ph(k) = a;
    }
    return detail::log_from_phases(z, ph, V.mat());
}

/// Logarithm with eigenphases in (-pi, pi].
inline HermitianMatrix centered_log_unitary(const UnitaryMatrix &V) {
    auto [z, t] = detail::unitary_schur(V.mat());
    Eigen::VectorXd ph(t.size());
    for (Eigen::Index k = 0; k < t.size(); ++k) ph(k) = std::arg(t(k));
    return detail::log_from_phases(z, ph, V.mat());
}

namespace detail {

inline double clamped_sqrt(double r, const char *what) {
    if (r < -1e-12) {
        std::ostringstream os;
        os << what << ": negative radicand " << r;
        throw NumericalError(os.str());
    }
    return std::sqrt(std::max(r, 0.0));
}

} // namespace detail

/// ||a a^dagger - b b^dagger||_1 = sqrt((|a|^2 + |b|^2)^2 - 4 |<a|b>|^2) for
/// unnormalized a and b. The radicand is evaluated as |a - e^{i phi} b|^2 (|a|^2 + |b|^2 + 2|<a|b>|)
/// with the phase aligning b to a, which avoids cancellation for nearby vectors.
inline double pure_trace_norm(const Vec &a, const Vec &b) {
    if (a.size() != b.size()) throw ContractViolation("vectors of different length");
    const cplx ov = b.dot(a);
    const double m = std::abs(ov);
    const cplx ph = m > 0 ? ov / m : cplx(1.0);
    const double s = a.squaredNorm() + b.squaredNorm();
    const double r = (a - ph * b).squaredNorm() * (s + 2.0 * m);
    return detail::clamped_sqrt(r, "pure_trace_norm");
}

/// ||A phi phi^dagger A^dagger - phi phi^dagger||_1 in closed form,
/// sqrt((1 + <A^dagger A>)^2 - 4 |<A>|^2).
inline double trace_distance_pure(const ComplexMatrix &A, const PureState &phi) {
    if (!A.square() || A.dim() != phi.amps().size()) throw ContractViolation("dimension mismatch");
    return pure_trace_norm(A.mat() * phi.amps(), phi.amps());
}

/// sqrt(1 - |<psi|phi>|^2).
inline double trace_distance_states(const PureState &psi, const PureState &phi) {
    if (psi.cutoff() != phi.cutoff()) throw ContractViolation("states have different cutoffs");
    const double f = std::min(1.0, std::norm(psi.amps().dot(phi.amps())));
    return std::sqrt(1.0 - f);
}

inline double gentle_measurement_bound(double overlap) {
    if (!(overlap >= -1e-12 && overlap <= 1.0 + 1e-12)) throw ContractViolation("overlap must lie in [0, 1]");
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - overlap));
}

} // namespace bosonic
