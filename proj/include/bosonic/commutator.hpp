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
#include <vector>

#include "errors.hpp"
#include "fock.hpp"
#include "gates.hpp"

namespace bosonic {

inline Mat group_commutator(const Mat &B, const Mat &C) { return B * C * B.adjoint() * C.adjoint(); }

/// Generalized Gell-Mann basis of traceless Hermitian d x d matrices, tr(L_a L_b) = 2 delta_ab.
inline std::vector<Mat> gell_mann_basis(int d) {
    std::vector<Mat> out;
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            Mat s = Mat::Zero(d, d), a = Mat::Zero(d, d);
            s(j, k) = s(k, j) = 1.0;
            a(j, k) = cplx(0.0, -1.0);
            a(k, j) = cplx(0.0, 1.0);
            out.push_back(s);
            out.push_back(a);
        }
    for (int l = 1; l < d; ++l) {
        Mat m = Mat::Zero(d, d);
        const double c = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int j = 0; j < l; ++j) m(j, j) = c;
        m(l, l) = -c * l;
        out.push_back(m);
    }
    return out;
}

struct Commutator {
    Mat B, C;
};

namespace detail {

inline Mat rotation_x(double phi) {
    Mat r(2, 2);
    r << std::cos(phi / 2), cplx(0.0, -std::sin(phi / 2)), cplx(0.0, -std::sin(phi / 2)), std::cos(phi / 2);
    return r;
}
inline Mat rotation_y(double phi) {
    Mat r(2, 2);
    r << std::cos(phi / 2), -std::sin(phi / 2), std::sin(phi / 2), std::cos(phi / 2);
    return r;
}

// Schur vectors ordered by eigenphase
inline Mat sorted_schur_vectors(const Mat &u) {
    Eigen::ComplexSchur<Mat> cs(u);
    const Mat &t = cs.matrixT();
    const Mat &z = cs.matrixU();
    std::vector<int> order(u.rows());
    for (int k = 0; k < u.rows(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return std::arg(t(a, a)) < std::arg(t(b, b)); });
    Mat out(u.rows(), u.cols());
    for (int k = 0; k < u.rows(); ++k) out.col(k) = z.col(order[k]);
    return out;
}

inline Commutator gc_qubit(const Mat &delta) {
    const double w = std::clamp(0.5 * delta.trace().real(), -1.0, 1.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - w * w)); // sin(theta/2)
    if (s == 0.0) return {Mat::Identity(2, 2), Mat::Identity(2, 2)};
    // sin(theta/2) = 2 u sqrt(1 - u^2), u = sin^2(phi/2)
    const double u = std::sqrt(0.5 * s * s / (1.0 + std::sqrt(1.0 - s * s)));
    const double phi = 2.0 * std::asin(std::sqrt(u));
    const Mat b = rotation_x(phi), c = rotation_y(phi);
    const Mat S = sorted_schur_vectors(delta) * sorted_schur_vectors(group_commutator(b, c)).adjoint();
    return {S * b * S.adjoint(), S * c * S.adjoint()};
}

// balanced first-order guess refined by Newton steps on the exact product
inline Commutator gc_newton(const Mat &delta) {
    const int d = static_cast<int>(delta.rows());
    const auto basis = gell_mann_basis(d);
    const int nb = static_cast<int>(basis.size());
    const Mat A = centered_log_unitary(UnitaryMatrix(delta)).mat();
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    Mat fourier(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) fourier(j, k) = std::polar(1.0 / std::sqrt(double(d)), kTwoPi * j * k / d);
    const Mat frame = es.eigenvectors() * fourier;
    const Mat Dp = fourier.adjoint() * es.eigenvalues().cast<cplx>().asDiagonal() * fourier; // zero diagonal
    Mat f = Mat::Zero(d, d), g = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) f(j, j) = j - 0.5 * (d - 1);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            if (j != k) g(j, k) = cplx(0.0, -1.0) * Dp(j, k) / (f(j, j).real() - f(k, k).real());
    const double lam = std::sqrt(std::max(g.norm(), 1e-300) / f.norm());
    const Mat F0 = lam * frame * f * frame.adjoint();
    const Mat G0 = frame * g * frame.adjoint() / lam;
    Eigen::VectorXd x(2 * nb);
    for (int a = 0; a < nb; ++a) {
        x(a) = 0.5 * (basis[a] * F0).trace().real();
        x(nb + a) = 0.5 * (basis[a] * G0).trace().real();
    }
    auto unitaries = [&](const Eigen::VectorXd &p) {
        Mat F = Mat::Zero(d, d), G = Mat::Zero(d, d);
        for (int a = 0; a < nb; ++a) {
            F += p(a) * basis[a];
            G += p(nb + a) * basis[a];
        }
        return std::make_pair(exp_i_dense(F), exp_i_dense(G));
    };
    // Gell-Mann coordinates of the Hermitian part of -i K Delta^dagger; zero iff K = Delta near I
    auto residual = [&](const Eigen::VectorXd &p) {
        auto [b, c] = unitaries(p);
        const Mat k = group_commutator(b, c) * delta.adjoint();
        const Mat h = (k - k.adjoint()) * cplx(0.0, -0.5);
        Eigen::VectorXd out(nb);
        for (int a = 0; a < nb; ++a) out(a) = 0.5 * (basis[a] * h).trace().real();
        return out;
    };
    Eigen::VectorXd r = residual(x);
    for (int it = 0; it < 80 && r.lpNorm<Eigen::Infinity>() > 1e-15; ++it) {
        const double h = 1e-6;
        Eigen::MatrixXd J(r.size(), 2 * nb);
        for (int a = 0; a < 2 * nb; ++a) {
            Eigen::VectorXd xp = x, xm = x;
            xp(a) += h;
            xm(a) -= h;
            J.col(a) = (residual(xp) - residual(xm)) / (2.0 * h);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
        cod.setThreshold(1e-8);
        const Eigen::VectorXd dx = cod.solve(-r);
        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
            const Eigen::VectorXd xn = x + t * dx;
            const Eigen::VectorXd rn = residual(xn);
            if (rn.norm() < r.norm()) {
                x = xn;
                r = rn;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    auto [b, c] = unitaries(x);
    return {b, c};
}

} // namespace detail

/// Balanced group commutator: B C B^dagger C^dagger = Delta with
/// ||B - I||, ||C - I|| of order ||Delta - I||^{1/2}.
inline Commutator gc_decompose(const Mat &delta) {
    const int d = static_cast<int>(delta.rows());
    if (d < 2 || delta.cols() != d) throw ContractViolation("gc_decompose needs a square matrix of side >= 2");
    if (unitarity_defect(delta) > 1e-9) throw ContractViolation("gc_decompose needs a unitary");
    if (std::abs(delta.determinant() - 1.0) > 1e-9) throw DomainError("gc_decompose needs unit determinant");
    if (op_norm(delta - Mat::Identity(d, d)) > 0.5 + 1e-12) throw DomainError("gc_decompose needs ||Delta - I|| <= 0.5");
    Commutator out = d == 2 ? detail::gc_qubit(delta) : detail::gc_newton(delta);
    double err = op_norm(group_commutator(out.B, out.C) - delta);
    if (d == 2 && err > 1e-10) {
        out = detail::gc_newton(delta);
        err = op_norm(group_commutator(out.B, out.C) - delta);
    }
    if (err > 1e-10) throw NumericalError("group commutator solve left residual " + std::to_string(err));
    return out;
}

} // namespace bosonic
