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

#include <gtest/gtest.h>

#include <bosonic/fock.hpp>
#include <bosonic/random.hpp>

using namespace bosonic;

namespace {

Mat taylor_exp_i(const Mat &h) {
    Mat term = Mat::Identity(h.rows(), h.cols());
    Mat sum = term;
    for (int k = 1; k <= 60; ++k) {
        term = term * h * cplx(0.0, 1.0) / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

double eigen_trace_norm(const Mat &x) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (x + x.adjoint()));
    return es.eigenvalues().cwiseAbs().sum();
}

Mat random_contraction(Rng &rng, int n) {
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s(i) = rng.uniform();
    return haar_unitary(rng, n) * s.cast<cplx>().asDiagonal() * haar_unitary(rng, n);
}

} // namespace

TEST(Ladder, CutoffOneAnnihilator) {
    auto l = ladder_matrices(1);
    Mat expect(2, 2);
    expect << 0, 1, 0, 0;
    EXPECT_EQ(l.A.mat(), expect);
}

TEST(Ladder, CutoffTwoEntry) {
    auto l = ladder_matrices(2);
    EXPECT_NEAR(l.A(1, 2).real(), 1.41421356, 1e-8);
    EXPECT_EQ(l.A(1, 2).imag(), 0.0);
}

TEST(Ladder, TruncatedCommutatorAtCutoffFive) {
    auto l = ladder_matrices(5);
    Mat c = l.Q.mat() * l.P.mat() - l.P.mat() * l.Q.mat();
    Mat expect = cplx(0, 1) * Mat::Identity(6, 6);
    expect(5, 5) = cplx(0, 1) * (1.0 - 6.0);
    EXPECT_LT(max_abs(c - expect), 1e-14);
}

TEST(Ladder, CommutatorDefectOnlyInLastEntry) {
    for (int d = 0; d <= 32; ++d) {
        auto l = ladder_matrices(d);
        Mat c = l.Q.mat() * l.P.mat() - l.P.mat() * l.Q.mat() - cplx(0, 1) * Mat::Identity(d + 1, d + 1);
        EXPECT_NEAR(c(d, d).imag(), -(d + 1.0), 1e-12) << d;
        c(d, d) = 0;
        EXPECT_LT(max_abs(c), 1e-12) << d;
    }
}

TEST(Ladder, AdjointAndNumberExact) {
    for (int d = 0; d <= 64; ++d) {
        auto l = ladder_matrices(d);
        EXPECT_EQ(l.Adag.mat(), l.A.mat().adjoint()) << d;
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j) EXPECT_EQ(l.Nop(i, j), i == j ? cplx(i) : cplx(0)) << d;
    }
}

TEST(Ladder, NegativeCutoffRejected) { EXPECT_THROW(ladder_matrices(-1), ContractViolation); }

TEST(Types, InvariantsEnforced) {
    Mat m(2, 2);
    m << 0, 1, 0, 0;
    EXPECT_THROW(HermitianMatrix{m}, ContractViolation);
    EXPECT_THROW(UnitaryMatrix{m}, ContractViolation);
    m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(ComplexMatrix{m}, NumericalError);
    Vec v = Vec::Ones(2);
    EXPECT_THROW(PureState{v}, ContractViolation);
}

TEST(ExpIHermitian, ZeroGivesIdentity) {
    auto u = exp_i_hermitian(HermitianMatrix(Mat::Zero(4, 4)));
    EXPECT_LT(max_abs(u.mat() - Mat::Identity(4, 4)), 1e-15);
}

TEST(ExpIHermitian, DiagonalPhases) {
    Mat h = Mat::Zero(2, 2);
    h(1, 1) = kPi;
    auto u = exp_i_hermitian(HermitianMatrix(h));
    EXPECT_NEAR(u(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(u(1, 1).real(), -1.0, 1e-15);
    EXPECT_LT(std::abs(u(0, 1)) + std::abs(u(1, 0)), 1e-15);
}

TEST(ExpIHermitian, MatchesTaylorSeries) {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        Mat h = random_hermitian(rng, 4);
        auto u = exp_i_hermitian(HermitianMatrix(h));
        EXPECT_LT(max_abs(u.mat() * u.mat().adjoint() - Mat::Identity(4, 4)), 1e-12);
        EXPECT_LT(max_abs(u.mat() - taylor_exp_i(h)), 1e-9);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        for (int k = 0; k < 4; ++k) {
            Vec v = es.eigenvectors().col(k);
            EXPECT_LT((u.mat() * v - std::polar(1.0, es.eigenvalues()(k)) * v).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(ExpIHermitian, BlockDiagonalInputStaysBlockDiagonal) {
    Rng rng(3);
    Mat h = Mat::Zero(6, 6);
    h.topLeftCorner(3, 3) = random_hermitian(rng, 3);
    h.bottomRightCorner(3, 3) = random_hermitian(rng, 3, 1e6);
    auto u = exp_i_hermitian(HermitianMatrix(h));
    EXPECT_EQ(max_abs(u.mat().topRightCorner(3, 3)), 0.0);
    EXPECT_EQ(max_abs(u.mat().bottomLeftCorner(3, 3)), 0.0);
    EXPECT_LT(max_abs(u.mat().topLeftCorner(3, 3) - taylor_exp_i(h.topLeftCorner(3, 3))), 1e-12);
}

TEST(PrincipalLog, IdentityGivesZero) {
    auto h = principal_log_unitary(UnitaryMatrix::identity(3));
    EXPECT_LT(max_abs(h.mat()), 1e-11);
}

TEST(PrincipalLog, DiagonalPhase) {
    Mat v = Mat::Zero(2, 2);
    v(0, 0) = 1;
    v(1, 1) = cplx(0, 1);
    auto h = principal_log_unitary(UnitaryMatrix(v));
    EXPECT_NEAR(h(0, 0).real(), 0.0, 1e-14);
    EXPECT_NEAR(h(1, 1).real(), kPi / 2, 1e-14);
}

TEST(PrincipalLog, PhasesInPrincipalRange) {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        auto h = principal_log_unitary(UnitaryMatrix(haar_unitary(rng, 5)));
        Eigen::SelfAdjointEigenSolver<Mat> es(h.mat());
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
        EXPECT_LT(es.eigenvalues().maxCoeff(), kTwoPi);
    }
}

TEST(PrincipalLog, RoundTrip) {
    Rng rng(17);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + t % 9;
        Mat v = haar_unitary(rng, n);
        auto h = principal_log_unitary(UnitaryMatrix(v));
        EXPECT_LT(max_abs(exp_i_hermitian(h).mat() - v), 1e-9);
    }
}

TEST(PrincipalLog, DegenerateSpectrum) {
    Rng rng(23);
    Mat w = haar_unitary(rng, 4);
    Vec ph(4);
    ph << cplx(-1), cplx(-1), cplx(0, 1), cplx(0, 1);
    Mat v = w * ph.asDiagonal() * w.adjoint();
    auto h = principal_log_unitary(UnitaryMatrix(v));
    EXPECT_LT(max_abs(exp_i_hermitian(h).mat() - v), 1e-9);
}

TEST(TraceDistancePure, IdentityAndZero) {
    Rng rng(1);
    PureState phi(random_unit_vector(rng, 3));
    EXPECT_NEAR(trace_distance_pure(ComplexMatrix(Mat::Identity(3, 3)), phi), 0.0, 1e-12);
    EXPECT_NEAR(trace_distance_pure(ComplexMatrix(Mat::Zero(3, 3)), phi), 1.0, 1e-15);
}

TEST(TraceDistancePure, MatchesEigenvalueOracle) {
    Rng rng(29);
    for (int t = 0; t < 500; ++t) {
        const int n = 2 + t % 5;
        Mat a = random_contraction(rng, n);
        Vec phi = random_unit_vector(rng, n);
        Vec av = a * phi;
        double oracle = eigen_trace_norm(av * av.adjoint() - phi * phi.adjoint());
        EXPECT_NEAR(trace_distance_pure(ComplexMatrix(a), PureState(phi)), oracle, 1e-10);
    }
}

TEST(PureTraceNorm, AgreesWithEigenvalueOracle) {
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        Vec a = random_unit_vector(rng, 4) * rng.uniform();
        Vec b = random_unit_vector(rng, 4) * rng.uniform();
        EXPECT_NEAR(pure_trace_norm(a, b), eigen_trace_norm(a * a.adjoint() - b * b.adjoint()), 1e-10);
    }
}

TEST(TraceDistanceStates, Examples) {
    Vec a(2), b(2);
    a << 1, 0;
    b << 0, 1;
    EXPECT_EQ(trace_distance_states(PureState(a), PureState(a)), 0.0);
    EXPECT_EQ(trace_distance_states(PureState(a), PureState(b)), 1.0);
    Vec c(2);
    c << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    EXPECT_NEAR(trace_distance_states(PureState(c), PureState(a)), 0.70710678, 1e-8);
}

TEST(GentleMeasurement, Examples) {
    EXPECT_EQ(gentle_measurement_bound(1.0), 0.0);
    EXPECT_DOUBLE_EQ(gentle_measurement_bound(0.75), 1.0);
    EXPECT_THROW(gentle_measurement_bound(1.5), ContractViolation);
    EXPECT_THROW(gentle_measurement_bound(-0.1), ContractViolation);
}

TEST(GentleMeasurement, DominatesExactDisturbance) {
    Rng rng(37);
    for (int t = 0; t < 500; ++t) {
        Vec psi = random_unit_vector(rng, 7);
        Mat rho = psi * psi.adjoint();
        Mat pi = Mat::Zero(7, 7);
        pi.topLeftCorner(4, 4).setIdentity();
        double exact = eigen_trace_norm(rho - pi * rho * pi);
        double overlap = (pi * rho).trace().real();
        EXPECT_LE(exact, gentle_measurement_bound(overlap) + 1e-12);
    }
}
