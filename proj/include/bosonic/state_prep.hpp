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

#include "fock.hpp"
#include "polyham.hpp"

namespace bosonic {

struct StatePreparation {
    int d_eps = 0;
    Vec truncated;          // renormalized target on levels 0..d_eps
    double truncation_distance = 0.0;
    HermitianMatrix generator;
    PolyHamiltonian P;
};

/// Unitary on span{|0>..|d>} whose first column is `u` (unit norm):
/// a Householder reflection taking e^{i arg u_0}|0> to u, times that phase on |0>.
inline Mat householder_completion(const Vec &u) {
    const Eigen::Index d = u.size();
    const double phi = std::abs(u(0)) > 0.0 ? std::arg(u(0)) : 0.0;
    Vec w = -u;
    w(0) += std::polar(1.0, phi);
    Mat U = Mat::Identity(d, d);
    const double wn = w.squaredNorm();
    if (wn > 0.0) U -= (2.0 / wn) * (w * w.adjoint());
    U.col(0) *= std::polar(1.0, phi);
    return U;
}

inline StatePreparation prepare_state(const Vec &target, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    if (target.size() == 0 || !all_finite(target)) throw ContractViolation("target must be a finite, non-empty amplitude list");
    const double norm = target.norm();
    if (!(norm > 0.0)) throw ContractViolation("target has zero norm");
    const Vec psi = target / norm;
    // smallest d with sqrt(1 - kept mass) <= epsilon; the tail is summed from the top
    const Eigen::Index n = psi.size();
    std::vector<double> tail(n + 1, 0.0);
    for (Eigen::Index k = n - 1; k >= 0; --k) tail[k] = tail[k + 1] + std::norm(psi(k));
    int d = 0;
    while (std::sqrt(std::max(0.0, tail[d + 1])) > epsilon) ++d;
    StatePreparation out;
    out.d_eps = d;
    out.truncation_distance = std::sqrt(std::max(0.0, tail[d + 1]));
    out.truncated = psi.head(d + 1).normalized();
    const UnitaryMatrix U(householder_completion(out.truncated));
    out.generator = principal_log_unitary(U);
    out.P = synth_hermitian(out.generator);
    return out;
}

/// e^{i eval(P)} |0> at the given cutoff (default d + degree).
inline Vec prepared_state(const StatePreparation &s, int cutoff = -1) {
    if (cutoff < 0) cutoff = s.d_eps + s.P.degree();
    cutoff = std::max(cutoff, s.d_eps);
    const HermitianMatrix H(eval_matrix(s.P, cutoff).mat());
    return exp_i_hermitian(H).mat().col(0);
}

} // namespace bosonic
