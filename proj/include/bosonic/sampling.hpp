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
#include <functional>
#include <vector>

#include "fock.hpp"
#include "oracle.hpp"
#include "random.hpp"

namespace bosonic {

inline double mean_number(const Vec &psi) {
    double s = 0.0;
    for (Eigen::Index n = 1; n < psi.size(); ++n) s += static_cast<double>(n) * std::norm(psi(n));
    return s / psi.squaredNorm();
}

/// Rescales the excited part of psi so that <n> <= E, keeping it normalized.
inline Vec enforce_energy(Vec psi, double E) {
    psi /= psi.norm();
    if (mean_number(psi) <= E) return psi;
    double a = 0.0, b = 0.0;
    for (Eigen::Index n = 1; n < psi.size(); ++n) {
        a += static_cast<double>(n) * std::norm(psi(n));
        b += std::norm(psi(n));
    }
    double x0 = std::norm(psi(0));
    if (x0 < 1e-12) {
        psi(0) = 1e-6 * std::sqrt(b);
        x0 = std::norm(psi(0));
    }
    const double target = E * (1.0 - 1e-12);
    const double s = std::sqrt(target * x0 / (a - target * b));
    psi.tail(psi.size() - 1) *= s;
    return psi / psi.norm();
}

/// Random pure state on levels 0..K with <n> <= E. Three families are
/// cycled: sparse superpositions, power-law tails and geometric tails,
/// each mixed with the vacuum to meet the energy constraint.
inline Vec random_energy_state(Rng &rng, double E, int K, std::uint64_t index) {
    Vec chi = Vec::Zero(K + 1);
    switch (index % 3) {
    case 0: {
        const int t = rng.uniform_int(1, 4);
        for (int k = 0; k < t; ++k) {
            int n = static_cast<int>(std::floor(std::exp(rng.uniform() * std::log(K + 1.0))));
            n = std::clamp(n, 1, K);
            chi(n) += rng.cnormal();
        }
        break;
    }
    case 1: {
        const double g = 0.5 + 2.0 * rng.uniform();
        for (int n = 1; n <= K; ++n) chi(n) = rng.cnormal() * std::pow(static_cast<double>(n), -g);
        break;
    }
    default: {
        const double scale = std::exp(std::log(std::max(E, 1e-3) / 2) + rng.uniform() * std::log(K + 1.0));
        const double r = scale / (1.0 + scale);
        for (int n = 1; n <= K; ++n) chi(n) = rng.cnormal() * std::pow(r, 0.5 * n);
        break;
    }
    }
    if (chi.norm() == 0.0) chi(std::min(K, 1)) = 1.0;
    chi /= chi.norm();
    const double e = mean_number(chi);
    const double wmax = std::min(1.0, E / e) * (1.0 - 1e-12);
    const double w = wmax * std::pow(rng.uniform(), 0.3);
    Vec psi = std::sqrt(w) * chi;
    psi(0) += std::sqrt(1.0 - w) * std::polar(1.0, kTwoPi * rng.uniform());
    return psi / psi.norm();
}

/// Deterministic worst-case candidates: coherent states at energy E and
/// two-level states placing the whole energy budget on a single high level.
inline std::vector<Vec> adversarial_states(Rng &rng, double E, int K) {
    std::vector<Vec> out;
    for (int k = 0; k < 8; ++k) {
        const double phi = k < 4 ? kPi * k / 2 : kTwoPi * rng.uniform();
        const cplx alpha = std::polar(std::sqrt(E), phi);
        Vec v(K + 1);
        cplx c = std::exp(-0.5 * E);
        for (int n = 0; n <= K; ++n) {
            v(n) = c;
            c *= alpha / std::sqrt(n + 1.0);
        }
        out.push_back(v / v.norm());
    }
    const int b = std::max(0, static_cast<int>(std::ceil(E)) - 1);
    for (int k = b + 1; k <= K; ++k) {
        const double t = (E - b) / (k - b) * (1.0 - 1e-12);
        if (t > 1.0) continue;
        Vec v = Vec::Zero(K + 1);
        v(b) = std::sqrt(1.0 - t);
        v(k) = std::polar(std::sqrt(t), kTwoPi * rng.uniform());
        out.push_back(v);
    }
    return out;
}

struct SampleStats {
    double worst = 0.0;
    Vec worst_state;
    std::size_t evaluated = 0;
    double min_tail_margin = std::numeric_limits<double>::infinity(); ///< min of <Pi_N> - (1 - E/N)
    double max_energy = 0.0;
};

using StateMap = std::function<Vec(const Vec &)>;

/// Largest ||U psi psi^dagger U^dagger - W psi psi^dagger W^dagger||_1 over
/// random and adversarial energy-E states on levels 0..K, refined by a
/// local ascent. `tail_cutoff` >= 0 also tracks the tail bound at that cutoff.
inline SampleStats worst_distance(const UnitaryOracle &U, const StateMap &W, double E, int K, int samples,
                                  std::uint64_t seed, long long tail_cutoff = -1) {
    const int rows = std::max(U.support_cutoff(K), K);
    auto distance = [&](const Vec &psi) {
        Vec a = U.apply(psi, rows);
        Vec b = W(psi);
        const Eigen::Index n = std::max(a.size(), b.size());
        Vec aa = Vec::Zero(n), bb = Vec::Zero(n);
        aa.head(a.size()) = a;
        bb.head(b.size()) = b;
        return pure_trace_norm(aa, bb);
    };
    SampleStats st;
    auto consider = [&](const Vec &psi) {
        const double e = mean_number(psi);
        st.max_energy = std::max(st.max_energy, e);
        if (tail_cutoff >= 0) {
            const Eigen::Index keep = std::min<long long>(tail_cutoff + 1, psi.size());
            const double mass = psi.head(keep).squaredNorm();
            st.min_tail_margin = std::min(st.min_tail_margin, mass - (1.0 - E / double(tail_cutoff)));
        }
        const double d = distance(psi);
        ++st.evaluated;
        if (d > st.worst || st.worst_state.size() == 0) {
            st.worst = d;
            st.worst_state = psi;
        }
        return d;
    };
    const Rng root(seed);
    for (int i = 0; i < samples; ++i) {
        Rng r = root.fork(static_cast<std::uint64_t>(i));
        consider(random_energy_state(r, E, K, static_cast<std::uint64_t>(i)));
    }
    Rng adv = root.fork(0xadadadULL);
    for (const Vec &v : adversarial_states(adv, E, K)) consider(v);

    Rng asc = root.fork(0xa5cefULL);
    Vec cur = st.worst_state;
    double best = st.worst, sigma = 0.05;
    for (int it = 0; it < 300 && sigma > 1e-5; ++it) {
        Vec trial = cur;
        for (Eigen::Index n = 0; n < trial.size(); ++n)
            if (trial(n) != cplx(0.0) || asc.uniform() < 8.0 / trial.size()) trial(n) += sigma * asc.cnormal();
        trial = enforce_energy(trial, E);
        const double d = consider(trial);
        if (d > best) {
            best = d;
            cur = trial;
            sigma *= 1.5;
        } else {
            sigma *= 0.9;
        }
    }
    return st;
}

} // namespace bosonic
