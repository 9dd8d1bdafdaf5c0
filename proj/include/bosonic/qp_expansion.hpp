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

#include <map>
#include <utility>
#include <vector>

#include "polyham.hpp"

namespace bosonic {

/// Polynomial in (q_k, p_k) read as a Weyl-ordered operator.
struct QPPolynomial {
    using Exponents = std::vector<std::pair<int, int>>; // (q power, p power) per mode
    int modes = 1;
    std::map<Exponents, cplx> monomials;

    int degree() const {
        int d = 0;
        for (const auto &[e, c] : monomials) {
            int t = 0;
            for (const auto &[x, y] : e) t += x + y;
            d = std::max(d, t);
        }
        return d;
    }
};

namespace detail {

struct GaussianRational {
    Rational re{0}, im{0};
};

using QPMap = std::map<std::pair<int, int>, GaussianRational>;

inline std::vector<std::vector<BigInt>> stirling2(int n) {
    std::vector<std::vector<BigInt>> s(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
    s[0][0] = 1;
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= j; ++k) s[j][k] = s[j - 1][k - 1] + s[j - 1][k] * k;
    return s;
}

inline BigInt binomial(int n, int k) {
    BigInt b = 1;
    for (int t = 1; t <= k; ++t) b = b * (n - k + t) / t;
    return b;
}

// Weyl symbol of (a^dag)^r f(n) a^s in the variables q, p, with the common
// factor 2^{-(x+y)/2} of q^x p^y left out
inline QPMap factor_symbol(const LadderTerm &f) {
    const auto c = f.poly.coefficients();
    const int deg = static_cast<int>(c.size()) - 1;
    const auto S = stirling2(std::max(deg, 0));
    // normal-ordered: sum_k w_k (a^dag)^{r+k} a^{s+k}
    std::vector<Rational> w(deg + 1, Rational(0));
    for (int j = 0; j <= deg; ++j)
        for (int k = 0; k <= j; ++k) w[k] += c[j] * Rational(S[j][k]);
    // (alpha*)^u alpha^v after the normal -> Weyl shift
    std::map<std::pair<int, int>, Rational> sym;
    for (int k = 0; k <= deg; ++k) {
        if (w[k] == 0) continue;
        const int P = f.dag + k, Q = f.ann + k;
        Rational fp = 1, fq = 1, tf = 1, half = 1;
        for (int t = 0; t <= std::min(P, Q); ++t) {
            if (t > 0) {
                fp *= P - t + 1;
                fq *= Q - t + 1;
                tf *= t;
                half *= Rational(-1, 2);
            }
            sym[{P - t, Q - t}] += w[k] * half * fp * fq / tf;
        }
    }
    // (q - ip)^u (q + ip)^v
    QPMap out;
    for (const auto &[uv, coef] : sym) {
        if (coef == 0) continue;
        const auto [u, v] = uv;
        for (int a = 0; a <= u; ++a) {
            for (int b = 0; b <= v; ++b) {
                Rational mag = coef * Rational(binomial(u, a) * binomial(v, b));
                int phase = ((b - a) % 4 + 4) % 4; // power of i
                auto &g = out[{u - a + v - b, a + b}];
                switch (phase) {
                case 0: g.re += mag; break;
                case 1: g.im += mag; break;
                case 2: g.re -= mag; break;
                default: g.im -= mag; break;
                }
            }
        }
    }
    return out;
}

} // namespace detail

/// Substitutes a = (q+ip)/sqrt2, a^dag = (q-ip)/sqrt2 and rewrites each
/// normal-ordered monomial as its Weyl symbol.
inline QPPolynomial expand_qp(const PolyHamiltonian &P) {
    QPPolynomial out;
    out.modes = P.modes();
    std::map<std::pair<const void *, std::pair<int, int>>, std::vector<std::pair<std::pair<int, int>, cplx>>> cache;
    for (const auto &t : P.terms()) {
        std::vector<std::pair<QPPolynomial::Exponents, cplx>> acc{{{}, t.coeff}};
        for (const auto &f : t.factors) {
            auto key = std::make_pair(f.poly.id(), std::make_pair(f.dag, f.ann));
            auto it = cache.find(key);
            if (it == cache.end()) {
                std::vector<std::pair<std::pair<int, int>, cplx>> flat;
                for (const auto &[xy, g] : detail::factor_symbol(f)) {
                    const double scale = std::pow(2.0, -0.5 * (xy.first + xy.second));
                    const cplx c(g.re.convert_to<double>() * scale, g.im.convert_to<double>() * scale);
                    if (c != cplx(0.0, 0.0)) flat.emplace_back(xy, c);
                }
                it = cache.emplace(key, std::move(flat)).first;
            }
            std::vector<std::pair<QPPolynomial::Exponents, cplx>> next;
            for (const auto &[e, c] : acc)
                for (const auto &[xy, g] : it->second) {
                    auto ne = e;
                    ne.push_back(xy);
                    next.emplace_back(std::move(ne), c * g);
                }
            acc = std::move(next);
        }
        for (auto &[e, c] : acc) out.monomials[e] += c;
    }
    for (auto it = out.monomials.begin(); it != out.monomials.end();)
        it = it->second == cplx(0.0, 0.0) ? out.monomials.erase(it) : std::next(it);
    return out;
}

namespace detail {

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Weyl-ordered q^x p^y: W(q^{x+1} p^y) = {Q, W(q^x p^y)} / 2
inline Mat weyl_monomial(const LadderSet &L, int x, int y) {
    const Mat &q = L.Q.mat();
    Mat w = Mat::Identity(q.rows(), q.cols());
    for (int k = 0; k < y; ++k) w = w * L.P.mat();
    for (int k = 0; k < x; ++k) w = 0.5 * (q * w + w * q);
    return w;
}

} // namespace detail

/// Matrix of the Weyl-ordered operator, computed with `pad` extra levels per
/// mode and cropped to the requested cutoffs.
inline ComplexMatrix eval_qp_matrix(const QPPolynomial &P, const std::vector<int> &cutoffs, int pad = -1) {
    if (static_cast<int>(cutoffs.size()) != P.modes) throw ContractViolation("one evaluation cutoff per mode is required");
    if (pad < 0) pad = P.degree() + 2;
    const int dim = detail::cutoff_product(cutoffs);
    Mat out = Mat::Zero(dim, dim);
    std::vector<LadderSet> ladders;
    for (int D : cutoffs) ladders.push_back(ladder_matrices(D + pad));
    std::map<std::pair<int, std::pair<int, int>>, Mat> memo;
    for (const auto &[e, c] : P.monomials) {
        Mat acc = Mat::Identity(1, 1);
        for (int k = 0; k < P.modes; ++k) {
            auto key = std::make_pair(k, e[k]);
            auto it = memo.find(key);
            if (it == memo.end())
                it = memo.emplace(key, detail::weyl_monomial(ladders[k], e[k].first, e[k].second)
                                           .topLeftCorner(cutoffs[k] + 1, cutoffs[k] + 1))
                         .first;
            acc = detail::kron(acc, it->second);
        }
        out += c * acc;
    }
    return ComplexMatrix(out);
}

inline json to_json(const QPPolynomial &P) {
    json mono = json::array();
    for (const auto &[e, c] : P.monomials) {
        json ex = json::array();
        for (const auto &[x, y] : e) ex.push_back({x, y});
        mono.push_back({{"exps", ex}, {"coeff", to_json(c)}});
    }
    return {{"modes", P.modes}, {"monomials", mono}};
}

} // namespace bosonic
