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
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace bosonic {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

// exact value m * 2^e of a finite double
inline std::pair<BigInt, int> dyadic(double v) {
    if (!std::isfinite(v)) throw ContractViolation("polynomial data must be finite");
    if (v == 0.0) return {BigInt(0), 0};
    int e = 0;
    const double mant = std::frexp(v, &e);
    const auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
    return {BigInt(m), e - 53};
}

inline Rational to_rational(double v) {
    auto [m, e] = dyadic(v);
    Rational r(m);
    if (e > 0) r *= Rational(BigInt(1) << e);
    if (e < 0) r /= Rational(BigInt(1) << -e);
    return r;
}

inline BigInt factorial(int n) {
    BigInt f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace detail

/// Real polynomial with exact rational coefficients. A polynomial may also be
/// given by its values at the nodes 0..N, meaning the interpolant of degree
/// <= N; the node values are returned verbatim and everything else (degree,
/// values off the nodes, coefficients) is derived exactly on first use.
class RealPolynomial {
  public:
    RealPolynomial() : p_(std::make_shared<Impl>()) { p_->set_coefficients({}, BigInt(1)); }

    /// Exact coefficients, index = power.
    explicit RealPolynomial(const std::vector<Rational> &c) : p_(std::make_shared<Impl>()) {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        BigInt den = 1;
        for (const auto &q : c) den = boost::multiprecision::lcm(den, denominator(q));
        std::vector<BigInt> num;
        num.reserve(c.size());
        for (const auto &q : c) num.push_back(numerator(q) * (den / denominator(q)));
        p_->set_coefficients(std::move(num), den);
    }

    /// Coefficients taken as the exact binary values of the doubles.
    static RealPolynomial from_doubles(const std::vector<double> &c) {
        std::vector<Rational> q;
        q.reserve(c.size());
        for (double v : c) q.push_back(detail::to_rational(v));
        return RealPolynomial(q);
    }

    /// Interpolant of `values` at X = 0..values.size()-1.
    static RealPolynomial interpolant(std::vector<double> values) {
        if (values.empty()) throw ContractViolation("interpolant needs at least one node");
        for (double v : values)
            if (!std::isfinite(v)) throw ContractViolation("node values must be finite");
        RealPolynomial r;
        r.p_ = std::make_shared<Impl>();
        r.p_->nodes = std::move(values);
        return r;
    }

    static RealPolynomial monomial(int k) {
        std::vector<Rational> c(k + 1, Rational(0));
        c[k] = 1;
        return RealPolynomial(c);
    }

    bool has_nodes() const { return !p_->nodes.empty(); }
    const std::vector<double> &nodes() const { return p_->nodes; }

    /// -1 for the zero polynomial.
    int degree() const {
        if (has_nodes()) return p_->newton().degree;
        return static_cast<int>(p_->coef().num.size()) - 1;
    }
    bool is_zero() const {
        if (!has_nodes()) return degree() < 0;
        for (double v : p_->nodes)
            if (v != 0.0) return false;
        return true;
    }

    std::vector<Rational> coefficients() const {
        const auto &c = p_->coef();
        std::vector<Rational> out;
        out.reserve(c.num.size());
        for (const auto &n : c.num) out.emplace_back(n, c.den);
        return out;
    }

    std::vector<double> to_doubles() const {
        std::vector<double> out;
        for (const auto &q : coefficients()) out.push_back(q.convert_to<double>());
        return out;
    }

    /// Exact value at an integer point, rounded once to double.
    double at(std::int64_t m) const { return value<double>(m); }
    /// Same, rounded to long double (wider exponent range).
    long double at_extended(std::int64_t m) const { return value<long double>(m); }

    /// Double-precision Horner evaluation.
    double operator()(double x) const {
        double acc = 0.0;
        const auto c = to_doubles();
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    friend bool operator==(const RealPolynomial &a, const RealPolynomial &b) {
        const auto &ca = a.p_->coef();
        const auto &cb = b.p_->coef();
        if (ca.num.size() != cb.num.size()) return false;
        for (std::size_t k = 0; k < ca.num.size(); ++k)
            if (ca.num[k] * cb.den != cb.num[k] * ca.den) return false;
        return true;
    }

    /// Identity of the shared representation, used to memoize evaluations.
    const void *id() const { return p_.get(); }

  private:
    template <class T> T value(std::int64_t m) const {
        if (has_nodes()) {
            if (m >= 0 && m < static_cast<std::int64_t>(p_->nodes.size())) return static_cast<T>(p_->nodes[m]);
            const auto &nw = p_->newton();
            // sum_k d_k C(m, k)
            BigInt acc = 0, binom = 1;
            for (int k = 0; k <= nw.degree; ++k) {
                if (k > 0) binom = binom * (BigInt(m) - (k - 1)) / k;
                acc += nw.diff[k] * binom;
            }
            if (nw.exponent >= 0) return Rational(BigInt(acc << nw.exponent)).convert_to<T>();
            return Rational(acc, BigInt(1) << -nw.exponent).convert_to<T>();
        }
        const auto &c = p_->coef();
        BigInt acc = 0;
        const BigInt x = m;
        for (auto it = c.num.rbegin(); it != c.num.rend(); ++it) acc = acc * x + *it;
        return Rational(acc, c.den).convert_to<T>();
    }

    struct Newton {
        std::vector<BigInt> diff; // forward differences at 0, times 2^-exponent
        int exponent = 0;
        int degree = -1;
    };
    struct Coef {
        std::vector<BigInt> num;
        BigInt den = 1;
    };

    struct Impl {
        std::vector<double> nodes;
        mutable std::once_flag newton_once, coef_once;
        mutable Newton nw;
        mutable Coef cf;

        void set_coefficients(std::vector<BigInt> num, BigInt den) {
            cf.num = std::move(num);
            cf.den = std::move(den);
            canonicalize(cf);
            std::call_once(coef_once, [] {});
        }

        static void canonicalize(Coef &c) {
            while (!c.num.empty() && c.num.back() == 0) c.num.pop_back();
            if (c.num.empty()) {
                c.den = 1;
                return;
            }
            BigInt g = c.den;
            for (const auto &n : c.num) g = boost::multiprecision::gcd(g, n);
            if (g > 1) {
                for (auto &n : c.num) n /= g;
                c.den /= g;
            }
        }

        const Newton &newton() const {
            std::call_once(newton_once, [this] {
                std::vector<std::pair<BigInt, int>> dy;
                bool any = false;
                for (double v : nodes) {
                    dy.push_back(detail::dyadic(v));
                    if (dy.back().first != 0) {
                        nw.exponent = any ? std::min(nw.exponent, dy.back().second) : dy.back().second;
                        any = true;
                    }
                }
                if (!any) return;
                std::vector<BigInt> v;
                v.reserve(dy.size());
                for (const auto &[m, e] : dy) v.push_back(m == 0 ? BigInt(0) : BigInt(m << (e - nw.exponent)));
                const int N = static_cast<int>(v.size()) - 1;
                nw.diff.resize(N + 1);
                for (int k = 0; k <= N; ++k) {
                    nw.diff[k] = v[0];
                    for (int i = 0; i + k < N; ++i) v[i] = v[i + 1] - v[i];
                }
                nw.degree = N;
                while (nw.degree >= 0 && nw.diff[nw.degree] == 0) --nw.degree;
                nw.diff.resize(nw.degree + 1);
            });
            return nw;
        }

        // sum_k d_k X(X-1)...(X-k+1)/k! over the common denominator deg!
        const Coef &coef() const {
            std::call_once(coef_once, [this] {
                const auto &n = newton();
                const int D = n.degree;
                if (D < 0) return;
                BigInt denk = 1; // D!/k!
                std::vector<BigInt> fall{BigInt(1)};
                std::vector<BigInt> weights(D + 1);
                for (int k = D; k >= 0; --k) {
                    weights[k] = denk;
                    if (k > 0) denk *= k;
                }
                cf.num.assign(D + 1, BigInt(0));
                for (int k = 0; k <= D; ++k) {
                    if (k > 0) {
                        fall.push_back(BigInt(0));
                        for (int t = k; t >= 1; --t) fall[t] = fall[t - 1] - fall[t] * (k - 1);
                        fall[0] = fall[0] * -(k - 1);
                    }
                    const BigInt w = n.diff[k] * weights[k];
                    if (w == 0) continue;
                    for (int t = 0; t <= k; ++t) cf.num[t] += w * fall[t];
                }
                cf.den = detail::factorial(D);
                if (n.exponent > 0) {
                    for (auto &x : cf.num) x <<= n.exponent;
                } else if (n.exponent < 0) {
                    cf.den <<= -n.exponent;
                }
                canonicalize(cf);
            });
            return cf;
        }
    };

    std::shared_ptr<Impl> p_;
};

/// P_n(X) = prod_{k != n, 0 <= k <= N} (X - k) / (n - k).
inline RealPolynomial lagrange_indicator(int n, int N) {
    if (N < 0 || n < 0 || n > N) throw DomainError("lagrange_indicator needs 0 <= n <= N");
    std::vector<double> v(N + 1, 0.0);
    v[n] = 1.0;
    return RealPolynomial::interpolant(std::move(v));
}

} // namespace bosonic
