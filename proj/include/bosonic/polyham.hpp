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
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "fock.hpp"
#include "json_io.hpp"
#include "polynomial.hpp"
#include "tolerances.hpp"

namespace bosonic {

/// One mode of a monomial: (a^dag)^dag * poly(n) * a^ann.
struct LadderTerm {
    int dag = 0;
    RealPolynomial poly;
    int ann = 0;

    /// Normal-ordered degree in (a, a^dag).
    int degree() const { return dag + ann + 2 * std::max(poly.degree(), 0); }
    LadderTerm adjoint() const { return {ann, poly, dag}; }
};

/// coeff * tensor product of per-mode ladder terms.
struct PolyTerm {
    cplx coeff{1.0, 0.0};
    std::vector<LadderTerm> factors;

    int degree() const {
        int d = 0;
        for (const auto &f : factors) d += f.degree();
        return d;
    }
    PolyTerm adjoint() const {
        PolyTerm t{std::conj(coeff), {}};
        for (const auto &f : factors) t.factors.push_back(f.adjoint());
        return t;
    }
};

class PolyHamiltonian {
  public:
    PolyHamiltonian() = default;
    explicit PolyHamiltonian(std::vector<int> block_cutoffs) : block_cutoffs_(std::move(block_cutoffs)) {
        if (block_cutoffs_.empty()) throw ContractViolation("a polynomial Hamiltonian needs at least one mode");
        for (int n : block_cutoffs_)
            if (n < 0) throw ContractViolation("block cutoffs must be non-negative");
    }

    int modes() const { return static_cast<int>(block_cutoffs_.size()); }
    const std::vector<int> &block_cutoffs() const { return block_cutoffs_; }
    const std::vector<PolyTerm> &terms() const { return terms_; }

    void add(PolyTerm t) {
        if (static_cast<int>(t.factors.size()) != modes()) throw ContractViolation("term has the wrong number of modes");
        if (t.coeff == cplx(0.0, 0.0)) return;
        for (const auto &f : t.factors) {
            if (f.dag < 0 || f.ann < 0) throw ContractViolation("ladder powers must be non-negative");
            if (f.poly.is_zero()) return;
        }
        terms_.push_back(std::move(t));
    }

    /// Total normal-ordered degree; 0 when empty.
    int degree() const {
        int d = 0;
        for (const auto &t : terms_) d = std::max(d, t.degree());
        return d;
    }
    int mode_degree(int k) const {
        int d = 0;
        for (const auto &t : terms_) d = std::max(d, t.factors.at(k).degree());
        return d;
    }

  private:
    std::vector<int> block_cutoffs_{0};
    std::vector<PolyTerm> terms_;
};

/// P_n(n) for i == j, otherwise sqrt(min!/max!) (a^dag)^(max-j) P_min(n) a^(max-i).
inline PolyTerm synth_rank_one(int i, int j, int N) {
    if (N < 0 || i < 0 || j < 0 || i > N || j > N) throw DomainError("synth_rank_one needs 0 <= i, j <= N");
    const int lo = std::min(i, j), hi = std::max(i, j);
    long double c = 1.0L;
    for (int t = lo + 1; t <= hi; ++t) c /= std::sqrt(static_cast<long double>(t));
    return {cplx(static_cast<double>(c), 0.0), {LadderTerm{hi - j, lagrange_indicator(lo, N), hi - i}}};
}

/// Sum over matrix units with the same ladder offset merged into one
/// interpolating polynomial per offset.
inline PolyHamiltonian synth_hermitian(const HermitianMatrix &H) {
    const Mat &h = H.mat();
    const int N = static_cast<int>(h.rows()) - 1;
    PolyHamiltonian P({N});
    std::vector<double> diag(N + 1);
    for (int n = 0; n <= N; ++n) diag[n] = h(n, n).real();
    P.add({cplx(1.0, 0.0), {LadderTerm{0, RealPolynomial::interpolant(diag), 0}}});
    for (int s = 1; s <= N; ++s) {
        std::vector<double> re(N + 1, 0.0), im(N + 1, 0.0);
        for (int i = 0; i + s <= N; ++i) {
            long double scale = 1.0L;
            for (int t = i + 1; t <= i + s; ++t) scale /= std::sqrt(static_cast<long double>(t));
            re[i] = static_cast<double>(h(i, i + s).real() * scale);
            im[i] = static_cast<double>(h(i, i + s).imag() * scale);
        }
        const auto fre = RealPolynomial::interpolant(re);
        const auto fim = RealPolynomial::interpolant(im);
        const PolyTerm tre{cplx(1.0, 0.0), {LadderTerm{0, fre, s}}};
        const PolyTerm tim{cplx(0.0, 1.0), {LadderTerm{0, fim, s}}};
        P.add(tre);
        P.add(tre.adjoint());
        P.add(tim);
        P.add(tim.adjoint());
    }
    return P;
}

namespace detail {

inline int cutoff_product(const std::vector<int> &cutoffs) {
    long long d = 1;
    for (int n : cutoffs) {
        d *= n + 1;
        if (d > (1LL << 31)) throw ResourceLimit("tensor dimension too large");
    }
    return static_cast<int>(d);
}

// row-major multi-index, first mode slowest
inline std::vector<int> split_index(int idx, const std::vector<int> &cutoffs) {
    std::vector<int> out(cutoffs.size());
    for (int k = static_cast<int>(cutoffs.size()) - 1; k >= 0; --k) {
        out[k] = idx % (cutoffs[k] + 1);
        idx /= cutoffs[k] + 1;
    }
    return out;
}

} // namespace detail

inline PolyHamiltonian synth_multimode(const HermitianMatrix &A, const std::vector<int> &cutoffs) {
    if (cutoffs.empty()) throw ContractViolation("synth_multimode needs at least one mode");
    const int dim = detail::cutoff_product(cutoffs);
    if (A.mat().rows() != dim) throw ContractViolation("operator side does not match the product of cutoffs");
    PolyHamiltonian P(cutoffs);
    const int m = static_cast<int>(cutoffs.size());
    for (int I = 0; I < dim; ++I) {
        const auto ii = detail::split_index(I, cutoffs);
        for (int J = 0; J < dim; ++J) {
            const cplx a = A.mat()(I, J);
            if (a == cplx(0.0, 0.0)) continue;
            const auto jj = detail::split_index(J, cutoffs);
            PolyTerm t{a, {}};
            for (int k = 0; k < m; ++k) {
                auto u = synth_rank_one(ii[k], jj[k], cutoffs[k]);
                t.coeff *= u.coeff;
                t.factors.push_back(std::move(u.factors[0]));
            }
            P.add(std::move(t));
        }
    }
    return P;
}

namespace detail {

// sqrt((k+r)!/k!) for k = 0..D-r, built one factor at a time
class RatioTable {
  public:
    explicit RatioTable(int D) : D_(D) { rows_.push_back(std::vector<long double>(D + 1, 1.0L)); }
    const std::vector<long double> &operator()(int r) {
        while (static_cast<int>(rows_.size()) <= r) {
            const int q = static_cast<int>(rows_.size());
            const auto &prev = rows_.back();
            std::vector<long double> next(std::max(D_ - q + 1, 0));
            for (std::size_t k = 0; k < next.size(); ++k) next[k] = prev[k] * std::sqrt(static_cast<long double>(k + q));
            rows_.push_back(std::move(next));
        }
        return rows_[r];
    }

  private:
    int D_;
    std::vector<std::vector<long double>> rows_;
};

class PolyValues {
  public:
    long double operator()(const RealPolynomial &p, int k) {
        auto &v = cache_[p.id()];
        while (static_cast<int>(v.size()) <= k) v.push_back(p.at_extended(static_cast<std::int64_t>(v.size())));
        return v[k];
    }

  private:
    std::unordered_map<const void *, std::vector<long double>> cache_;
};

struct FactorEntry {
    int row, col;
    long double value;
};

// border >= 0 keeps only entries with row <= border or col <= border
inline void factor_entries(const LadderTerm &f, int D, int border, RatioTable &ratios, PolyValues &vals,
                           std::vector<FactorEntry> &out) {
    out.clear();
    const int lo = std::min(f.dag, f.ann), hi = std::max(f.dag, f.ann);
    int kmax = D - hi;
    if (border >= 0) kmax = std::min(kmax, border - lo);
    if (kmax < 0) return;
    const auto &b = ratios(hi); // grows the table, so taken before `a`
    const auto &a = ratios(lo);
    for (int k = 0; k <= kmax; ++k) {
        const long double fk = vals(f.poly, k);
        if (fk == 0.0L) continue;
        out.push_back({k + f.dag, k + f.ann, fk * (a[k] * b[k])});
    }
}

inline Mat eval_impl(const PolyHamiltonian &P, const std::vector<int> &cutoffs, int border) {
    if (static_cast<int>(cutoffs.size()) != P.modes()) throw ContractViolation("one evaluation cutoff per mode is required");
    for (int k = 0; k < P.modes(); ++k)
        if (cutoffs[k] < P.block_cutoffs()[k]) throw ContractViolation("evaluation cutoff below the block cutoff");
    const int dim = cutoff_product(cutoffs);
    const int m = P.modes();
    std::vector<RatioTable> ratios;
    for (int D : cutoffs) ratios.emplace_back(D);
    PolyValues vals;
    Mat out = Mat::Zero(dim, dim);
    std::vector<std::vector<FactorEntry>> per(m);
    for (const auto &t : P.terms()) {
        bool empty = false;
        for (int k = 0; k < m && !empty; ++k) {
            factor_entries(t.factors[k], cutoffs[k], m == 1 ? border : -1, ratios[k], vals, per[k]);
            empty = per[k].empty();
        }
        if (empty) continue;
        // walk the Kronecker product of the per-mode entry lists
        std::vector<std::size_t> pos(m, 0);
        while (true) {
            int row = 0, col = 0;
            long double v = 1.0L;
            for (int k = 0; k < m; ++k) {
                const auto &e = per[k][pos[k]];
                row = row * (cutoffs[k] + 1) + e.row;
                col = col * (cutoffs[k] + 1) + e.col;
                v *= e.value;
            }
            out(row, col) += t.coeff * static_cast<double>(v);
            int k = m - 1;
            while (k >= 0 && ++pos[k] == per[k].size()) pos[k--] = 0;
            if (k < 0) break;
        }
    }
    return out;
}

} // namespace detail

/// Dense matrix of P on the truncated space with per-mode cutoffs; entries
/// come from closed-form ladder matrix elements, so no truncation artifacts.
inline ComplexMatrix eval_matrix(const PolyHamiltonian &P, const std::vector<int> &cutoffs) {
    return ComplexMatrix(detail::eval_impl(P, cutoffs, -1));
}
inline ComplexMatrix eval_matrix(const PolyHamiltonian &P, int cutoff) {
    return eval_matrix(P, std::vector<int>(P.modes(), cutoff));
}

/// Single mode: only rows or columns up to `border` are filled in, the rest is zero.
inline Mat eval_border(const PolyHamiltonian &P, int cutoff, int border) {
    if (P.modes() != 1) throw ContractViolation("border evaluation is single-mode");
    return detail::eval_impl(P, {cutoff}, border);
}

/// Largest entry of the blocks coupling the first `N+1` levels of each mode to the rest.
inline double cross_block_norm(const Mat &m, const std::vector<int> &cutoffs, const std::vector<int> &block) {
    const int dim = static_cast<int>(m.rows());
    std::vector<char> inside(dim);
    for (int I = 0; I < dim; ++I) {
        const auto ii = detail::split_index(I, cutoffs);
        bool in = true;
        for (std::size_t k = 0; k < ii.size(); ++k) in = in && ii[k] <= block[k];
        inside[I] = in;
    }
    double worst = 0.0;
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i)
            if (inside[i] != inside[j]) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

/// Restriction to the product block of the first `block[k]+1` levels, in
/// row-major order over the block indices.
inline Mat block_restriction(const Mat &m, const std::vector<int> &cutoffs, const std::vector<int> &block) {
    const int bdim = detail::cutoff_product(block);
    std::vector<int> map(bdim);
    for (int B = 0; B < bdim; ++B) {
        const auto bb = detail::split_index(B, block);
        int idx = 0;
        for (std::size_t k = 0; k < bb.size(); ++k) idx = idx * (cutoffs[k] + 1) + bb[k];
        map[B] = idx;
    }
    Mat out(bdim, bdim);
    for (int j = 0; j < bdim; ++j)
        for (int i = 0; i < bdim; ++i) out(i, j) = m(map[i], map[j]);
    return out;
}

/// Coefficient lists are exported only for interpolants on at most this many
/// nodes past the first; beyond it the node values are the exact description.
inline constexpr int kCoefficientExportLimit = 64;

inline json to_json(const PolyHamiltonian &P) {
    json terms = json::array();
    for (const auto &t : P.terms()) {
        json factors = json::array();
        for (const auto &f : t.factors) {
            json jf{{"dag", f.dag}, {"ann", f.ann}};
            if (!f.poly.has_nodes() || f.poly.nodes().size() <= kCoefficientExportLimit + 1u)
                jf["num_poly"] = f.poly.to_doubles();
            if (f.poly.has_nodes()) jf["nodes"] = f.poly.nodes();
            factors.push_back(std::move(jf));
        }
        terms.push_back({{"coeff", to_json(t.coeff)}, {"factors", std::move(factors)}});
    }
    return {{"modes", P.modes()}, {"block_cutoffs", P.block_cutoffs()}, {"terms", std::move(terms)}};
}

inline PolyHamiltonian polyham_from_json(const json &j) {
    try {
        const auto cut = j.at("block_cutoffs").get<std::vector<int>>();
        if (j.contains("modes") && j.at("modes").get<int>() != static_cast<int>(cut.size()))
            throw ConfigurationError("modes does not match block_cutoffs");
        PolyHamiltonian P(cut);
        for (const auto &jt : j.at("terms")) {
            PolyTerm t{complex_from_json(jt.at("coeff")), {}};
            for (const auto &jf : jt.at("factors")) {
                LadderTerm f{jf.at("dag").get<int>(), {}, jf.at("ann").get<int>()};
                if (jf.contains("nodes"))
                    f.poly = RealPolynomial::interpolant(jf.at("nodes").get<std::vector<double>>());
                else
                    f.poly = RealPolynomial::from_doubles(jf.at("num_poly").get<std::vector<double>>());
                t.factors.push_back(std::move(f));
            }
            P.add(std::move(t));
        }
        return P;
    } catch (const json::exception &e) {
        throw ConfigurationError(std::string("malformed polynomial file: ") + e.what());
    } catch (const ContractViolation &e) {
        throw ConfigurationError(std::string("malformed polynomial file: ") + e.what());
    }
}

} // namespace bosonic
