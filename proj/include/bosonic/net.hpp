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
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "gates.hpp"
#include "random.hpp"
#include "vptree.hpp"

namespace bosonic {

struct NetOptions {
    double epsilon0 = 0.3;
    int max_length = 12;
    std::size_t max_entries = 4000000;
    int validation_targets = 500;
    std::uint64_t seed = 1;
};

/// Givens factorization U = F_1 ... F_m of U in SU(d) into SU(2) blocks acting
/// on adjacent levels (pair k means levels k, k+1).
inline std::vector<std::pair<int, Mat>> two_level_factors(const Mat &U) {
    const int d = static_cast<int>(U.rows());
    Mat R = U;
    std::vector<std::pair<int, Mat>> applied;
    for (int j = 0; j + 1 < d; ++j) {
        for (int k = d - 1; k > j; --k) {
            const cplx x = R(k - 1, j), y = R(k, j);
            const double r = std::hypot(std::abs(x), std::abs(y));
            if (std::abs(y) == 0.0 && x.imag() == 0.0 && x.real() >= 0.0) continue;
            Mat g(2, 2);
            if (r == 0.0) {
                g.setIdentity();
            } else {
                g << std::conj(x) / r, std::conj(y) / r, -y / r, x / r;
            }
            R.middleRows(k - 1, 2) = (g * R.middleRows(k - 1, 2)).eval();
            applied.emplace_back(k - 1, g);
        }
    }
    std::vector<std::pair<int, Mat>> out;
    for (const auto &[k, g] : applied) {
        const Mat f = g.adjoint();
        if (!out.empty() && out.back().first == k)
            out.back().second = out.back().second * f;
        else
            out.emplace_back(k, f);
    }
    return out;
}

/// Base approximations for Solovay-Kitaev: breadth-first enumeration of gate
/// words with near-duplicates pruned, searched by nearest neighbour.
/// Qubit sets are stored as unit quaternions modulo sign; sets made of the
/// same SU(2) blocks on every adjacent level pair are handled through the
/// two-level factorization; anything else is enumerated as full matrices.
class NetDictionary {
  public:
    enum class Kind { Qubit, Factorized, Flat };

    NetDictionary() = default;
    NetDictionary(const GateSet &G, const NetOptions &opt) : dim_(G.dim()), opt_(opt) {
        if (!(opt.epsilon0 > 0.0)) throw ConfigurationError("epsilon0 must be positive");
        if (opt.max_length < 0) throw ConfigurationError("max_length must be non-negative");
        if (dim_ == 2) {
            kind_ = Kind::Qubit;
            std::vector<Mat> blocks;
            for (int k = 0; k < G.size(); ++k) blocks.push_back(G.gate(k).mat());
            pair_map_ = {std::vector<int>(G.size())};
            for (int k = 0; k < G.size(); ++k) pair_map_[0][k] = k;
            build_su2(blocks, opt.epsilon0 / 4.0, true);
            max_length_ = su2_length_;
        } else if (detect_embedded(G)) {
            kind_ = Kind::Factorized;
            factors_ = dim_ * (dim_ - 1) / 2;
            build_su2(local_blocks_, opt.epsilon0 / (4.0 * factors_), false);
            max_length_ = factors_ * su2_length_;
        } else {
            kind_ = Kind::Flat;
            build_flat(G);
            max_length_ = su2_length_;
        }
        validate();
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double epsilon0() const { return opt_.epsilon0; }
    /// Longest word `nearest` can return.
    int max_length() const { return max_length_; }
    std::size_t entries() const { return parent_.size(); }
    double validation_worst() const { return validation_worst_; }

    GateWord nearest(const Mat &target) const {
        if (target.rows() != dim_) throw ContractViolation("target dimension does not match the net");
        switch (kind_) {
        case Kind::Qubit:
            return su2_word(target, 0, true);
        case Kind::Factorized: {
            const auto f = two_level_factors(target);
            GateWord w = GateWord::identity(dim_);
            for (auto it = f.rbegin(); it != f.rend(); ++it) w = w.then(su2_word(it->second, it->first, false));
            return w;
        }
        case Kind::Flat:
        default:
            return flat_word(target);
        }
    }

  private:
    struct Quat {
        cplx a, b; // U = [[a, -conj b], [b, conj a]]
    };
    static Quat to_quat(const Mat &u) { return {u(0, 0), u(1, 0)}; }
    static Quat mul(const Quat &g, const Quat &u) {
        return {g.a * u.a - std::conj(g.b) * u.b, g.b * u.a + std::conj(g.a) * u.b};
    }
    static void coords(const Quat &q, double *out) {
        out[0] = q.a.real();
        out[1] = q.a.imag();
        out[2] = q.b.real();
        out[3] = q.b.imag();
    }
    static bool flip(const double *x) {
        for (int k = 0; k < 4; ++k)
            if (x[k] != 0.0) return x[k] < 0.0;
        return false;
    }

    static std::uint64_t grid_key(const double *x, int n, double cell) {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (int k = 0; k < n; ++k) {
            const auto c = static_cast<std::int64_t>(std::floor(x[k] / cell));
            h = splitmix64(h ^ static_cast<std::uint64_t>(c));
        }
        return h;
    }

    bool detect_embedded(const GateSet &G) {
        std::vector<std::vector<Mat>> per(dim_ - 1);
        std::vector<std::vector<int>> idx(dim_ - 1);
        for (int g = 0; g < G.size(); ++g) {
            const Mat &u = G.gate(g).mat();
            int lo = dim_, hi = -1;
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j)
                    if (std::abs(u(i, j) - (i == j ? 1.0 : 0.0)) > 1e-12) {
                        lo = std::min({lo, i, j});
                        hi = std::max({hi, i, j});
                    }
            if (hi < 0) continue; // identity gate, never useful
            if (hi == lo) return false;
            if (hi != lo + 1) return false;
            const Mat b = u.block(lo, lo, 2, 2);
            if (std::abs(b.determinant() - 1.0) > 1e-10) return false;
            per[lo].push_back(b);
            idx[lo].push_back(g);
        }
        for (int k = 0; k + 1 < dim_; ++k) {
            if (per[k].size() != per[0].size() || per[k].empty()) return false;
            for (std::size_t t = 0; t < per[k].size(); ++t)
                if (max_abs(per[k][t] - per[0][t]) > 1e-12) return false;
        }
        local_blocks_ = per[0];
        pair_map_ = idx;
        return true;
    }

    void build_su2(const std::vector<Mat> &blocks, double cell, bool quotient) {
        quotient_ = quotient;
        std::vector<Quat> gates;
        for (const auto &b : blocks) {
            const Quat q = to_quat(b);
            gates.push_back(q);
            gates.push_back({std::conj(q.a), -q.b});
        }
        std::vector<Quat> elems{{cplx(1.0), cplx(0.0)}};
        parent_ = {-1};
        code_ = {0};
        negated_ = {0};
        std::unordered_set<std::uint64_t> seen;
        double x[4];
        coords(elems[0], x);
        seen.insert(grid_key(x, 4, cell));
        std::size_t lo = 0, hi = 1;
        su2_length_ = 0;
        for (int len = 1; len <= opt_.max_length && lo < hi && elems.size() < opt_.max_entries; ++len) {
            for (std::size_t e = lo; e < hi && elems.size() < opt_.max_entries; ++e) {
                for (int c = 0; c < static_cast<int>(gates.size()); ++c) {
                    if (e > 0 && c == (code_[e] ^ 1)) continue;
                    Quat q = mul(gates[c], elems[e]);
                    char neg = negated_[e];
                    coords(q, x);
                    if (quotient && flip(x)) {
                        q = {-q.a, -q.b};
                        neg ^= 1;
                        coords(q, x);
                    }
                    if (!seen.insert(grid_key(x, 4, cell)).second) continue;
                    elems.push_back(q);
                    parent_.push_back(static_cast<int>(e));
                    code_.push_back(static_cast<std::uint8_t>(c));
                    negated_.push_back(neg);
                    su2_length_ = len;
                }
            }
            lo = hi;
            hi = elems.size();
        }
        std::vector<double> pts(elems.size() * 4);
        for (std::size_t e = 0; e < elems.size(); ++e) coords(elems[e], pts.data() + 4 * e);
        elems_ = std::move(elems);
        tree_ = VPTree(std::move(pts), 4);
    }

    std::vector<GateRef> codes_to_refs(int entry, int pair) const {
        std::vector<GateRef> rev;
        for (int e = entry; e > 0; e = parent_[e]) rev.push_back({pair_map_[pair][code_[e] / 2], (code_[e] & 1) != 0});
        return {rev.rbegin(), rev.rend()};
    }

    GateWord su2_word(const Mat &block, int pair, bool quotient) const {
        double x[4];
        coords(to_quat(block), x);
        auto best = tree_.nearest(x);
        if (quotient) {
            for (double &v : x) v = -v;
            auto alt = tree_.nearest(x);
            if (alt.second < best.second) best = alt;
        }
        const Quat &q = elems_[best.first];
        Mat b(2, 2);
        b << q.a, -std::conj(q.b), q.b, std::conj(q.a);
        if (negated_[best.first]) b = -b;
        GateWord w{codes_to_refs(best.first, pair), embed_two_level(b, pair, dim_)};
        return w;
    }

    void build_flat(const GateSet &G) {
        const int n = 2 * dim_ * dim_;
        const double cell = opt_.epsilon0 / 4.0;
        std::vector<Mat> gates;
        for (int g = 0; g < G.size(); ++g) {
            gates.push_back(G.gate(g).mat());
            gates.push_back(G.gate(g).mat().adjoint());
        }
        pair_map_ = {std::vector<int>(G.size())};
        for (int g = 0; g < G.size(); ++g) {
            pair_map_[0][g] = g;
            flat_gates_.push_back(G.gate(g).mat());
        }
        flat_ = {Mat::Identity(dim_, dim_)};
        parent_ = {-1};
        code_ = {0};
        std::unordered_set<std::uint64_t> seen;
        std::vector<double> x(n);
        flatten(flat_[0], x.data());
        seen.insert(grid_key(x.data(), n, cell));
        std::size_t lo = 0, hi = 1;
        su2_length_ = 0;
        for (int len = 1; len <= opt_.max_length && lo < hi && flat_.size() < opt_.max_entries; ++len) {
            for (std::size_t e = lo; e < hi && flat_.size() < opt_.max_entries; ++e) {
                for (int c = 0; c < static_cast<int>(gates.size()); ++c) {
                    if (e > 0 && c == (code_[e] ^ 1)) continue;
                    Mat u = gates[c] * flat_[e];
                    u *= std::polar(1.0, kTwoPi * nearest_center(u) / dim_);
                    flatten(u, x.data());
                    if (!seen.insert(grid_key(x.data(), n, cell)).second) continue;
                    flat_.push_back(u);
                    parent_.push_back(static_cast<int>(e));
                    code_.push_back(static_cast<std::uint8_t>(c));
                    su2_length_ = len;
                }
            }
            lo = hi;
            hi = flat_.size();
        }
        std::vector<double> pts(flat_.size() * n);
        for (std::size_t e = 0; e < flat_.size(); ++e) flatten(flat_[e], pts.data() + n * e);
        tree_ = VPTree(std::move(pts), n);
    }

    void flatten(const Mat &u, double *out) const {
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) {
                *out++ = u(i, j).real();
                *out++ = u(i, j).imag();
            }
    }

    GateWord flat_word(const Mat &target) const {
        const int n = 2 * dim_ * dim_;
        std::vector<double> x(n);
        std::pair<int, double> best{-1, 1e300};
        for (int k = 0; k < dim_; ++k) {
            flatten(std::polar(1.0, kTwoPi * k / dim_) * target, x.data());
            auto r = tree_.nearest(x.data());
            if (r.second < best.second) best = r;
        }
        GateWord w{codes_to_refs(best.first, 0), Mat()};
        // the stored product carries a center phase; the word itself does not
        Mat u = Mat::Identity(dim_, dim_);
        for (const auto &r : w.indices) u = (r.inverted ? Mat(gate_cache(r.gate).adjoint()) : gate_cache(r.gate)) * u;
        w.net = u;
        return w;
    }

    const Mat &gate_cache(int g) const { return flat_gates_.at(g); }

    void validate() {
        Rng rng(opt_.seed);
        validation_worst_ = 0.0;
        for (int t = 0; t < opt_.validation_targets; ++t) {
            const Mat u = haar_special_unitary(rng, dim_);
            validation_worst_ = std::max(validation_worst_, center_distance(u, nearest(u).net));
        }
        if (validation_worst_ > opt_.epsilon0)
            throw ConfigurationError("gate set does not reach every target within epsilon0 = " +
                                     std::to_string(opt_.epsilon0) + " using words of length <= " +
                                     std::to_string(opt_.max_length) + " (worst sampled distance " +
                                     std::to_string(validation_worst_) + ")");
    }

    Kind kind_ = Kind::Qubit;
    int dim_ = 0;
    NetOptions opt_;
    int max_length_ = 0;
    int su2_length_ = 0;
    int factors_ = 1;
    bool quotient_ = true;
    std::vector<char> negated_; ///< stored element is minus the word product
    double validation_worst_ = 0.0;
    std::vector<Mat> local_blocks_;
    std::vector<std::vector<int>> pair_map_;
    std::vector<Quat> elems_;
    std::vector<Mat> flat_;
    std::vector<Mat> flat_gates_;
    std::vector<int> parent_;
    std::vector<std::uint8_t> code_;
    VPTree tree_;
};

inline NetDictionary build_net(const GateSet &G, double epsilon0, int max_length) {
    NetOptions o;
    o.epsilon0 = epsilon0;
    o.max_length = max_length;
    return NetDictionary(G, o);
}

} // namespace bosonic
