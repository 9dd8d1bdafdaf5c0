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
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fock.hpp"
#include "json_io.hpp"

namespace bosonic {

inline double op_norm(const Mat &m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

/// min over d-th roots of unity w of ||U - w V||.
inline double center_distance(const Mat &U, const Mat &V) {
    const auto d = U.rows();
    double best = op_norm(U - V);
    for (Eigen::Index k = 1; k < d; ++k) best = std::min(best, op_norm(U - std::polar(1.0, kTwoPi * k / d) * V));
    return best;
}

/// Index k of the root of unity w = e^{2 pi i k/d} that brings w U closest to the identity.
inline int nearest_center(const Mat &U) {
    const auto d = U.rows();
    const cplx t = U.trace();
    int best = 0;
    double val = -1e300;
    for (int k = 0; k < d; ++k) {
        const double v = (std::polar(1.0, kTwoPi * k / d) * t).real();
        if (v > val + 1e-15) {
            val = v;
            best = k;
        }
    }
    return best;
}

/// Finite gate set in SU(d); inverses are implied.
class GateSet {
  public:
    GateSet() = default;
    GateSet(std::vector<UnitaryMatrix> gates, std::vector<std::string> names)
        : gates_(std::move(gates)), names_(std::move(names)) {
        if (gates_.empty()) throw ConfigurationError("gate set is empty");
        if (names_.size() != gates_.size()) throw ConfigurationError("one name per gate is required");
        dim_ = static_cast<int>(gates_[0].dim());
        if (dim_ < 2) throw ConfigurationError("gates must act on at least two levels");
        for (std::size_t k = 0; k < gates_.size(); ++k) {
            if (gates_[k].dim() != dim_) throw ConfigurationError("gates have different dimensions");
            if (std::abs(gates_[k].mat().determinant() - 1.0) > 1e-10)
                throw ConfigurationError("gate " + names_[k] + " does not have unit determinant");
        }
    }

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(gates_.size()); }
    const UnitaryMatrix &gate(int k) const { return gates_.at(k); }
    const std::string &name(int k) const { return names_.at(k); }
    Mat matrix(int k, bool inverted) const { return inverted ? Mat(gates_.at(k).mat().adjoint()) : gates_.at(k).mat(); }

  private:
    int dim_ = 0;
    std::vector<UnitaryMatrix> gates_;
    std::vector<std::string> names_;
};

/// Hadamard and T with their determinants divided out.
inline Mat su2_hadamard() {
    Mat h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return cplx(0.0, 1.0) * h;
}
inline Mat su2_t() {
    Mat t = Mat::Zero(2, 2);
    t(0, 0) = std::polar(1.0, -kPi / 8.0);
    t(1, 1) = std::polar(1.0, kPi / 8.0);
    return t;
}

inline Mat embed_two_level(const Mat &block, int k, int d) {
    Mat u = Mat::Identity(d, d);
    u.block(k, k, 2, 2) = block;
    return u;
}

/// H and T on every adjacent pair of levels (k, k+1).
inline GateSet builtin_ht(int d) {
    if (d < 2) throw ConfigurationError("gate set dimension must be at least 2");
    std::vector<UnitaryMatrix> g;
    std::vector<std::string> names;
    for (int k = 0; k + 1 < d; ++k) {
        const std::string tag = d == 2 ? "" : std::to_string(k) + std::to_string(k + 1);
        g.emplace_back(embed_two_level(su2_hadamard(), k, d));
        names.push_back("H" + tag);
        g.emplace_back(embed_two_level(su2_t(), k, d));
        names.push_back("T" + tag);
    }
    return GateSet(std::move(g), std::move(names));
}

inline json to_json(const GateSet &G) {
    json gates = json::array();
    for (int k = 0; k < G.size(); ++k) gates.push_back({{"name", G.name(k)}, {"matrix", matrix_to_json(G.gate(k).mat())}});
    return {{"dim", G.dim()}, {"gates", gates}};
}

inline GateSet gateset_from_json(const json &j) {
    try {
        std::vector<UnitaryMatrix> g;
        std::vector<std::string> names;
        for (const auto &e : j.at("gates")) {
            g.emplace_back(matrix_from_json(e.at("matrix")));
            names.push_back(e.value("name", "G" + std::to_string(names.size())));
        }
        GateSet G(std::move(g), std::move(names));
        if (j.contains("dim") && j.at("dim").get<int>() != G.dim()) throw ConfigurationError("dim does not match the gates");
        return G;
    } catch (const json::exception &e) {
        throw ConfigurationError(std::string("malformed gate set: ") + e.what());
    } catch (const ContractViolation &e) {
        throw ConfigurationError(std::string("malformed gate set: ") + e.what());
    }
}

/// "ht:<d>" or a JSON file.
inline GateSet load_gateset(const std::string &spec) {
    if (spec.rfind("ht:", 0) == 0) {
        try {
            return builtin_ht(std::stoi(spec.substr(3)));
        } catch (const std::logic_error &) {
            throw ConfigurationError("bad gate set spec " + spec);
        }
    }
    return gateset_from_json(read_json_file(spec));
}

struct GateRef {
    int gate = 0;
    bool inverted = false;
    friend bool operator==(const GateRef &a, const GateRef &b) { return a.gate == b.gate && a.inverted == b.inverted; }
};

/// Gates applied first to last; net = G_last ... G_first.
struct GateWord {
    std::vector<GateRef> indices;
    Mat net;

    std::size_t length() const { return indices.size(); }

    static GateWord identity(int d) { return {{}, Mat::Identity(d, d)}; }

    GateWord inverse() const {
        GateWord w{{}, net.adjoint()};
        for (auto it = indices.rbegin(); it != indices.rend(); ++it) w.indices.push_back({it->gate, !it->inverted});
        return w;
    }

    /// this first, then `later`.
    GateWord then(const GateWord &later) const {
        GateWord w{indices, later.net * net};
        w.indices.insert(w.indices.end(), later.indices.begin(), later.indices.end());
        return w;
    }
};

/// Ordered product of the referenced gates, computed from scratch.
inline Mat word_product(const std::vector<GateRef> &indices, const GateSet &G) {
    Mat u = Mat::Identity(G.dim(), G.dim());
    for (const auto &r : indices) u = G.matrix(r.gate, r.inverted) * u;
    return u;
}

inline json to_json(const std::vector<GateRef> &w) {
    json out = json::array();
    for (const auto &r : w) out.push_back({r.gate, r.inverted});
    return out;
}

inline std::vector<GateRef> gate_refs_from_json(const json &j) {
    std::vector<GateRef> out;
    for (const auto &e : j) out.push_back({e.at(0).get<int>(), e.at(1).get<bool>()});
    return out;
}

} // namespace bosonic
