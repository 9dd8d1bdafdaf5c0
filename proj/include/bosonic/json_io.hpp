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

#include <fstream>
#include <string>

#include <json.hpp>

#include "fock.hpp"

namespace bosonic {

using json = nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json &j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ConfigurationError("complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

/// {"row_cutoff", "col_cutoff", "data": [[re, im], ...]} in row-major order.
inline json matrix_to_json(const Mat &m) {
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(to_json(m(i, j)));
    return {{"row_cutoff", m.rows() - 1}, {"col_cutoff", m.cols() - 1}, {"data", std::move(data)}};
}

inline Mat matrix_from_json(const json &j) {
    try {
        const auto rows = j.at("row_cutoff").get<Eigen::Index>() + 1;
        const auto cols = j.at("col_cutoff").get<Eigen::Index>() + 1;
        const json &data = j.at("data");
        if (rows < 1 || cols < 1 || data.size() != static_cast<std::size_t>(rows * cols))
            throw ConfigurationError("matrix data length does not match its cutoffs");
        Mat m(rows, cols);
        std::size_t k = 0;
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[k++]);
        return m;
    } catch (const json::exception &e) {
        throw ConfigurationError(std::string("malformed matrix JSON: ") + e.what());
    }
}

inline json vector_to_json(const Vec &v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
    return a;
}

inline Vec vector_from_json(const json &j) {
    if (!j.is_array()) throw ConfigurationError("amplitude list must be an array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ConfigurationError("cannot parse " + path + ": " + e.what());
    }
}

inline void write_json_file(const std::string &path, const json &j) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace bosonic
