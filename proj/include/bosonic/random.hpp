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
#include <random>

#include "fock.hpp"

namespace bosonic {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded generator. Streams derived with `fork` are independent of call order.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), g_(splitmix64(seed)) {}

    Rng fork(std::uint64_t stream) const { return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x51ed2701ULL))); }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(g_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(g_); }
    cplx cnormal() { return {normal() * 0.70710678118654752440, normal() * 0.70710678118654752440}; }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 g_;
};

inline Mat ginibre(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.cnormal();
    return m;
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the R-phase correction.
inline Mat haar_unitary(Rng &rng, Eigen::Index n) {
    Eigen::HouseholderQR<Mat> qr(ginibre(rng, n, n));
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    const Mat &r = qr.matrixQR();
    for (Eigen::Index k = 0; k < n; ++k) {
        cplx d = r(k, k);
        if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
    }
    return q;
}

inline Mat haar_special_unitary(Rng &rng, Eigen::Index n) {
    Mat u = haar_unitary(rng, n);
    cplx det = u.determinant();
    u *= std::polar(1.0, -std::arg(det) / static_cast<double>(n));
    return u;
}

inline Vec random_unit_vector(Rng &rng, Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.cnormal();
    return v / v.norm();
}

inline Mat random_hermitian(Rng &rng, Eigen::Index n, double scale = 1.0) {
    Mat g = ginibre(rng, n, n);
    return (0.5 * scale) * (g + g.adjoint());
}

} // namespace bosonic
