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
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "random.hpp"

namespace bosonic {

/// Vantage-point tree over points in R^dim under the Euclidean metric.
class VPTree {
  public:
    VPTree() = default;
    VPTree(std::vector<double> points, int dim) : pts_(std::move(points)), dim_(dim) {
        const int n = dim_ > 0 ? static_cast<int>(pts_.size() / dim_) : 0;
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        Rng rng(0x7ee);
        for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.uniform_int(0, i)]);
        nodes_.reserve(n);
        std::vector<double> scratch(n);
        root_ = build(idx, 0, n, scratch);
    }

    int size() const { return dim_ > 0 ? static_cast<int>(pts_.size() / dim_) : 0; }
    const double *point(int i) const { return pts_.data() + static_cast<std::size_t>(i) * dim_; }

    /// (index, distance) of the nearest stored point; (-1, inf) when empty.
    std::pair<int, double> nearest(const double *q) const {
        std::pair<int, double> best{-1, std::numeric_limits<double>::infinity()};
        search(root_, q, best);
        return best;
    }

  private:
    struct Node {
        int point = -1;
        double radius = 0.0;
        int inside = -1, outside = -1;
    };

    double dist(const double *a, const double *b) const {
        double s = 0.0;
        for (int k = 0; k < dim_; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
        return std::sqrt(s);
    }

    int build(std::vector<int> &idx, int lo, int hi, std::vector<double> &d) {
        if (lo >= hi) return -1;
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({idx[lo], 0.0, -1, -1});
        if (hi - lo == 1) return id;
        const double *vp = point(idx[lo]);
        for (int i = lo + 1; i < hi; ++i) d[idx[i]] = dist(vp, point(idx[i]));
        const int mid = (lo + 1 + hi) / 2;
        std::nth_element(idx.begin() + lo + 1, idx.begin() + mid, idx.begin() + hi,
                         [&](int a, int b) { return d[a] < d[b]; });
        const double radius = d[idx[mid]];
        const int in = build(idx, lo + 1, mid, d);
        const int out = build(idx, mid, hi, d);
        nodes_[id].radius = radius;
        nodes_[id].inside = in;
        nodes_[id].outside = out;
        return id;
    }

    void search(int n, const double *q, std::pair<int, double> &best) const {
        if (n < 0) return;
        const Node &node = nodes_[n];
        const double d = dist(q, point(node.point));
        if (d < best.second) best = {node.point, d};
        if (d < node.radius) {
            search(node.inside, q, best);
            if (d + best.second >= node.radius) search(node.outside, q, best);
        } else {
            search(node.outside, q, best);
            if (d - best.second <= node.radius) search(node.inside, q, best);
        }
    }

    std::vector<double> pts_;
    int dim_ = 0;
    std::vector<Node> nodes_;
    int root_ = -1;
};

} // namespace bosonic
