// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace siamdiff {

// Dense row-major matrix of doubles. Vectors are 1 x n or n x 1.
struct Tensor {
    int64_t rows = 0;
    int64_t cols = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int64_t r, int64_t c) : rows(r), cols(c), v(size_t(r) * size_t(c), 0.0) {}

    static Tensor zeros(int64_t r, int64_t c) { return Tensor(r, c); }
    static Tensor full(int64_t r, int64_t c, double value) {
        Tensor t(r, c);
        for (auto& x : t.v) x = value;
        return t;
    }

    int64_t size() const { return rows * cols; }
    double& at(int64_t r, int64_t c) { return v[size_t(r) * size_t(cols) + size_t(c)]; }
    double at(int64_t r, int64_t c) const { return v[size_t(r) * size_t(cols) + size_t(c)]; }
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }
    double* row(int64_t r) { return v.data() + size_t(r) * size_t(cols); }
    const double* row(int64_t r) const { return v.data() + size_t(r) * size_t(cols); }

    bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
    bool all_finite() const;
    std::string shape_str() const;
};

double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace siamdiff
