// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace siamdiff {

// Grouping of a positional index array by target row. Built once per graph and
// reused by gather/scatter kernels in both the forward and backward pass.
// order/offsets give, for each segment s, the positions p with idx[p] == s in
// ascending position order, so parallel per-segment sums are bitwise
// deterministic regardless of thread count.
struct IndexGroups {
    std::vector<uint32_t> idx;      // length p: target row per position
    uint32_t domain = 0;            // number of segments (rows of the indexed tensor)
    std::vector<uint32_t> order;    // positions sorted by idx, stable
    std::vector<uint32_t> offsets;  // length domain+1

    size_t positions() const { return idx.size(); }
    static IndexGroups build(std::vector<uint32_t> idx, uint32_t domain);
};

// Data-parallel inner loops. Every kernel writes each output element from
// exactly one thread with a fixed-order inner reduction, so results are
// bitwise identical for any OMP_NUM_THREADS. kernels::ref holds the plain
// serial implementations kept as the test oracle and benchmark baseline.
namespace kernels {

// c (m x n) = a (m x k) * b (k x n), overwriting c.
void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);

// c (m x n) += a (m x k) * b^T stored as (n x k)? -- not needed; transposed
// variant: c (k x n) = a^T (m x k) * b (m x n), used for weight gradients.
void matmul_at_b(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);

// c (m x k) = a (m x n) * b^T with b (k x n); used for input gradients.
void matmul_a_bt(const double* a, const double* b, double* c, int64_t m, int64_t n, int64_t k);

void add_inplace(double* x, const double* y, int64_t n);
void add_bias_rows(double* x, const double* bias, int64_t rows, int64_t cols);
void relu(const double* x, double* y, int64_t n);
// dx += dy where x > 0
void relu_backward(const double* x, const double* dy, double* dx, int64_t n);

// out (p x cols): out[i] = x[idx[i]]
void gather_rows(const double* x, const uint32_t* idx, double* out, int64_t p, int64_t cols);

// out (domain x cols) += sum of msgs rows grouped by g; out must be shaped,
// not necessarily zeroed (accumulates).
void segment_sum_rows(const double* msgs, int64_t cols, const IndexGroups& g, double* out);

// Column-sum of x (rows x cols) into out (cols), accumulating.
void col_sum(const double* x, int64_t rows, int64_t cols, double* out);

namespace ref {
void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);
void matmul_at_b(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n);
void matmul_a_bt(const double* a, const double* b, double* c, int64_t m, int64_t n, int64_t k);
void add_inplace(double* x, const double* y, int64_t n);
void add_bias_rows(double* x, const double* bias, int64_t rows, int64_t cols);
void relu(const double* x, double* y, int64_t n);
void relu_backward(const double* x, const double* dy, double* dx, int64_t n);
void gather_rows(const double* x, const uint32_t* idx, double* out, int64_t p, int64_t cols);
void segment_sum_rows(const double* msgs, int64_t cols, const IndexGroups& g, double* out);
void col_sum(const double* x, int64_t rows, int64_t cols, double* out);
}  // namespace ref

}  // namespace kernels
}  // namespace siamdiff
