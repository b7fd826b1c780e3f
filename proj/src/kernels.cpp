// SPDX-License-Identifier: Apache-2.0
#include "kernels.hpp"

#include <algorithm>
#include <numeric>

#include "error.hpp"

namespace siamdiff {

IndexGroups IndexGroups::build(std::vector<uint32_t> idx, uint32_t domain) {
    IndexGroups g;
    g.idx = std::move(idx);
    g.domain = domain;
    // Counting sort keeps grouping O(p + domain) and position-stable.
    std::vector<uint32_t> counts(domain + 1, 0);
    for (uint32_t v : g.idx) {
        if (v >= domain) throw ShapeError("IndexGroups: index out of domain");
        ++counts[v];
    }
    g.offsets.resize(domain + 1);
    uint32_t acc = 0;
    for (uint32_t s = 0; s <= domain; ++s) {
        g.offsets[s] = acc;
        if (s < domain) acc += counts[s];
    }
    g.order.resize(g.idx.size());
    std::vector<uint32_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (uint32_t p = 0; p < g.idx.size(); ++p) g.order[cursor[g.idx[p]]++] = p;
    return g;
}

namespace kernels {

void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        std::fill(ci, ci + n, 0.0);
        const double* ai = a + i * k;
        for (int64_t kk = 0; kk < k; ++kk) {
            const double av = ai[kk];
            if (av == 0.0) continue;
            const double* bk = b + kk * n;
            for (int64_t j = 0; j < n; ++j) ci[j] += av * bk[j];
        }
    }
}

void matmul_at_b(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
    // c (k x n) = a^T * b with a (m x k), b (m x n); c overwritten.
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < k; ++i) {
        double* ci = c + i * n;
        std::fill(ci, ci + n, 0.0);
        for (int64_t r = 0; r < m; ++r) {
            const double av = a[r * k + i];
            if (av == 0.0) continue;
            const double* br = b + r * n;
            for (int64_t j = 0; j < n; ++j) ci[j] += av * br[j];
        }
    }
}

void matmul_a_bt(const double* a, const double* b, double* c, int64_t m, int64_t n, int64_t k) {
    // c (m x k) = a (m x n) * b^T with b (k x n); c overwritten.
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < m; ++i) {
        const double* ai = a + i * n;
        double* ci = c + i * k;
        for (int64_t j = 0; j < k; ++j) {
            const double* bj = b + j * n;
            double acc = 0;
            for (int64_t t = 0; t < n; ++t) acc += ai[t] * bj[t];
            ci[j] = acc;
        }
    }
}

void add_inplace(double* x, const double* y, int64_t n) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) x[i] += y[i];
}

void add_bias_rows(double* x, const double* bias, int64_t rows, int64_t cols) {
#pragma omp parallel for schedule(static)
    for (int64_t r = 0; r < rows; ++r) {
        double* xr = x + r * cols;
        for (int64_t c = 0; c < cols; ++c) xr[c] += bias[c];
    }
}

void relu(const double* x, double* y, int64_t n) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* x, const double* dy, double* dx, int64_t n) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i)
        if (x[i] > 0.0) dx[i] += dy[i];
}

void gather_rows(const double* x, const uint32_t* idx, double* out, int64_t p, int64_t cols) {
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < p; ++i) {
        const double* src = x + int64_t(idx[i]) * cols;
        double* dst = out + i * cols;
        std::copy(src, src + cols, dst);
    }
}

void segment_sum_rows(const double* msgs, int64_t cols, const IndexGroups& g, double* out) {
    const int64_t nseg = g.domain;
#pragma omp parallel for schedule(static)
    for (int64_t s = 0; s < nseg; ++s) {
        double* dst = out + s * cols;
        for (uint32_t q = g.offsets[s]; q < g.offsets[s + 1]; ++q) {
            const double* src = msgs + int64_t(g.order[q]) * cols;
            for (int64_t c = 0; c < cols; ++c) dst[c] += src[c];
        }
    }
}

void col_sum(const double* x, int64_t rows, int64_t cols, double* out) {
#pragma omp parallel for schedule(static)
    for (int64_t c = 0; c < cols; ++c) {
        double acc = out[c];
        for (int64_t r = 0; r < rows; ++r) acc += x[r * cols + c];
        out[c] = acc;
    }
}

namespace ref {

void matmul(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
    for (int64_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        std::fill(ci, ci + n, 0.0);
        const double* ai = a + i * k;
        for (int64_t kk = 0; kk < k; ++kk) {
            const double av = ai[kk];
            if (av == 0.0) continue;
            const double* bk = b + kk * n;
            for (int64_t j = 0; j < n; ++j) ci[j] += av * bk[j];
        }
    }
}

void matmul_at_b(const double* a, const double* b, double* c, int64_t m, int64_t k, int64_t n) {
    for (int64_t i = 0; i < k; ++i) {
        double* ci = c + i * n;
        std::fill(ci, ci + n, 0.0);
        for (int64_t r = 0; r < m; ++r) {
            const double av = a[r * k + i];
            if (av == 0.0) continue;
            const double* br = b + r * n;
            for (int64_t j = 0; j < n; ++j) ci[j] += av * br[j];
        }
    }
}

void matmul_a_bt(const double* a, const double* b, double* c, int64_t m, int64_t n, int64_t k) {
    for (int64_t i = 0; i < m; ++i) {
        const double* ai = a + i * n;
        double* ci = c + i * k;
        for (int64_t j = 0; j < k; ++j) {
            const double* bj = b + j * n;
            double acc = 0;
            for (int64_t t = 0; t < n; ++t) acc += ai[t] * bj[t];
            ci[j] = acc;
        }
    }
}

void add_inplace(double* x, const double* y, int64_t n) {
    for (int64_t i = 0; i < n; ++i) x[i] += y[i];
}

void add_bias_rows(double* x, const double* bias, int64_t rows, int64_t cols) {
    for (int64_t r = 0; r < rows; ++r) {
        double* xr = x + r * cols;
        for (int64_t c = 0; c < cols; ++c) xr[c] += bias[c];
    }
}

void relu(const double* x, double* y, int64_t n) {
    for (int64_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_backward(const double* x, const double* dy, double* dx, int64_t n) {
    for (int64_t i = 0; i < n; ++i)
        if (x[i] > 0.0) dx[i] += dy[i];
}

void gather_rows(const double* x, const uint32_t* idx, double* out, int64_t p, int64_t cols) {
    for (int64_t i = 0; i < p; ++i) {
        const double* src = x + int64_t(idx[i]) * cols;
        std::copy(src, src + cols, out + i * cols);
    }
}

void segment_sum_rows(const double* msgs, int64_t cols, const IndexGroups& g, double* out) {
    for (int64_t s = 0; s < g.domain; ++s) {
        double* dst = out + s * cols;
        for (uint32_t q = g.offsets[s]; q < g.offsets[s + 1]; ++q) {
            const double* src = msgs + int64_t(g.order[q]) * cols;
            for (int64_t c = 0; c < cols; ++c) dst[c] += src[c];
        }
    }
}

void col_sum(const double* x, int64_t rows, int64_t cols, double* out) {
    for (int64_t c = 0; c < cols; ++c) {
        double acc = out[c];
        for (int64_t r = 0; r < rows; ++r) acc += x[r * cols + c];
        out[c] = acc;
    }
}

}  // namespace ref
}  // namespace kernels
}  // namespace siamdiff
