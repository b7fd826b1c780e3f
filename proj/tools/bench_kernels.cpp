// SPDX-License-Identifier: Apache-2.0
//
// Benchmark of the OpenMP kernels against the serial reference, with a
// bitwise equality check on every case.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "kernels.hpp"
#include "rng.hpp"
#include "tensor.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace siamdiff;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const double t0 = now_ms();
        fn();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

Tensor random_tensor(int64_t r, int64_t c, Rng& rng) {
    Tensor t(r, c);
    for (auto& v : t.v) v = rng.gaussian();
    return t;
}

void report(const char* name, double par_ms, double ref_ms, bool equal) {
    std::printf("%-18s parallel %8.2f ms   serial %8.2f ms   speedup %5.2fx   %s\n", name, par_ms,
                ref_ms, ref_ms / par_ms, equal ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled (serial build)\n");
#endif
    Rng rng(7);
    bool all_equal = true;

    {
        const int64_t m = 2048, k = 256, n = 256;
        const Tensor a = random_tensor(m, k, rng), b = random_tensor(k, n, rng);
        Tensor c1(m, n), c2(m, n);
        const double tp = time_best_of(
            5, [&] { kernels::matmul(a.data(), b.data(), c1.data(), m, k, n); });
        const double ts = time_best_of(
            5, [&] { kernels::ref::matmul(a.data(), b.data(), c2.data(), m, k, n); });
        const bool eq = std::memcmp(c1.data(), c2.data(), sizeof(double) * size_t(m * n)) == 0;
        all_equal = all_equal && eq;
        report("matmul", tp, ts, eq);
    }
    {
        const int64_t nodes = 20000, edges = 400000, dim = 64;
        const Tensor msgs = random_tensor(edges, dim, rng);
        std::vector<uint32_t> dst(static_cast<size_t>(edges));
        for (auto& d : dst) d = uint32_t(rng.uniform_int(0, nodes - 1));
        const IndexGroups g = IndexGroups::build(dst, uint32_t(nodes));
        Tensor o1(nodes, dim), o2(nodes, dim);
        const double tp = time_best_of(5, [&] {
            std::fill(o1.v.begin(), o1.v.end(), 0.0);
            kernels::segment_sum_rows(msgs.data(), dim, g, o1.data());
        });
        const double ts = time_best_of(5, [&] {
            std::fill(o2.v.begin(), o2.v.end(), 0.0);
            kernels::ref::segment_sum_rows(msgs.data(), dim, g, o2.data());
        });
        const bool eq =
            std::memcmp(o1.data(), o2.data(), sizeof(double) * size_t(nodes * dim)) == 0;
        all_equal = all_equal && eq;
        report("segment_sum", tp, ts, eq);
    }
    {
        const int64_t nodes = 20000, edges = 400000, dim = 64;
        const Tensor x = random_tensor(nodes, dim, rng);
        std::vector<uint32_t> idx(static_cast<size_t>(edges));
        for (auto& d : idx) d = uint32_t(rng.uniform_int(0, nodes - 1));
        Tensor o1(edges, dim), o2(edges, dim);
        const double tp = time_best_of(
            5, [&] { kernels::gather_rows(x.data(), idx.data(), o1.data(), edges, dim); });
        const double ts = time_best_of(
            5, [&] { kernels::ref::gather_rows(x.data(), idx.data(), o2.data(), edges, dim); });
        const bool eq =
            std::memcmp(o1.data(), o2.data(), sizeof(double) * size_t(edges * dim)) == 0;
        all_equal = all_equal && eq;
        report("gather_rows", tp, ts, eq);
    }
    {
        const int64_t n = 8 * 1000 * 1000;
        const Tensor x = random_tensor(n, 1, rng);
        Tensor o1(n, 1), o2(n, 1);
        const double tp = time_best_of(5, [&] { kernels::relu(x.data(), o1.data(), n); });
        const double ts = time_best_of(5, [&] { kernels::ref::relu(x.data(), o2.data(), n); });
        const bool eq = std::memcmp(o1.data(), o2.data(), sizeof(double) * size_t(n)) == 0;
        all_equal = all_equal && eq;
        report("relu", tp, ts, eq);
    }
    return all_equal ? 0 : 1;
}
