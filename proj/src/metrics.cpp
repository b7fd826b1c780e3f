// SPDX-License-Identifier: Apache-2.0
#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "error.hpp"

namespace siamdiff {

std::vector<double> default_threshold_grid() {
    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) grid[size_t(i)] = double(i) / 100.0;
    return grid;
}

double fmax(const PredictionSet& preds, const std::vector<double>& thresholds) {
    const size_t n = preds.scores.size();
    if (n == 0 || preds.truth.size() != n) throw InvalidParameterError("fmax: empty prediction set");
    if (thresholds.empty()) throw InvalidParameterError("fmax: empty threshold grid");
    for (size_t i = 0; i < n; ++i) {
        if (int(preds.scores[i].size()) != preds.num_terms)
            throw ShapeError("fmax: score vector length != num_terms");
        if (preds.truth[i].empty())
            throw InvalidParameterError("fmax: protein " + std::to_string(i) +
                                        " has an empty truth set");
        for (double s : preds.scores[i])
            if (!(s >= 0.0 && s <= 1.0)) throw InvalidParameterError("fmax: score outside [0,1]");
    }

    double best = 0.0;
    for (double thr : thresholds) {
        double precision_sum = 0;
        size_t m = 0;  // proteins with at least one prediction above threshold
        double recall_sum = 0;
        for (size_t i = 0; i < n; ++i) {
            const std::set<uint32_t> truth(preds.truth[i].begin(), preds.truth[i].end());
            size_t predicted = 0, correct = 0;
            for (int f = 0; f < preds.num_terms; ++f) {
                if (preds.scores[i][size_t(f)] >= thr) {
                    ++predicted;
                    if (truth.count(uint32_t(f))) ++correct;
                }
            }
            if (predicted > 0) {
                ++m;
                precision_sum += double(correct) / double(predicted);
            }
            recall_sum += double(correct) / double(truth.size());
        }
        if (m == 0) continue;
        const double precision = precision_sum / double(m);
        const double recall = recall_sum / double(n);
        if (precision + recall == 0.0) continue;
        best = std::max(best, 2.0 * precision * recall / (precision + recall));
    }
    return best;
}

namespace {

// Average ranks (1-based) with ties sharing the mean of their rank range.
std::vector<double> average_ranks(const std::vector<double>& x) {
    const size_t n = x.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t(0));
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double avg = 0.5 * double(i + 1 + j + 1);
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b, const char* what) {
    const size_t n = a.size();
    double ma = 0, mb = 0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= double(n);
    mb /= double(n);
    double cov = 0, va = 0, vb = 0;
    for (size_t i = 0; i < n; ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0)
        throw InvalidParameterError(std::string("spearman: constant ") + what +
                                    " makes the correlation undefined");
    return cov / std::sqrt(va * vb);
}

}  // namespace

double spearman_global(const RankingSet& r) {
    if (r.size() < 2) throw InvalidParameterError("spearman: need at least 2 items");
    if (r.truth.size() != r.size() || (!r.group.empty() && r.group.size() != r.size()))
        throw ShapeError("spearman: ragged ranking set");
    return pearson(average_ranks(r.pred), average_ranks(r.truth), "input");
}

double spearman_mean(const RankingSet& r) {
    if (r.group.size() != r.size()) throw ShapeError("spearman_mean: missing group ids");
    std::map<uint32_t, RankingSet> groups;
    for (size_t i = 0; i < r.size(); ++i) {
        RankingSet& g = groups[r.group[i]];
        g.pred.push_back(r.pred[i]);
        g.truth.push_back(r.truth[i]);
    }
    if (groups.empty()) throw InvalidParameterError("spearman_mean: empty ranking set");
    double acc = 0;
    for (auto& [gid, g] : groups) {
        if (g.size() < 2)
            throw InvalidParameterError("spearman_mean: group " + std::to_string(gid) +
                                        " has fewer than 2 items");
        try {
            acc += spearman_global(g);
        } catch (const InvalidParameterError&) {
            throw InvalidParameterError("spearman_mean: group " + std::to_string(gid) +
                                        " is degenerate");
        }
    }
    return acc / double(groups.size());
}

}  // namespace siamdiff
