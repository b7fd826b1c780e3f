// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace siamdiff {

// Protein-centric F_max inputs: per-protein term scores in [0,1] and the
// ground-truth term sets.
struct PredictionSet {
    int num_terms = 0;
    std::vector<std::vector<double>> scores;       // per protein, length num_terms
    std::vector<std::vector<uint32_t>> truth;      // per protein, nonempty term ids
};

// (group id, predicted score, ground-truth score) triples for the Spearman
// metrics.
struct RankingSet {
    std::vector<uint32_t> group;
    std::vector<double> pred;
    std::vector<double> truth;

    size_t size() const { return pred.size(); }
};

// Maximum F-score over the threshold grid. Precision at threshold t averages
// only over proteins with at least one prediction >= t; recall averages over
// all proteins. Thresholds where precision + recall == 0 are skipped; if every
// threshold is skipped the result is 0 by convention.
double fmax(const PredictionSet& preds, const std::vector<double>& thresholds);
std::vector<double> default_threshold_grid();  // 101 points, 0.00 .. 1.00

// Spearman rank correlation with average-rank tie handling. Errors when either
// side is constant (correlation undefined).
double spearman_global(const RankingSet& r);

// Unweighted mean of per-group Spearman correlations; every group needs >= 2
// items and non-constant values.
double spearman_mean(const RankingSet& r);

}  // namespace siamdiff
