// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace siamdiff {

struct CheckResult {
    std::string name;
    bool pass = false;
    double max_err = 0;
    std::string detail;
};

// Equivariance / invariance of encoder, noise head and chain-rule target
// under random rigid transforms, at both graph levels.
std::vector<CheckResult> check_equivariance(int transforms);

// Schedule algebra: running-product alpha_bar, gamma formula (t >= 2), mask
// recurrence, reverse variance.
std::vector<CheckResult> check_schedule_algebra();

// Closed-form forward marginal vs iterated per-step sampling, first two
// moments within 3 Monte-Carlo sigma.
std::vector<CheckResult> check_forward_marginal(int draws);

// Analytic posteriors vs independent oracles: 1-D grid Bayes for structure,
// exhaustive path enumeration for the absorbing sequence chain.
std::vector<CheckResult> check_posteriors();

// A point-mass sequence predictor drives the exact per-step sequence KL to
// zero on the toy chain.
CheckResult check_zero_kl_delta();

// Central finite differences on sampled parameter coordinates of the full
// siamese loss; tolerance max(1e-4 abs, 1e-3 rel).
CheckResult check_gradients(int min_coords);

// Metric fixtures: exhaustive F_max small case, Spearman fixtures.
std::vector<CheckResult> check_metrics();

// Conformer invariants: backbone untouched, intra-residue bond lengths
// preserved, no non-bonded pair below the clash threshold.
CheckResult check_conformers(int draws);

// Loss identities: additivity, four-term halving, swap symmetry, collapse to
// the single-trajectory loss under degenerate conformers with tied noise.
std::vector<CheckResult> check_loss_identities(int fixtures);

// Checkpoint byte-for-byte round trip plus corruption detection.
std::vector<CheckResult> check_checkpoint_roundtrip(const std::string& tmp_dir);

// Everything above at selfcheck scale.
std::vector<CheckResult> run_all_checks(const std::string& tmp_dir);

}  // namespace siamdiff
