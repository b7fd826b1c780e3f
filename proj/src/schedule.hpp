// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace siamdiff {

// Noise schedule tables for the joint diffusion process. Index 0 holds step
// t=1; boundary conventions are alpha_bar(0) = 1 and cum_mask(0) = 0.
struct DiffusionSchedule {
    int T = 0;
    std::vector<double> beta;       // variance beta_t, sigmoid-shaped
    std::vector<double> alpha;      // 1 - beta_t
    std::vector<double> alpha_bar;  // running product of alpha
    std::vector<double> gamma;      // beta_t / (2 alpha_t (1 - alpha_bar_{t-1})); gamma_1 = 0
    std::vector<double> cum_mask;   // cumulative mask probability rho_bar_t
    std::vector<double> step_mask;  // per-step mask probability rho_t
    std::vector<double> sigma_rev;  // reverse variance beta_tilde_t

    double alpha_bar_at(int t) const;  // t in [0, T], alpha_bar_at(0) == 1
    double cum_mask_at(int t) const;   // t in [0, T], cum_mask_at(0) == 0
    void check_step(int t) const;      // throws unless 1 <= t <= T
};

// Sigmoid beta schedule (logistic over [-5, 5], affinely rescaled to the
// endpoints) plus linear cumulative mask-rate interpolation.
DiffusionSchedule make_schedule(int T, double beta_min, double beta_max, double mask_min,
                                double mask_max);

inline DiffusionSchedule default_schedule() { return make_schedule(100, 1e-4, 0.1, 0.15, 1.0); }

}  // namespace siamdiff
