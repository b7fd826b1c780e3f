// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>

#include "conformer.hpp"
#include "diffusion.hpp"
#include "encoder.hpp"

namespace siamdiff {

enum class Reduction { mean, sum };

struct LossOptions {
    Reduction struct_reduction = Reduction::mean;
    Reduction seq_reduction = Reduction::mean;
    // When false the structure stays clean (sequence-only diffusion variant):
    // no coordinate noise, structure term dropped from the total.
    bool structure_diffusion = true;
};

struct LossReport {
    double loss_struct = 0;
    double loss_seq = 0;
    double loss_total = 0;
    // struct 2->1, seq 2->1, struct 1->2, seq 1->2
    std::array<double, 4> per_direction{};
    bool has_directions = false;
    int t = 0;
    double denoise_accuracy = 0;
    bool seq_empty = false;  // no residues were masked at this step
};

// One noisy trajectory state with everything the losses need precomputed;
// loss evaluation on a prepared sample is deterministic, which the
// finite-difference gradient checks and invariance tests rely on.
struct PreparedSample {
    Protein protein_0;
    Protein protein_t;
    ProteinGraph graph;  // built on protein_t
    Tensor eps;
    std::vector<uint32_t> mask_set;
    IndexGroups mask_groups;
    std::vector<int> labels;  // ground-truth residue types at masked positions
    Tensor eps_hat;           // chain-rule structure target
    int t = 0;
};

PreparedSample prepare_sample(const Protein& p, int t, const DiffusionSchedule& sched,
                              const GraphConfig& gcfg, const LossOptions& opts, Rng& rng);

// Same, but with an externally fixed mask set (siamese trajectories share
// masks) and a protein that may already be a perturbed conformer.
PreparedSample prepare_sample_with_mask(const Protein& p, int t, const DiffusionSchedule& sched,
                                        const GraphConfig& gcfg, const LossOptions& opts,
                                        const std::vector<uint32_t>& mask_set, Rng& rng,
                                        const Tensor* tied_eps = nullptr);

struct SiamSample {
    PreparedSample s1;
    PreparedSample s2;
};

SiamSample prepare_siamese_sample(const Protein& p, int t, const DiffusionSchedule& sched,
                                  const GraphConfig& gcfg, const ConformerConfig& conf,
                                  const LossOptions& opts, bool tied_noise, Rng& rng);

// Joint diffusion loss for a single protein: mean squared deviation between
// the chain-rule target and the predicted noise, plus masked-residue
// cross-entropy. Pass `grads` to also run backward.
LossReport diffpret_loss_on(const PreparedSample& s, const ModelParams& params,
                            const EncoderConfig& cfg, const LossOptions& opts,
                            GradientBundle* grads = nullptr);
LossReport diffpret_loss(const Protein& p, int t, const ModelParams& params,
                         const DiffusionSchedule& sched, const GraphConfig& gcfg,
                         const EncoderConfig& cfg, const LossOptions& opts, Rng& rng,
                         GradientBundle* grads = nullptr);

// Siamese mutual-denoising loss: each trajectory is denoised from the other
// trajectory's representations; the total halves the four-term sum.
LossReport siamdiff_loss_on(const SiamSample& s, const ModelParams& params,
                            const EncoderConfig& cfg, const LossOptions& opts,
                            GradientBundle* grads = nullptr);
LossReport siamdiff_loss(const Protein& p, int t, const ModelParams& params,
                         const DiffusionSchedule& sched, const GraphConfig& gcfg,
                         const ConformerConfig& conf, const EncoderConfig& cfg,
                         const LossOptions& opts, bool tied_noise, Rng& rng,
                         GradientBundle* grads = nullptr);

}  // namespace siamdiff
