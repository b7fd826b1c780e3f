// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "graph.hpp"
#include "protein.hpp"
#include "rng.hpp"
#include "schedule.hpp"
#include "tensor.hpp"

namespace siamdiff {

// A protein at diffusion step t together with the noise that produced it.
struct NoisyState {
    Protein protein_t;
    int t = 0;
    Tensor eps_coord;                 // n_a x 3 standard-normal draw
    std::vector<uint32_t> mask_set;   // residues masked at step t
};

// coords_t = sqrt(alpha_bar_t) * coords0 + sqrt(1 - alpha_bar_t) * eps.
std::pair<std::vector<Vec3>, Tensor> sample_structure_forward(const std::vector<Vec3>& coords0,
                                                              int t,
                                                              const DiffusionSchedule& sched,
                                                              Rng& rng);

// Each residue independently MASKed with the cumulative probability
// rho_bar_t; returns (masked sequence, mask set).
std::pair<std::vector<ResidueType>, std::vector<uint32_t>> sample_sequence_forward(
    const std::vector<ResidueType>& seq0, int t, const DiffusionSchedule& sched, Rng& rng);

NoisyState sample_joint_forward(const Protein& p, int t, const DiffusionSchedule& sched, Rng& rng);

// Gaussian posterior q(R^{t-1} | R^t, R^0); t=1 degenerates to a point mass
// on R^0 (alpha_bar_0 == 1 convention).
struct StructurePosterior {
    Tensor mean;      // n x 3
    double variance;  // beta_tilde_t
};
StructurePosterior structure_posterior(const Tensor& coords_t, const Tensor& coords0, int t,
                                       const DiffusionSchedule& sched);

// Absorbing-chain posterior q(s^{t-1} | s^t, s^0) for one residue; the
// support is {s0, MASK}.
struct SequencePosterior {
    double p_orig = 0;  // probability of s0
    double p_mask = 0;
};
SequencePosterior sequence_posterior(ResidueType s_t, ResidueType s0, int t,
                                     const DiffusionSchedule& sched);

// Chain-rule noise target: projects the coordinate deviation onto pairwise
// distance directions over the graph neighborhoods, producing a target that
// is translation-invariant and rotation-equivariant jointly with coords.
Tensor chain_rule_target(const std::vector<Vec3>& coords0, const ProteinGraph& graph_t, int t,
                         const DiffusionSchedule& sched);

Tensor coords_to_tensor(const std::vector<Vec3>& coords);
std::vector<Vec3> tensor_to_coords(const Tensor& m);

}  // namespace siamdiff
