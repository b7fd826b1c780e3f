// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "params.hpp"
#include "tape.hpp"

namespace siamdiff {

// SE(3)-invariant representations: everything the encoder consumes (one-hot
// features, distances, angle bins) is already invariant, so the outputs are
// too.
struct EncodedProtein {
    Tensor atom_reps;     // num_nodes x rep_dim (per-layer states concatenated)
    Tensor residue_reps;  // num_residues x rep_dim
};

// Tape-side handles for training.
struct ParamVars {
    std::map<std::string, Tape::Var> vars;
    Tape::Var at(const std::string& name) const;
};

ParamVars register_params(Tape& tape, const ModelParams& params, bool needs_grad = true);
GradientBundle collect_gradients(const Tape& tape, const ParamVars& pv, const ModelParams& params);

struct EncodeVars {
    Tape::Var atom_reps;
    Tape::Var residue_reps;
};

// Relational message passing with per-layer self/relation/edge weights, sum
// aggregation and ReLU; optional line-graph edge message passing keyed by
// angle bins. Per-layer hidden states are concatenated into the readout.
EncodeVars encode_on_tape(Tape& tape, const ProteinGraph& graph, const ParamVars& pv,
                          const EncoderConfig& cfg);

// Equivariant noise head: sum over graph pairs of m_ij * (r_i - r_j)/|r_i -
// r_j| with the scalar m_ij an MLP of the two end reps and an embedded
// distance. `reps` may come from the sibling trajectory (cross-conditioned
// variant); the geometry always comes from `geom`.
Tape::Var structure_noise_head(Tape& tape, Tape::Var reps, const ProteinGraph& geom,
                               const ParamVars& pv);

// Sequence head logits for the masked residues (rows follow mask_groups.idx).
Tape::Var sequence_head_logits(Tape& tape, Tape::Var residue_reps,
                               const IndexGroups& mask_groups, const ParamVars& pv);

// Plain (gradient-free) entry points.
EncodedProtein encode(const ProteinGraph& graph, const ModelParams& params,
                      const EncoderConfig& cfg);
Tensor predict_structure_noise(const ProteinGraph& graph, const ModelParams& params,
                               const EncoderConfig& cfg);
// Softmax distribution over the 20 residue types per masked residue.
Tensor predict_residue_types(const EncodedProtein& enc, const std::vector<uint32_t>& mask_set,
                             const ModelParams& params);

}  // namespace siamdiff
