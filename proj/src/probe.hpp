// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "losses.hpp"

namespace siamdiff {

struct ProbeRow {
    int t = 0;
    double loss_struct = 0;
    double loss_seq = 0;
    double seq_accuracy = 0;  // micro-averaged over all masked residues
};

// Evaluates the joint (or sequence-only, per opts) diffusion loss at fixed
// noise levels without parameter updates; `samples_per_protein` independent
// draws are averaged per t.
std::vector<ProbeRow> denoising_probe(const ModelParams& params, const std::vector<Protein>& data,
                                      const DiffusionSchedule& sched, const std::vector<int>& ts,
                                      const GraphConfig& gcfg, const EncoderConfig& enc_cfg,
                                      const LossOptions& opts, int samples_per_protein,
                                      uint64_t seed);

std::string probe_table_csv(const std::vector<ProbeRow>& rows);

}  // namespace siamdiff
