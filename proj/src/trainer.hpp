// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "error.hpp"
#include "losses.hpp"

namespace siamdiff {

enum class PretrainMode { diffpret, siamdiff };
enum class OptimizerKind { sgd, adam };

const char* pretrain_mode_name(PretrainMode m);

struct StageSpan {
    int stage = 1;        // 1: large noise levels, 2: small noise levels
    int epoch_begin = 0;  // inclusive
    int epoch_end = 0;    // exclusive
};

struct PretrainConfig {
    PretrainMode mode = PretrainMode::siamdiff;
    GraphLevel level = GraphLevel::atom;
    int T = 100;
    int stage_boundary = 10;  // stage 1 samples t in [boundary, T], stage 2 in [1, boundary-1]
    std::vector<StageSpan> stage_schedule;  // empty: stage 1 for first 80% of epochs
    ConformerConfig conformer;
    double learning_rate = 1e-4;
    int epochs = 1;
    int batch_size = 2;
    int max_residues = 150;
    uint64_t seed = 0;
    OptimizerKind optimizer = OptimizerKind::adam;
    LossOptions loss;
    bool tied_noise = false;

    std::vector<StageSpan> effective_schedule() const;
    void validate() const;
};

// Uniform draw over the stage's noise-level range.
int sample_noise_level(int stage, const DiffusionSchedule& sched, int stage_boundary, Rng& rng);

struct TrainLogRecord {
    int epoch = 0;
    int batch = 0;
    int t = 0;
    int stage = 0;
    double loss_struct = 0;
    double loss_seq = 0;
    double loss_total = 0;
    double denoise_accuracy = 0;
};

struct TrainResult {
    ModelParams params;
    std::vector<TrainLogRecord> log;
};

// Thrown when the loss turns non-finite; carries the parameter state so the
// caller can dump it.
struct DivergenceError : NumericError {
    DivergenceError(const std::string& msg, ModelParams state)
        : NumericError(msg), params_at_failure(std::move(state)) {}
    ModelParams params_at_failure;
};

using LogSink = std::function<void(const TrainLogRecord&)>;
using EpochSink = std::function<void(int epoch, const ModelParams&)>;

// Mini-batch pre-training over the dataset. Per-protein losses within a batch
// are computed in parallel; gradients are reduced in fixed protein order and
// every protein draws from its own (seed, epoch, index)-derived RNG stream,
// so results are bitwise reproducible for any thread count.
TrainResult run_pretraining(const std::vector<Protein>& dataset, const PretrainConfig& cfg,
                            const GraphConfig& gcfg, const EncoderConfig& enc_cfg,
                            const DiffusionSchedule& sched, ModelParams params,
                            const LogSink& log_sink = nullptr,
                            const EpochSink& epoch_sink = nullptr);

}  // namespace siamdiff
