// SPDX-License-Identifier: Apache-2.0
#include "trainer.hpp"

#include <algorithm>
#include <cmath>

namespace siamdiff {

const char* pretrain_mode_name(PretrainMode m) {
    return m == PretrainMode::diffpret ? "diffpret" : "siamdiff";
}

std::vector<StageSpan> PretrainConfig::effective_schedule() const {
    if (!stage_schedule.empty()) return stage_schedule;
    // Curriculum default: coarse (large-noise) stage first, fine stage after.
    const int split = std::min(epochs, int(std::ceil(0.8 * double(epochs))));
    std::vector<StageSpan> s;
    if (split > 0) s.push_back({1, 0, split});
    if (split < epochs) s.push_back({2, split, epochs});
    return s;
}

void PretrainConfig::validate() const {
    if (epochs < 0) throw ConfigError("pretrain: epochs must be >= 0");
    if (batch_size < 1) throw ConfigError("pretrain: batch_size must be >= 1");
    if (max_residues < 1) throw ConfigError("pretrain: max_residues must be >= 1");
    if (T < 2) throw ConfigError("pretrain: T must be >= 2");
    if (stage_boundary < 1 || stage_boundary > T)
        throw ConfigError("pretrain: stage_boundary must be in [1, T]");
    if (!(learning_rate >= 0)) throw ConfigError("pretrain: learning_rate must be >= 0");
    for (const auto& span : effective_schedule()) {
        if (span.stage != 1 && span.stage != 2)
            throw ConfigError("pretrain: stage must be 1 or 2");
        if (span.stage == 2 && stage_boundary <= 1)
            throw ConfigError("pretrain: stage 2 is empty with stage_boundary <= 1");
        if (span.epoch_begin < 0 || span.epoch_end > epochs || span.epoch_begin > span.epoch_end)
            throw ConfigError("pretrain: stage span outside [0, epochs]");
    }
}

int sample_noise_level(int stage, const DiffusionSchedule& sched, int stage_boundary, Rng& rng) {
    if (stage == 1) return int(rng.uniform_int(stage_boundary, sched.T));
    if (stage == 2) {
        if (stage_boundary <= 1) throw ConfigError("sample_noise_level: stage 2 is empty");
        return int(rng.uniform_int(1, stage_boundary - 1));
    }
    throw InvalidParameterError("sample_noise_level: stage must be 1 or 2");
}

namespace {

int stage_for_epoch(const std::vector<StageSpan>& schedule, int epoch) {
    for (const auto& span : schedule)
        if (epoch >= span.epoch_begin && epoch < span.epoch_end) return span.stage;
    return 1;
}

struct AdamState {
    NamedTensors m, v;
    int64_t step = 0;
};

void apply_update(ModelParams& params, const GradientBundle& grads, const PretrainConfig& cfg,
                  AdamState& adam) {
    if (cfg.optimizer == OptimizerKind::sgd) {
        axpy_params(params, grads, -cfg.learning_rate);
        return;
    }
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    ++adam.step;
    const double bc1 = 1.0 - std::pow(b1, double(adam.step));
    const double bc2 = 1.0 - std::pow(b2, double(adam.step));
    auto pm = params.tensors.begin();
    auto gm = grads.tensors.begin();
    auto mm = adam.m.tensors.begin();
    auto vm = adam.v.tensors.begin();
    for (; pm != params.tensors.end(); ++pm, ++gm, ++mm, ++vm) {
        for (size_t i = 0; i < pm->second.v.size(); ++i) {
            const double g = gm->second.v[i];
            double& m = mm->second.v[i];
            double& v = vm->second.v[i];
            m = b1 * m + (1.0 - b1) * g;
            v = b2 * v + (1.0 - b2) * g * g;
            pm->second.v[i] -= cfg.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + eps);
        }
    }
}

}  // namespace

TrainResult run_pretraining(const std::vector<Protein>& dataset, const PretrainConfig& cfg,
                            const GraphConfig& gcfg, const EncoderConfig& enc_cfg,
                            const DiffusionSchedule& sched, ModelParams params,
                            const LogSink& log_sink, const EpochSink& epoch_sink) {
    cfg.validate();
    if (dataset.empty()) throw DataError("run_pretraining: empty dataset");
    if (sched.T != cfg.T) throw ConfigError("run_pretraining: schedule T != config T");

    std::vector<Protein> prepared;
    prepared.reserve(dataset.size());
    for (const Protein& p : dataset) {
        Protein q = truncate_protein(p, size_t(cfg.max_residues));
        if (cfg.level == GraphLevel::residue && q.num_atoms() != q.num_residues())
            q = reduce_to_ca(q);
        prepared.push_back(std::move(q));
    }

    const Rng root(cfg.seed);
    const auto schedule = cfg.effective_schedule();
    AdamState adam;
    if (cfg.optimizer == OptimizerKind::adam) {
        adam.m = zero_like(params);
        adam.v = zero_like(params);
    }

    TrainResult result;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const int stage = stage_for_epoch(schedule, epoch);

        // Deterministic per-epoch visiting order.
        std::vector<uint32_t> order(prepared.size());
        for (uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        Rng shuffle_rng = root.derive(0x5u, uint64_t(epoch));
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[size_t(shuffle_rng.uniform_int(0, int64_t(i) - 1))]);

        for (size_t batch_start = 0, batch_id = 0; batch_start < order.size();
             batch_start += size_t(cfg.batch_size), ++batch_id) {
            const size_t batch_end =
                std::min(order.size(), batch_start + size_t(cfg.batch_size));
            const size_t bsz = batch_end - batch_start;

            std::vector<GradientBundle> grads(bsz);
            std::vector<LossReport> reports(bsz);
            std::vector<std::string> failures(bsz);

#pragma omp parallel for schedule(dynamic)
            for (int64_t bi = 0; bi < int64_t(bsz); ++bi) {
                const uint32_t pi = order[batch_start + size_t(bi)];
                try {
                    Rng rng = root.derive(0xA, uint64_t(epoch), pi);
                    const int t = sample_noise_level(stage, sched, cfg.stage_boundary, rng);
                    if (cfg.mode == PretrainMode::diffpret) {
                        reports[size_t(bi)] =
                            diffpret_loss(prepared[pi], t, params, sched, gcfg, enc_cfg, cfg.loss,
                                          rng, &grads[size_t(bi)]);
                    } else {
                        reports[size_t(bi)] =
                            siamdiff_loss(prepared[pi], t, params, sched, gcfg, cfg.conformer,
                                          enc_cfg, cfg.loss, cfg.tied_noise, rng,
                                          &grads[size_t(bi)]);
                    }
                } catch (const std::exception& e) {
                    failures[size_t(bi)] = e.what();
                }
            }
            for (const auto& f : failures)
                if (!f.empty()) throw DivergenceError("pretraining aborted: " + f, params);

            GradientBundle total = zero_like(params);
            for (size_t bi = 0; bi < bsz; ++bi) axpy_params(total, grads[bi], 1.0 / double(bsz));
            if (!total.all_finite())
                throw DivergenceError("pretraining aborted: non-finite gradient", params);
            apply_update(params, total, cfg, adam);
            if (!params.all_finite())
                throw DivergenceError("pretraining aborted: non-finite parameters", params);

            for (size_t bi = 0; bi < bsz; ++bi) {
                TrainLogRecord rec;
                rec.epoch = epoch;
                rec.batch = int(batch_id);
                rec.t = reports[bi].t;
                rec.stage = stage;
                rec.loss_struct = reports[bi].loss_struct;
                rec.loss_seq = reports[bi].loss_seq;
                rec.loss_total = reports[bi].loss_total;
                rec.denoise_accuracy = reports[bi].denoise_accuracy;
                result.log.push_back(rec);
                if (log_sink) log_sink(rec);
            }
        }
        if (epoch_sink) epoch_sink(epoch, params);
    }
    result.params = std::move(params);
    return result;
}

}  // namespace siamdiff
