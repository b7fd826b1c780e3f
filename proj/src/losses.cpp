// SPDX-License-Identifier: Apache-2.0
#include "losses.hpp"

#include <cmath>

#include "error.hpp"

namespace siamdiff {

namespace {

// Fraction of rows whose argmax equals the label (ties to the lower index).
double argmax_accuracy(const Tensor& logits, const std::vector<int>& labels) {
    if (labels.empty()) return 0.0;
    size_t hits = 0;
    for (int64_t r = 0; r < logits.rows; ++r) {
        int best = 0;
        for (int64_t c = 1; c < logits.cols; ++c)
            if (logits.at(r, c) > logits.at(r, best)) best = int(c);
        if (best == labels[size_t(r)]) ++hits;
    }
    return double(hits) / double(labels.size());
}

void finish_sample(PreparedSample& s, const DiffusionSchedule& sched, const GraphConfig& gcfg) {
    for (uint32_t m : s.mask_set) {
        if (s.protein_0.sequence[m] == ResidueType::MASK)
            throw DataError("prepare_sample: ground-truth residue is already MASK");
        s.labels.push_back(int(s.protein_0.sequence[m]));
    }
    s.mask_groups = IndexGroups::build(s.mask_set, uint32_t(s.protein_0.num_residues()));
    s.graph = build_graph(s.protein_t, gcfg);
    s.eps_hat = chain_rule_target(s.protein_0.coords, s.graph, s.t, sched);
}

struct DirectionTerms {
    Tape::Var loss_struct;
    Tape::Var loss_seq;  // invalid when the mask set is empty
    double accuracy = 0;
};

// One denoising direction: geometry (and targets) from `geom`, representations
// from `reps`.
DirectionTerms direction_loss(Tape& tape, const PreparedSample& geom, const EncodeVars& reps,
                              const ParamVars& pv, const LossOptions& opts) {
    DirectionTerms out;
    Tape::Var eps_theta = structure_noise_head(tape, reps.atom_reps, geom.graph, pv);
    const double sdenom =
        opts.struct_reduction == Reduction::mean ? double(geom.graph.num_nodes) : 1.0;
    out.loss_struct = tape.sse(eps_theta, geom.eps_hat, 1.0 / sdenom);
    if (!geom.mask_set.empty()) {
        Tape::Var logits = sequence_head_logits(tape, reps.residue_reps, geom.mask_groups, pv);
        const double qdenom =
            opts.seq_reduction == Reduction::mean ? double(geom.mask_set.size()) : 1.0;
        out.loss_seq = tape.softmax_xent(logits, geom.labels, 1.0 / qdenom);
        out.accuracy = argmax_accuracy(tape.value(logits), geom.labels);
    }
    return out;
}

}  // namespace

PreparedSample prepare_sample(const Protein& p, int t, const DiffusionSchedule& sched,
                              const GraphConfig& gcfg, const LossOptions& opts, Rng& rng) {
    sched.check_step(t);
    auto [seq_t, mask] = sample_sequence_forward(p.sequence, t, sched, rng);
    PreparedSample s;
    s.t = t;
    s.protein_0 = p;
    s.protein_t = p;
    s.protein_t.sequence = std::move(seq_t);
    s.mask_set = std::move(mask);
    if (opts.structure_diffusion) {
        auto [coords_t, eps] = sample_structure_forward(p.coords, t, sched, rng);
        s.protein_t.coords = std::move(coords_t);
        s.eps = std::move(eps);
    } else {
        s.eps = Tensor(int64_t(p.num_atoms()), 3);
    }
    finish_sample(s, sched, gcfg);
    return s;
}

PreparedSample prepare_sample_with_mask(const Protein& p, int t, const DiffusionSchedule& sched,
                                        const GraphConfig& gcfg, const LossOptions& opts,
                                        const std::vector<uint32_t>& mask_set, Rng& rng,
                                        const Tensor* tied_eps) {
    sched.check_step(t);
    PreparedSample s;
    s.t = t;
    s.protein_0 = p;
    s.protein_t = p;
    for (uint32_t m : mask_set) s.protein_t.sequence.at(m) = ResidueType::MASK;
    s.mask_set = mask_set;
    if (opts.structure_diffusion) {
        if (tied_eps) {
            if (tied_eps->rows != int64_t(p.num_atoms()) || tied_eps->cols != 3)
                throw ShapeError("prepare_sample_with_mask: tied eps shape");
            const double ab = sched.alpha_bar_at(t);
            const double scale = std::sqrt(ab), noise = std::sqrt(1.0 - ab);
            s.eps = *tied_eps;
            for (size_t i = 0; i < p.num_atoms(); ++i) {
                s.protein_t.coords[i] = {
                    scale * p.coords[i].x + noise * s.eps.at(int64_t(i), 0),
                    scale * p.coords[i].y + noise * s.eps.at(int64_t(i), 1),
                    scale * p.coords[i].z + noise * s.eps.at(int64_t(i), 2)};
            }
        } else {
            auto [coords_t, eps] = sample_structure_forward(p.coords, t, sched, rng);
            s.protein_t.coords = std::move(coords_t);
            s.eps = std::move(eps);
        }
    } else {
        s.eps = Tensor(int64_t(p.num_atoms()), 3);
    }
    finish_sample(s, sched, gcfg);
    return s;
}

SiamSample prepare_siamese_sample(const Protein& p, int t, const DiffusionSchedule& sched,
                                  const GraphConfig& gcfg, const ConformerConfig& conf,
                                  const LossOptions& opts, bool tied_noise, Rng& rng) {
    sched.check_step(t);
    Protein p2 = simulate_conformer(p, gcfg.level, conf, rng);

    // The same residues are masked on both trajectories.
    const double rho = sched.cum_mask_at(t);
    std::vector<uint32_t> mask;
    for (size_t i = 0; i < p.num_residues(); ++i)
        if (rng.uniform() < rho) mask.push_back(uint32_t(i));

    SiamSample s;
    s.s1 = prepare_sample_with_mask(p, t, sched, gcfg, opts, mask, rng);
    s.s2 = prepare_sample_with_mask(p2, t, sched, gcfg, opts, mask, rng,
                                    tied_noise ? &s.s1.eps : nullptr);
    return s;
}

LossReport diffpret_loss_on(const PreparedSample& s, const ModelParams& params,
                            const EncoderConfig& cfg, const LossOptions& opts,
                            GradientBundle* grads) {
    Tape tape;
    ParamVars pv = register_params(tape, params, /*needs_grad=*/true);
    EncodeVars ev = encode_on_tape(tape, s.graph, pv, cfg);
    DirectionTerms terms = direction_loss(tape, s, ev, pv, opts);

    LossReport rep;
    rep.t = s.t;
    rep.loss_struct = opts.structure_diffusion ? tape.value(terms.loss_struct).v[0] : 0.0;
    rep.seq_empty = s.mask_set.empty();
    rep.loss_seq = rep.seq_empty ? 0.0 : tape.value(terms.loss_seq).v[0];
    rep.loss_total = rep.loss_struct + rep.loss_seq;
    rep.denoise_accuracy = terms.accuracy;

    if (grads) {
        Tape::Var total{};
        if (opts.structure_diffusion) total = terms.loss_struct;
        if (!rep.seq_empty)
            total = total.valid() ? tape.add_scalars(total, terms.loss_seq) : terms.loss_seq;
        if (!total.valid()) {
            *grads = zero_like(params);
        } else {
            tape.backward(total);
            *grads = collect_gradients(tape, pv, params);
        }
    }
    if (!std::isfinite(rep.loss_total))
        throw NumericError("diffpret loss is not finite at t=" + std::to_string(s.t));
    return rep;
}

LossReport diffpret_loss(const Protein& p, int t, const ModelParams& params,
                         const DiffusionSchedule& sched, const GraphConfig& gcfg,
                         const EncoderConfig& cfg, const LossOptions& opts, Rng& rng,
                         GradientBundle* grads) {
    return diffpret_loss_on(prepare_sample(p, t, sched, gcfg, opts, rng), params, cfg, opts,
                            grads);
}

LossReport siamdiff_loss_on(const SiamSample& s, const ModelParams& params,
                            const EncoderConfig& cfg, const LossOptions& opts,
                            GradientBundle* grads) {
    if (s.s1.t != s.s2.t) throw InvalidParameterError("siamdiff: trajectory steps differ");
    if (s.s1.mask_set != s.s2.mask_set)
        throw InvalidParameterError("siamdiff: trajectories must share the mask set");

    Tape tape;
    ParamVars pv = register_params(tape, params, /*needs_grad=*/true);
    EncodeVars ev1 = encode_on_tape(tape, s.s1.graph, pv, cfg);
    EncodeVars ev2 = encode_on_tape(tape, s.s2.graph, pv, cfg);

    // 2->1: predict trajectory 1 from trajectory 2's representations; 1->2
    // symmetric.
    DirectionTerms d21 = direction_loss(tape, s.s1, ev2, pv, opts);
    DirectionTerms d12 = direction_loss(tape, s.s2, ev1, pv, opts);

    LossReport rep;
    rep.t = s.s1.t;
    rep.has_directions = true;
    rep.seq_empty = s.s1.mask_set.empty();
    const double ls21 = opts.structure_diffusion ? tape.value(d21.loss_struct).v[0] : 0.0;
    const double ls12 = opts.structure_diffusion ? tape.value(d12.loss_struct).v[0] : 0.0;
    const double lq21 = rep.seq_empty ? 0.0 : tape.value(d21.loss_seq).v[0];
    const double lq12 = rep.seq_empty ? 0.0 : tape.value(d12.loss_seq).v[0];
    rep.per_direction = {ls21, lq21, ls12, lq12};
    rep.loss_struct = 0.5 * (ls21 + ls12);
    rep.loss_seq = 0.5 * (lq21 + lq12);
    // The declared combination: half the four-term sum, grouped per direction
    // so the value is exactly invariant under swapping the trajectories.
    rep.loss_total = 0.5 * ((ls21 + lq21) + (ls12 + lq12));
    rep.denoise_accuracy = 0.5 * (d21.accuracy + d12.accuracy);

    if (grads) {
        Tape::Var total{};
        auto accumulate = [&](Tape::Var v) {
            if (!v.valid()) return;
            total = total.valid() ? tape.add_scalars(total, v) : v;
        };
        if (opts.structure_diffusion) {
            accumulate(d21.loss_struct);
            accumulate(d12.loss_struct);
        }
        if (!rep.seq_empty) {
            accumulate(d21.loss_seq);
            accumulate(d12.loss_seq);
        }
        if (!total.valid()) {
            *grads = zero_like(params);
        } else {
            total = tape.scale(total, 0.5);
            tape.backward(total);
            *grads = collect_gradients(tape, pv, params);
        }
    }
    if (!std::isfinite(rep.loss_total))
        throw NumericError("siamdiff loss is not finite at t=" + std::to_string(rep.t));
    return rep;
}

LossReport siamdiff_loss(const Protein& p, int t, const ModelParams& params,
                         const DiffusionSchedule& sched, const GraphConfig& gcfg,
                         const ConformerConfig& conf, const EncoderConfig& cfg,
                         const LossOptions& opts, bool tied_noise, Rng& rng,
                         GradientBundle* grads) {
    return siamdiff_loss_on(prepare_siamese_sample(p, t, sched, gcfg, conf, opts, tied_noise, rng),
                            params, cfg, opts, grads);
}

}  // namespace siamdiff
