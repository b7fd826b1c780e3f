// SPDX-License-Identifier: Apache-2.0
#include "probe.hpp"

#include <cstdio>
#include <cmath>

#include "error.hpp"

namespace siamdiff {

std::vector<ProbeRow> denoising_probe(const ModelParams& params, const std::vector<Protein>& data,
                                      const DiffusionSchedule& sched, const std::vector<int>& ts,
                                      const GraphConfig& gcfg, const EncoderConfig& enc_cfg,
                                      const LossOptions& opts, int samples_per_protein,
                                      uint64_t seed) {
    if (data.empty()) throw DataError("denoising_probe: empty dataset");
    if (samples_per_protein < 1)
        throw InvalidParameterError("denoising_probe: samples_per_protein must be >= 1");
    const Rng root(seed);
    std::vector<ProbeRow> rows;
    rows.reserve(ts.size());
    for (int t : ts) {
        sched.check_step(t);
        ProbeRow row;
        row.t = t;
        double struct_acc = 0, seq_acc = 0;
        size_t masked_total = 0, correct_total = 0, n_eval = 0;
        for (size_t pi = 0; pi < data.size(); ++pi) {
            for (int rep = 0; rep < samples_per_protein; ++rep) {
                Rng rng = root.derive(uint64_t(t), pi, uint64_t(rep));
                PreparedSample s = prepare_sample(data[pi], t, sched, gcfg, opts, rng);
                EncodedProtein enc = encode(s.graph, params, enc_cfg);
                {
                    Tape tape;
                    ParamVars pv = register_params(tape, params, false);
                    EncodeVars ev = encode_on_tape(tape, s.graph, pv, enc_cfg);
                    Tape::Var eps_theta = structure_noise_head(tape, ev.atom_reps, s.graph, pv);
                    const double denom = opts.struct_reduction == Reduction::mean
                                             ? double(s.graph.num_nodes)
                                             : 1.0;
                    Tape::Var ls = tape.sse(eps_theta, s.eps_hat, 1.0 / denom);
                    struct_acc += opts.structure_diffusion ? tape.value(ls).v[0] : 0.0;
                }
                if (!s.mask_set.empty()) {
                    const Tensor probs = predict_residue_types(enc, s.mask_set, params);
                    double ce = 0;
                    for (int64_t r = 0; r < probs.rows; ++r) {
                        const int label = s.labels[size_t(r)];
                        ce += -std::log(std::max(probs.at(r, label), 1e-300));
                        int best = 0;
                        for (int64_t c = 1; c < probs.cols; ++c)
                            if (probs.at(r, c) > probs.at(r, best)) best = int(c);
                        if (best == label) ++correct_total;
                    }
                    seq_acc += opts.seq_reduction == Reduction::mean
                                   ? ce / double(probs.rows)
                                   : ce;
                    masked_total += size_t(probs.rows);
                }
                ++n_eval;
            }
        }
        row.loss_struct = struct_acc / double(n_eval);
        row.loss_seq = seq_acc / double(n_eval);
        row.seq_accuracy =
            masked_total == 0 ? 0.0 : double(correct_total) / double(masked_total);
        rows.push_back(row);
    }
    return rows;
}

std::string probe_table_csv(const std::vector<ProbeRow>& rows) {
    std::string out = "t,loss_struct,loss_seq,seq_accuracy\n";
    char buf[128];
    for (const ProbeRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.t, r.loss_struct, r.loss_seq,
                      r.seq_accuracy);
        out += buf;
    }
    return out;
}

}  // namespace siamdiff
