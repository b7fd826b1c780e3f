// SPDX-License-Identifier: Apache-2.0
#include "encoder.hpp"

#include <cmath>

#include "error.hpp"

namespace siamdiff {

Tape::Var ParamVars::at(const std::string& name) const {
    auto it = vars.find(name);
    if (it == vars.end()) throw ShapeError("param vars: missing '" + name + "'");
    return it->second;
}

ParamVars register_params(Tape& tape, const ModelParams& params, bool needs_grad) {
    ParamVars pv;
    for (const auto& [name, t] : params.tensors) pv.vars[name] = tape.input(t, needs_grad);
    return pv;
}

GradientBundle collect_gradients(const Tape& tape, const ParamVars& pv,
                                 const ModelParams& params) {
    GradientBundle g = zero_like(params);
    for (const auto& [name, var] : pv.vars) {
        if (tape.has_grad(var)) g.tensors.at(name) = tape.grad(var);
    }
    return g;
}

EncodeVars encode_on_tape(Tape& tape, const ProteinGraph& graph, const ParamVars& pv,
                          const EncoderConfig& cfg) {
    if (graph.node_features.cols != cfg.node_feat_dim ||
        graph.edge_features.cols != cfg.edge_feat_dim ||
        int(graph.rel_src.size()) != cfg.relations)
        throw ShapeError("encode: graph features do not match encoder config");

    Tape::Var x = tape.add_bias(tape.matmul(tape.constant(graph.node_features), pv.at("input.w")),
                                pv.at("input.b"));
    Tape::Var z = tape.add_bias(tape.matmul(tape.constant(graph.edge_features), pv.at("edge.w")),
                                pv.at("edge.b"));

    std::vector<Tape::Var> states;
    for (int l = 0; l < cfg.layers; ++l) {
        const std::string pre = "layer" + std::to_string(l) + ".";
        if (cfg.edge_mp) {
            // Edge message passing over the line graph, keyed by angle bin.
            Tape::Var zacc{};
            for (int b = 0; b < cfg.angle_bins; ++b) {
                const IndexGroups& gs = graph.lg_src[size_t(b)];
                if (gs.positions() == 0) continue;
                Tape::Var msg = tape.matmul(tape.gather_rows(z, gs),
                                            pv.at(pre + "lg.bin" + std::to_string(b) + ".w"));
                Tape::Var term = tape.segment_sum(msg, graph.lg_dst[size_t(b)]);
                zacc = zacc.valid() ? tape.add(zacc, term) : term;
            }
            if (!zacc.valid())
                zacc = tape.constant(Tensor(int64_t(graph.num_edges()), cfg.hidden));
            z = tape.relu(tape.add_bias(zacc, pv.at(pre + "lg.b")));
        }

        Tape::Var acc = tape.matmul(x, pv.at(pre + "self.w"));
        for (int r = 0; r < cfg.relations; ++r) {
            const IndexGroups& gs = graph.rel_src[size_t(r)];
            if (gs.positions() == 0) continue;
            Tape::Var msg = tape.matmul(tape.gather_rows(x, gs),
                                        pv.at(pre + "rel" + std::to_string(r) + ".w"));
            acc = tape.add(acc, tape.segment_sum(msg, graph.rel_dst[size_t(r)]));
        }
        if (graph.num_edges() > 0) {
            Tape::Var contrib = tape.matmul(z, pv.at(pre + "edgev.w"));
            acc = tape.add(acc, tape.segment_sum(contrib, graph.all_dst));
        }
        x = tape.relu(tape.add_bias(acc, pv.at(pre + "b")));
        states.push_back(x);
    }

    EncodeVars out;
    out.atom_reps = tape.concat_cols(states);
    out.residue_reps = (graph.level == GraphLevel::atom)
                           ? tape.segment_mean(out.atom_reps, graph.pool_groups)
                           : out.atom_reps;
    return out;
}

Tape::Var structure_noise_head(Tape& tape, Tape::Var reps, const ProteinGraph& geom,
                               const ParamVars& pv) {
    Tape::Var ai = tape.gather_rows(reps, geom.pair_src_groups);
    Tape::Var aj = tape.gather_rows(reps, geom.pair_dst_groups);
    Tensor d0(int64_t(geom.pair_dist.size()), 1);
    for (size_t q = 0; q < geom.pair_dist.size(); ++q) d0.v[q] = geom.pair_dist[q];
    Tape::Var demb = tape.add_bias(
        tape.matmul(tape.relu(tape.add_bias(tape.matmul(tape.constant(std::move(d0)),
                                                        pv.at("dist.w1")),
                                            pv.at("dist.b1"))),
                    pv.at("dist.w2")),
        pv.at("dist.b2"));
    Tape::Var cat = tape.concat_cols({ai, aj, demb});
    Tape::Var h = tape.relu(tape.add_bias(tape.matmul(cat, pv.at("noise.w1")), pv.at("noise.b1")));
    Tape::Var m = tape.add_bias(tape.matmul(h, pv.at("noise.w2")), pv.at("noise.b2"));
    return tape.weighted_rows_sum(m, geom.pair_dirs, geom.pair_src_groups);
}

Tape::Var sequence_head_logits(Tape& tape, Tape::Var residue_reps, const IndexGroups& mask_groups,
                               const ParamVars& pv) {
    Tape::Var hm = tape.gather_rows(residue_reps, mask_groups);
    Tape::Var h = tape.relu(tape.add_bias(tape.matmul(hm, pv.at("seq.w1")), pv.at("seq.b1")));
    return tape.add_bias(tape.matmul(h, pv.at("seq.w2")), pv.at("seq.b2"));
}

EncodedProtein encode(const ProteinGraph& graph, const ModelParams& params,
                      const EncoderConfig& cfg) {
    Tape tape;
    ParamVars pv = register_params(tape, params, /*needs_grad=*/false);
    EncodeVars ev = encode_on_tape(tape, graph, pv, cfg);
    return {tape.value(ev.atom_reps), tape.value(ev.residue_reps)};
}

Tensor predict_structure_noise(const ProteinGraph& graph, const ModelParams& params,
                               const EncoderConfig& cfg) {
    Tape tape;
    ParamVars pv = register_params(tape, params, /*needs_grad=*/false);
    EncodeVars ev = encode_on_tape(tape, graph, pv, cfg);
    Tape::Var out = structure_noise_head(tape, ev.atom_reps, graph, pv);
    return tape.value(out);
}

Tensor predict_residue_types(const EncodedProtein& enc, const std::vector<uint32_t>& mask_set,
                             const ModelParams& params) {
    const Tensor& w1 = params.at("seq.w1");
    const Tensor& b1 = params.at("seq.b1");
    const Tensor& w2 = params.at("seq.w2");
    const Tensor& b2 = params.at("seq.b2");
    if (enc.residue_reps.cols != w1.rows) throw ShapeError("predict_residue_types: rep dim");
    Tensor out(int64_t(mask_set.size()), kNumResidueTypes);
    std::vector<double> hidden(size_t(w1.cols));
    for (size_t k = 0; k < mask_set.size(); ++k) {
        if (mask_set[k] >= uint32_t(enc.residue_reps.rows))
            throw ShapeError("predict_residue_types: mask index out of range");
        const double* h = enc.residue_reps.row(int64_t(mask_set[k]));
        for (int64_t c = 0; c < w1.cols; ++c) {
            double acc = b1.v[size_t(c)];
            for (int64_t r = 0; r < w1.rows; ++r) acc += h[r] * w1.at(r, c);
            hidden[size_t(c)] = acc > 0 ? acc : 0;
        }
        double* row = out.row(int64_t(k));
        double mx = -1e300;
        for (int c = 0; c < kNumResidueTypes; ++c) {
            double acc = b2.v[size_t(c)];
            for (int64_t r = 0; r < w2.rows; ++r) acc += hidden[size_t(r)] * w2.at(r, c);
            row[c] = acc;
            mx = std::max(mx, acc);
        }
        double zsum = 0;
        for (int c = 0; c < kNumResidueTypes; ++c) {
            row[c] = std::exp(row[c] - mx);
            zsum += row[c];
        }
        for (int c = 0; c < kNumResidueTypes; ++c) row[c] /= zsum;
    }
    return out;
}

}  // namespace siamdiff
