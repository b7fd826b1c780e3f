// SPDX-License-Identifier: Apache-2.0
#include "params.hpp"

#include <cmath>

#include "error.hpp"

namespace siamdiff {

Tensor& NamedTensors::at(const std::string& name) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw ShapeError("params: missing tensor '" + name + "'");
    return it->second;
}

const Tensor& NamedTensors::at(const std::string& name) const {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw ShapeError("params: missing tensor '" + name + "'");
    return it->second;
}

size_t NamedTensors::scalar_count() const {
    size_t n = 0;
    for (const auto& [_, t] : tensors) n += size_t(t.size());
    return n;
}

bool NamedTensors::all_finite() const {
    for (const auto& [_, t] : tensors)
        if (!t.all_finite()) return false;
    return true;
}

bool NamedTensors::same_shapes(const NamedTensors& o) const {
    if (tensors.size() != o.tensors.size()) return false;
    auto a = tensors.begin();
    auto b = o.tensors.begin();
    for (; a != tensors.end(); ++a, ++b)
        if (a->first != b->first || !a->second.same_shape(b->second)) return false;
    return true;
}

std::string EncoderConfig::arch_string() const {
    return std::string("level=") + graph_level_name(level) + ";layers=" + std::to_string(layers) +
           ";hidden=" + std::to_string(hidden) + ";dist=" + std::to_string(dist_dim) +
           ";edge_mp=" + (edge_mp ? "1" : "0") + ";relations=" + std::to_string(relations) +
           ";node_feat=" + std::to_string(node_feat_dim) +
           ";edge_feat=" + std::to_string(edge_feat_dim) + ";bins=" + std::to_string(angle_bins);
}

EncoderConfig EncoderConfig::make(const GraphConfig& g, int layers, int hidden, bool edge_mp) {
    if (layers < 1 || hidden < 1) throw ConfigError("encoder: layers and hidden must be >= 1");
    EncoderConfig c;
    c.level = g.level;
    c.layers = layers;
    c.hidden = hidden;
    c.edge_mp = edge_mp;
    c.relations = g.relation_count();
    c.node_feat_dim = g.node_feature_dim();
    c.edge_feat_dim = g.edge_feature_dim();
    c.angle_bins = g.angle_bins;
    return c;
}

EncoderConfig EncoderConfig::paper_scale(const GraphConfig& g) {
    return make(g, 6, g.level == GraphLevel::residue ? 512 : 128, true);
}

namespace {

Tensor init_weight(int64_t rows, int64_t cols, Rng& rng) {
    Tensor t(rows, cols);
    const double scale = std::sqrt(2.0 / double(rows));
    for (auto& v : t.v) v = scale * rng.gaussian();
    return t;
}

}  // namespace

ModelParams init_params(const EncoderConfig& cfg, Rng& rng) {
    ModelParams p;
    const int d = cfg.hidden;
    p.tensors["input.w"] = init_weight(cfg.node_feat_dim, d, rng);
    p.tensors["input.b"] = Tensor(1, d);
    p.tensors["edge.w"] = init_weight(cfg.edge_feat_dim, d, rng);
    p.tensors["edge.b"] = Tensor(1, d);
    for (int l = 0; l < cfg.layers; ++l) {
        const std::string pre = "layer" + std::to_string(l) + ".";
        p.tensors[pre + "self.w"] = init_weight(d, d, rng);
        for (int r = 0; r < cfg.relations; ++r)
            p.tensors[pre + "rel" + std::to_string(r) + ".w"] = init_weight(d, d, rng);
        p.tensors[pre + "edgev.w"] = init_weight(d, d, rng);
        p.tensors[pre + "b"] = Tensor(1, d);
        if (cfg.edge_mp) {
            for (int b = 0; b < cfg.angle_bins; ++b)
                p.tensors[pre + "lg.bin" + std::to_string(b) + ".w"] = init_weight(d, d, rng);
            p.tensors[pre + "lg.b"] = Tensor(1, d);
        }
    }
    const int rep = cfg.rep_dim();
    p.tensors["dist.w1"] = init_weight(1, cfg.dist_dim, rng);
    p.tensors["dist.b1"] = Tensor(1, cfg.dist_dim);
    p.tensors["dist.w2"] = init_weight(cfg.dist_dim, cfg.dist_dim, rng);
    p.tensors["dist.b2"] = Tensor(1, cfg.dist_dim);
    p.tensors["noise.w1"] = init_weight(2 * rep + cfg.dist_dim, d, rng);
    p.tensors["noise.b1"] = Tensor(1, d);
    p.tensors["noise.w2"] = init_weight(d, 1, rng);
    p.tensors["noise.b2"] = Tensor(1, 1);
    p.tensors["seq.w1"] = init_weight(rep, d, rng);
    p.tensors["seq.b1"] = Tensor(1, d);
    p.tensors["seq.w2"] = init_weight(d, kNumResidueTypes, rng);
    p.tensors["seq.b2"] = Tensor(1, kNumResidueTypes);
    return p;
}

GradientBundle zero_like(const ModelParams& params) {
    GradientBundle g;
    for (const auto& [name, t] : params.tensors) g.tensors[name] = Tensor(t.rows, t.cols);
    return g;
}

void axpy_params(NamedTensors& acc, const NamedTensors& x, double scale) {
    if (!acc.same_shapes(x)) throw ShapeError("axpy_params: shape mismatch");
    auto a = acc.tensors.begin();
    auto b = x.tensors.begin();
    for (; a != acc.tensors.end(); ++a, ++b)
        for (size_t i = 0; i < a->second.v.size(); ++i) a->second.v[i] += scale * b->second.v[i];
}

void scale_params(NamedTensors& x, double scale) {
    for (auto& [_, t] : x.tensors)
        for (auto& v : t.v) v *= scale;
}

}  // namespace siamdiff
