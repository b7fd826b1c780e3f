// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "graph.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace siamdiff {

// Flat named tensor store. std::map keeps iteration order deterministic,
// which checkpointing and gradient reduction rely on.
struct NamedTensors {
    std::map<std::string, Tensor> tensors;

    Tensor& at(const std::string& name);
    const Tensor& at(const std::string& name) const;
    bool contains(const std::string& name) const { return tensors.count(name) != 0; }
    size_t scalar_count() const;
    bool all_finite() const;
    bool same_shapes(const NamedTensors& o) const;
};

using ModelParams = NamedTensors;
using GradientBundle = NamedTensors;

// Architecture hyperparameters; relation/feature dims are locked to the graph
// configuration so params and graphs cannot drift apart.
struct EncoderConfig {
    GraphLevel level = GraphLevel::atom;
    int layers = 3;
    int hidden = 64;
    int dist_dim = 16;
    bool edge_mp = true;
    int relations = 1;
    int node_feat_dim = 0;
    int edge_feat_dim = 0;
    int angle_bins = 8;

    int rep_dim() const { return layers * hidden; }
    std::string arch_string() const;

    static EncoderConfig make(const GraphConfig& g, int layers, int hidden, bool edge_mp = true);
    // Published-scale preset: 6 layers, 512 hidden at residue level / 128 at atom.
    static EncoderConfig paper_scale(const GraphConfig& g);
};

ModelParams init_params(const EncoderConfig& cfg, Rng& rng);

// Shapes the zero gradient bundle matching `params`.
GradientBundle zero_like(const ModelParams& params);

void axpy_params(NamedTensors& acc, const NamedTensors& x, double scale);
void scale_params(NamedTensors& x, double scale);

}  // namespace siamdiff
