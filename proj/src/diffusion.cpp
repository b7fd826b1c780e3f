// SPDX-License-Identifier: Apache-2.0
#include "diffusion.hpp"

#include <cmath>

#include "error.hpp"

namespace siamdiff {

Tensor coords_to_tensor(const std::vector<Vec3>& coords) {
    Tensor m(int64_t(coords.size()), 3);
    for (size_t i = 0; i < coords.size(); ++i) {
        m.at(int64_t(i), 0) = coords[i].x;
        m.at(int64_t(i), 1) = coords[i].y;
        m.at(int64_t(i), 2) = coords[i].z;
    }
    return m;
}

std::vector<Vec3> tensor_to_coords(const Tensor& m) {
    if (m.cols != 3) throw ShapeError("tensor_to_coords: expected n x 3");
    std::vector<Vec3> out(size_t(m.rows));
    for (int64_t i = 0; i < m.rows; ++i) out[size_t(i)] = {m.at(i, 0), m.at(i, 1), m.at(i, 2)};
    return out;
}

std::pair<std::vector<Vec3>, Tensor> sample_structure_forward(const std::vector<Vec3>& coords0,
                                                              int t,
                                                              const DiffusionSchedule& sched,
                                                              Rng& rng) {
    sched.check_step(t);
    const double ab = sched.alpha_bar_at(t);
    const double scale = std::sqrt(ab), noise = std::sqrt(1.0 - ab);
    Tensor eps(int64_t(coords0.size()), 3);
    for (auto& v : eps.v) v = rng.gaussian();
    std::vector<Vec3> out(coords0.size());
    for (size_t i = 0; i < coords0.size(); ++i) {
        out[i] = {scale * coords0[i].x + noise * eps.at(int64_t(i), 0),
                  scale * coords0[i].y + noise * eps.at(int64_t(i), 1),
                  scale * coords0[i].z + noise * eps.at(int64_t(i), 2)};
    }
    return {std::move(out), std::move(eps)};
}

std::pair<std::vector<ResidueType>, std::vector<uint32_t>> sample_sequence_forward(
    const std::vector<ResidueType>& seq0, int t, const DiffusionSchedule& sched, Rng& rng) {
    sched.check_step(t);
    const double rho = sched.cum_mask_at(t);
    std::vector<ResidueType> seq = seq0;
    std::vector<uint32_t> mask;
    for (size_t i = 0; i < seq.size(); ++i) {
        if (rng.uniform() < rho) {
            seq[i] = ResidueType::MASK;
            mask.push_back(uint32_t(i));
        }
    }
    return {std::move(seq), std::move(mask)};
}

NoisyState sample_joint_forward(const Protein& p, int t, const DiffusionSchedule& sched,
                                Rng& rng) {
    NoisyState s;
    s.t = t;
    s.protein_t = p;
    auto [coords_t, eps] = sample_structure_forward(p.coords, t, sched, rng);
    s.protein_t.coords = std::move(coords_t);
    s.eps_coord = std::move(eps);
    auto [seq_t, mask] = sample_sequence_forward(p.sequence, t, sched, rng);
    s.protein_t.sequence = std::move(seq_t);
    s.mask_set = std::move(mask);
    return s;
}

StructurePosterior structure_posterior(const Tensor& coords_t, const Tensor& coords0, int t,
                                       const DiffusionSchedule& sched) {
    sched.check_step(t);
    if (!coords_t.same_shape(coords0)) throw ShapeError("structure_posterior: shape mismatch");
    const double ab_t = sched.alpha_bar_at(t);
    const double ab_prev = sched.alpha_bar_at(t - 1);
    const double beta = sched.beta[size_t(t - 1)];
    const double alpha = sched.alpha[size_t(t - 1)];
    const double c0 = std::sqrt(ab_prev) * beta / (1.0 - ab_t);
    const double ct = std::sqrt(alpha) * (1.0 - ab_prev) / (1.0 - ab_t);
    StructurePosterior post;
    post.mean = Tensor(coords_t.rows, coords_t.cols);
    for (size_t i = 0; i < post.mean.v.size(); ++i)
        post.mean.v[i] = c0 * coords0.v[i] + ct * coords_t.v[i];
    post.variance = sched.sigma_rev[size_t(t - 1)];
    return post;
}

SequencePosterior sequence_posterior(ResidueType s_t, ResidueType s0, int t,
                                     const DiffusionSchedule& sched) {
    sched.check_step(t);
    if (s0 == ResidueType::MASK)
        throw InvalidParameterError("sequence_posterior: ground truth cannot be MASK");
    if (s_t != ResidueType::MASK) {
        if (s_t != s0)
            throw InvalidParameterError(
                "sequence_posterior: unmasked s_t disagrees with s0 (absorbing chain violated)");
        return {1.0, 0.0};
    }
    const double rho_t = sched.cum_mask_at(t);
    const double rho_prev = sched.cum_mask_at(t - 1);
    const double step = sched.step_mask[size_t(t - 1)];
    SequencePosterior post;
    post.p_mask = rho_prev / rho_t;
    post.p_orig = (1.0 - rho_prev) * step / rho_t;
    return post;
}

Tensor chain_rule_target(const std::vector<Vec3>& coords0, const ProteinGraph& graph_t, int t,
                         const DiffusionSchedule& sched) {
    sched.check_step(t);
    if (coords0.size() != graph_t.coords.size())
        throw ShapeError("chain_rule_target: coords0 size does not match graph");
    const double ab = sched.alpha_bar_at(t);
    const double sab = std::sqrt(ab), denom = std::sqrt(1.0 - ab);
    Tensor out(int64_t(graph_t.num_nodes), 3);
    for (size_t q = 0; q < graph_t.pair_src.size(); ++q) {
        const uint32_t i = graph_t.pair_src[q], j = graph_t.pair_dst[q];
        const double d_t = graph_t.pair_dist[q];
        const double d_0 = (coords0[i] - coords0[j]).norm();
        const double w = (d_t - sab * d_0) / denom;
        double* row = out.row(int64_t(i));
        row[0] += w * graph_t.pair_dirs.at(int64_t(q), 0);
        row[1] += w * graph_t.pair_dirs.at(int64_t(q), 1);
        row[2] += w * graph_t.pair_dirs.at(int64_t(q), 2);
    }
    return out;
}

}  // namespace siamdiff
