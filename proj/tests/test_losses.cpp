// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "losses.hpp"
#include "toygen.hpp"

using namespace siamdiff;

namespace {

struct Fixture {
    Protein p;
    GraphConfig gcfg;
    EncoderConfig ecfg;
    ModelParams params;
    DiffusionSchedule sched = default_schedule();
    LossOptions opts;
    ConformerConfig conf;
};

Fixture make_fixture(uint64_t seed = 41) {
    Fixture f;
    f.p = build_peptide("KVSD");
    f.gcfg.level = GraphLevel::atom;
    f.ecfg = EncoderConfig::make(f.gcfg, 2, 12);
    Rng rng(seed);
    f.params = init_params(f.ecfg, rng);
    return f;
}

}  // namespace

TEST_CASE("diffpret: uniform sequence head gives ln 20 per masked residue") {
    Fixture f = make_fixture();
    for (const char* name : {"seq.w1", "seq.b1", "seq.w2", "seq.b2"})
        for (auto& v : f.params.at(name).v) v = 0.0;
    Rng rng(1);
    const LossReport rep =
        diffpret_loss(f.p, 80, f.params, f.sched, f.gcfg, f.ecfg, f.opts, rng);
    CHECK(!rep.seq_empty);
    CHECK(rep.loss_seq == doctest::Approx(std::log(20.0)).epsilon(1e-9));
}

TEST_CASE("diffpret: zero forced noise makes loss_struct = |eps_theta|^2 / n") {
    Fixture f = make_fixture();
    // Assemble a sample with eps = 0 by hand: coords_t = sqrt(ab) coords0.
    const int t = 25;
    const double sab = std::sqrt(f.sched.alpha_bar_at(t));
    Protein pt = f.p;
    for (auto& c : pt.coords) c = c * sab;
    Rng rng(2);
    PreparedSample s;
    s.t = t;
    s.protein_0 = f.p;
    s.protein_t = pt;
    auto [seq_t, mask] = sample_sequence_forward(f.p.sequence, t, f.sched, rng);
    s.protein_t.sequence = seq_t;
    s.mask_set = mask;
    for (uint32_t m : mask) s.labels.push_back(int(f.p.sequence[m]));
    s.mask_groups = IndexGroups::build(mask, uint32_t(f.p.num_residues()));
    s.eps = Tensor(int64_t(f.p.num_atoms()), 3);
    s.graph = build_graph(s.protein_t, f.gcfg);
    s.eps_hat = chain_rule_target(f.p.coords, s.graph, t, f.sched);
    for (double v : s.eps_hat.v) CHECK(std::fabs(v) < 1e-10);

    const LossReport rep = diffpret_loss_on(s, f.params, f.ecfg, f.opts);
    const Tensor pred = predict_structure_noise(s.graph, f.params, f.ecfg);
    double want = 0;
    for (double v : pred.v) want += v * v;
    want /= double(s.graph.num_nodes);
    CHECK(rep.loss_struct == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("diffpret: total equals struct + seq exactly") {
    Fixture f = make_fixture();
    Rng rng(3);
    const LossReport rep =
        diffpret_loss(f.p, 55, f.params, f.sched, f.gcfg, f.ecfg, f.opts, rng);
    CHECK(std::fabs(rep.loss_total - (rep.loss_struct + rep.loss_seq)) < 1e-12);
    CHECK(rep.t == 55);
}

TEST_CASE("siamdiff: four-term half sum, mask sharing, accuracy averaging") {
    Fixture f = make_fixture();
    Rng rng(4);
    const SiamSample s =
        prepare_siamese_sample(f.p, 60, f.sched, f.gcfg, f.conf, f.opts, false, rng);
    CHECK(s.s1.mask_set == s.s2.mask_set);
    CHECK(s.s1.t == s.s2.t);
    // Trajectory 2 is a different conformer: coordinates differ.
    CHECK(rmsd(s.s1.protein_0.coords, s.s2.protein_0.coords) > 0.0);

    const LossReport rep = siamdiff_loss_on(s, f.params, f.ecfg, f.opts);
    CHECK(rep.has_directions);
    const double four = 0.5 * ((rep.per_direction[0] + rep.per_direction[1]) +
                               (rep.per_direction[2] + rep.per_direction[3]));
    CHECK(std::fabs(rep.loss_total - four) < 1e-12);
    CHECK(std::fabs(rep.loss_struct - 0.5 * (rep.per_direction[0] + rep.per_direction[2])) <
          1e-12);
}

TEST_CASE("siamdiff: collapse to diffpret under identical trajectories") {
    Fixture f = make_fixture();
    Rng rng(5);
    const PreparedSample s1 = prepare_sample(f.p, 45, f.sched, f.gcfg, f.opts, rng);
    const SiamSample collapsed{s1, s1};
    const LossReport rep = siamdiff_loss_on(collapsed, f.params, f.ecfg, f.opts);
    const LossReport dp = diffpret_loss_on(s1, f.params, f.ecfg, f.opts);
    CHECK(std::fabs(rep.per_direction[0] - dp.loss_struct) < 1e-9);
    CHECK(std::fabs(rep.per_direction[1] - dp.loss_seq) < 1e-9);
    CHECK(std::fabs(rep.loss_total - dp.loss_total) < 1e-9);
}

TEST_CASE("siamdiff: tied noise shares the coordinate draw") {
    Fixture f = make_fixture();
    f.conf.torsion_sigma = 1e-9;  // degenerate conformer
    Rng rng(6);
    const SiamSample s =
        prepare_siamese_sample(f.p, 30, f.sched, f.gcfg, f.conf, f.opts, true, rng);
    CHECK(max_abs_diff(s.s1.eps, s.s2.eps) == 0.0);
    CHECK(rmsd(s.s1.protein_t.coords, s.s2.protein_t.coords) < 1e-7);
}

TEST_CASE("losses are invariant under a rigid transform of all coordinates") {
    Fixture f = make_fixture();
    Rng rng(7);
    const PreparedSample s = prepare_sample(f.p, 35, f.sched, f.gcfg, f.opts, rng);
    const LossReport base = diffpret_loss_on(s, f.params, f.ecfg, f.opts);

    Rng grng(8);
    for (int rep = 0; rep < 10; ++rep) {
        const RigidTransform g = RigidTransform::random(grng);
        PreparedSample moved;
        moved.t = s.t;
        moved.protein_0 = s.protein_0;
        g.apply_in_place(moved.protein_0.coords);
        moved.protein_t = s.protein_t;
        g.apply_in_place(moved.protein_t.coords);
        moved.mask_set = s.mask_set;
        moved.labels = s.labels;
        moved.mask_groups = IndexGroups::build(s.mask_set, uint32_t(f.p.num_residues()));
        moved.eps = s.eps;
        moved.graph = build_graph(moved.protein_t, f.gcfg);
        moved.eps_hat = chain_rule_target(moved.protein_0.coords, moved.graph, s.t, f.sched);

        const LossReport got = diffpret_loss_on(moved, f.params, f.ecfg, f.opts);
        CHECK(std::fabs(got.loss_total - base.loss_total) <
              1e-6 * std::max(1.0, std::fabs(base.loss_total)));
    }
}

TEST_CASE("sum reductions scale mean losses by the element counts") {
    Fixture f = make_fixture();
    Rng rng(9);
    const PreparedSample s = prepare_sample(f.p, 70, f.sched, f.gcfg, f.opts, rng);
    const LossReport mean_rep = diffpret_loss_on(s, f.params, f.ecfg, f.opts);

    LossOptions sums;
    sums.struct_reduction = Reduction::sum;
    sums.seq_reduction = Reduction::sum;
    const LossReport sum_rep = diffpret_loss_on(s, f.params, f.ecfg, sums);
    CHECK(sum_rep.loss_struct ==
          doctest::Approx(mean_rep.loss_struct * double(s.graph.num_nodes)).epsilon(1e-9));
    if (!s.mask_set.empty())
        CHECK(sum_rep.loss_seq ==
              doctest::Approx(mean_rep.loss_seq * double(s.mask_set.size())).epsilon(1e-9));
}

TEST_CASE("sequence-only variant leaves structure clean and drops the struct term") {
    Fixture f = make_fixture();
    f.opts.structure_diffusion = false;
    Rng rng(10);
    const PreparedSample s = prepare_sample(f.p, 90, f.sched, f.gcfg, f.opts, rng);
    CHECK(rmsd(s.protein_t.coords, f.p.coords) == 0.0);
    const LossReport rep = diffpret_loss_on(s, f.params, f.ecfg, f.opts);
    CHECK(rep.loss_struct == 0.0);
    CHECK(rep.loss_total == rep.loss_seq);
}

TEST_CASE("gradient accumulation across both siamese directions (finite difference spot)") {
    Fixture f = make_fixture(77);
    Rng rng(11);
    const SiamSample s =
        prepare_siamese_sample(f.p, 40, f.sched, f.gcfg, f.conf, f.opts, false, rng);
    GradientBundle grads;
    siamdiff_loss_on(s, f.params, f.ecfg, f.opts, &grads);

    const double h = 1e-5;
    int checked = 0;
    for (const char* name : {"seq.w2", "noise.w1", "layer0.rel0.w", "input.w"}) {
        for (int64_t i = 0; i < 4; ++i) {
            ModelParams probe = f.params;
            probe.at(name).v[size_t(i)] += h;
            const double up = siamdiff_loss_on(s, probe, f.ecfg, f.opts).loss_total;
            probe.at(name).v[size_t(i)] -= 2 * h;
            const double dn = siamdiff_loss_on(s, probe, f.ecfg, f.opts).loss_total;
            const double fd = (up - dn) / (2 * h);
            CHECK(grads.at(name).v[size_t(i)] ==
                  doctest::Approx(fd).epsilon(1e-3).scale(std::max(0.1, std::fabs(fd))));
            ++checked;
        }
    }
    CHECK(checked == 16);
}
