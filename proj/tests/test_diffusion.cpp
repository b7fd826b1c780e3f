// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "diffusion.hpp"
#include "error.hpp"
#include "toygen.hpp"

using namespace siamdiff;

TEST_CASE("sample_structure_forward: closed-form scaling and per-step variance") {
    const auto sched = default_schedule();
    Rng rng(21);
    const std::vector<Vec3> coords0 = {{1, 2, 3}, {-2, 0, 5}};

    // Monte-Carlo moment check at t = T.
    const int t = sched.T;
    const double ab = sched.alpha_bar_at(t);
    const int draws = 100000;
    double sumsq = 0;
    for (int d = 0; d < draws; ++d) {
        auto [ct, eps] = sample_structure_forward(coords0, t, sched, rng);
        for (size_t i = 0; i < coords0.size(); ++i) {
            const Vec3 dev = ct[i] - coords0[i] * std::sqrt(ab);
            sumsq += dev.dot(dev);
        }
    }
    const double var = sumsq / double(draws * 6);
    CHECK(std::fabs(var - (1.0 - ab)) / (1.0 - ab) < 0.02);

    CHECK_THROWS_AS(sample_structure_forward(coords0, 0, sched, rng), InvalidParameterError);
    CHECK_THROWS_AS(sample_structure_forward(coords0, 101, sched, rng), InvalidParameterError);
}

TEST_CASE("sample_structure_forward returns the exact eps it used") {
    const auto sched = default_schedule();
    Rng rng(22);
    const std::vector<Vec3> coords0 = {{0.5, -1, 2}};
    auto [ct, eps] = sample_structure_forward(coords0, 42, sched, rng);
    const double ab = sched.alpha_bar_at(42);
    CHECK(ct[0].x ==
          doctest::Approx(std::sqrt(ab) * 0.5 + std::sqrt(1 - ab) * eps.at(0, 0)).epsilon(1e-15));
}

TEST_CASE("sample_sequence_forward: masking fraction and all-mask endpoint") {
    const auto sched = default_schedule();
    Rng rng(23);
    std::vector<ResidueType> seq(100000, ResidueType::LEU);

    auto [seq1, mask1] = sample_sequence_forward(seq, 1, sched, rng);
    CHECK(std::fabs(double(mask1.size()) / 1e5 - 0.15) < 0.005);

    auto [seqT, maskT] = sample_sequence_forward(seq, sched.T, sched, rng);
    CHECK(maskT.size() == seq.size());
    for (auto r : seqT) CHECK(r == ResidueType::MASK);
}

TEST_CASE("per-step mask composition reproduces the cumulative marginal") {
    const auto sched = default_schedule();
    Rng rng(24);
    const int t = 42;
    const int trials = 200000;
    int masked = 0;
    for (int i = 0; i < trials; ++i) {
        bool m = false;
        for (int s = 1; s <= t && !m; ++s) m = rng.uniform() < sched.step_mask[size_t(s - 1)];
        masked += m;
    }
    const double want = sched.cum_mask_at(t);
    // 4 sigma Monte-Carlo band.
    const double sigma = std::sqrt(want * (1 - want) / trials);
    CHECK(std::fabs(double(masked) / trials - want) < 4 * sigma);
}

TEST_CASE("sequence chain is absorbing along full trajectories") {
    const auto sched = default_schedule();
    Rng rng(25);
    std::vector<ResidueType> seq(32, ResidueType::GLN);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<bool> masked(seq.size(), false);
        std::vector<ResidueType> cur = seq;
        for (int t = 1; t <= sched.T; ++t) {
            for (size_t i = 0; i < cur.size(); ++i) {
                if (cur[i] != ResidueType::MASK && rng.uniform() < sched.step_mask[size_t(t - 1)])
                    cur[i] = ResidueType::MASK;
                if (masked[i]) CHECK(cur[i] == ResidueType::MASK);
                masked[i] = cur[i] == ResidueType::MASK;
            }
        }
        CHECK(std::all_of(masked.begin(), masked.end(), [](bool b) { return b; }));
    }
}

TEST_CASE("structure_posterior: beta -> 0 limit and t=1 point mass") {
    // Hand-crafted two-step table where the second step adds almost no noise:
    // beta_2 << 1 - alpha_bar_1, so the posterior collapses onto R^t.
    DiffusionSchedule s;
    s.T = 2;
    s.beta = {0.2, 1e-12};
    s.alpha = {0.8, 1.0 - 1e-12};
    s.alpha_bar = {0.8, 0.8 * (1.0 - 1e-12)};
    s.gamma = {0.0, 0.0};
    s.cum_mask = {0.5, 1.0};
    s.step_mask = {0.5, 1.0};
    s.sigma_rev = {0.0, (1.0 - 0.8) / (1.0 - s.alpha_bar[1]) * 1e-12};

    Tensor c0(1, 3), ct(1, 3);
    for (int i = 0; i < 3; ++i) {
        c0.v[size_t(i)] = double(i) + 1;
        ct.v[size_t(i)] = -double(i);
    }
    const auto post = structure_posterior(ct, c0, 2, s);
    for (int i = 0; i < 3; ++i)
        CHECK(post.mean.v[size_t(i)] == doctest::Approx(ct.v[size_t(i)]).epsilon(1e-6));
    CHECK(post.variance < 1e-9);

    const auto sched = default_schedule();
    const auto p1 = structure_posterior(ct, c0, 1, sched);
    for (int i = 0; i < 3; ++i)
        CHECK(p1.mean.v[size_t(i)] == doctest::Approx(c0.v[size_t(i)]).epsilon(1e-12));
    CHECK(p1.variance == 0.0);
}

TEST_CASE("sequence_posterior: endpoint algebra and absorbing consistency") {
    const auto sched = default_schedule();
    // Unmasked s_t is a point mass.
    const auto point = sequence_posterior(ResidueType::TRP, ResidueType::TRP, 7, sched);
    CHECK(point.p_orig == 1.0);
    CHECK(point.p_mask == 0.0);

    // t = T: P(s0) = 1 - rho_bar_{T-1}.
    const auto tail = sequence_posterior(ResidueType::MASK, ResidueType::TRP, sched.T, sched);
    CHECK(tail.p_orig == doctest::Approx(1.0 - sched.cum_mask_at(sched.T - 1)).epsilon(1e-12));
    CHECK(tail.p_orig + tail.p_mask == doctest::Approx(1.0).epsilon(1e-12));

    // Probabilities always sum to one.
    for (int t = 1; t <= sched.T; ++t) {
        const auto post = sequence_posterior(ResidueType::MASK, ResidueType::ALA, t, sched);
        CHECK(post.p_orig + post.p_mask == doctest::Approx(1.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS(sequence_posterior(ResidueType::ALA, ResidueType::GLY, 5, sched),
                    InvalidParameterError);
}

TEST_CASE("chain_rule_target: zero deviation and empty neighborhoods give zero") {
    const auto sched = default_schedule();
    GraphConfig cfg;
    cfg.level = GraphLevel::atom;
    const Protein p = build_peptide("KV");
    const int t = 30;
    const double sab = std::sqrt(sched.alpha_bar_at(t));

    // coords_t = sqrt(alpha_bar) * coords0 exactly: every term vanishes.
    Protein pt = p;
    for (auto& c : pt.coords) c = c * sab;
    const ProteinGraph g = build_atom_graph(pt, cfg);
    const Tensor target = chain_rule_target(p.coords, g, t, sched);
    for (double v : target.v) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("chain_rule_target matches a per-edge scalar oracle on a 3-atom system") {
    const auto sched = default_schedule();
    const int t = 50;
    const std::vector<Vec3> coords0 = {{0, 0, 0}, {2, 0, 0}, {0, 3, 0}};
    const std::vector<Vec3> coords_t = {{0.3, -0.2, 0.1}, {1.4, 0.5, 0}, {0.2, 2.0, -0.7}};

    Protein pt;
    for (size_t i = 0; i < 3; ++i) {
        pt.sequence.push_back(ResidueType::GLY);
        pt.coords.push_back(coords_t[i]);
        pt.atom_names.emplace_back("CA");
        pt.atom_to_residue.push_back(uint32_t(i));
        pt.residue_atom_spans.emplace_back(uint32_t(i), uint32_t(i + 1));
    }
    GraphConfig cfg;
    cfg.level = GraphLevel::atom;
    cfg.atom_radius = 10.0;  // fully connected
    const ProteinGraph g = build_atom_graph(pt, cfg);
    const Tensor eps_hat = chain_rule_target(coords0, g, t, sched);

    const double ab = sched.alpha_bar_at(t);
    for (uint32_t i = 0; i < 3; ++i) {
        Vec3 want{0, 0, 0};
        for (uint32_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            const double dt = (coords_t[i] - coords_t[j]).norm();
            const double d0 = (coords0[i] - coords0[j]).norm();
            const double w = (dt - std::sqrt(ab) * d0) / std::sqrt(1.0 - ab);
            want += (coords_t[i] - coords_t[j]) * (w / dt);
        }
        CHECK(std::fabs(eps_hat.at(i, 0) - want.x) < 1e-10);
        CHECK(std::fabs(eps_hat.at(i, 1) - want.y) < 1e-10);
        CHECK(std::fabs(eps_hat.at(i, 2) - want.z) < 1e-10);
    }
}

TEST_CASE("iterated one-step chain matches the closed form (moments)") {
    const auto sched = default_schedule();
    Rng rng(2026);
    const double x0 = 1.7;
    const int t = 10, draws = 100000;
    double sum = 0, sumsq = 0;
    for (int d = 0; d < draws; ++d) {
        double x = x0;
        for (int s = 1; s <= t; ++s)
            x = std::sqrt(1 - sched.beta[size_t(s - 1)]) * x +
                std::sqrt(sched.beta[size_t(s - 1)]) * rng.gaussian();
        sum += x;
        sumsq += x * x;
    }
    const double ab = sched.alpha_bar_at(t);
    const double mean = sum / draws;
    const double var = sumsq / draws - mean * mean;
    CHECK(std::fabs(mean - std::sqrt(ab) * x0) < 3 * std::sqrt((1 - ab) / draws));
    CHECK(std::fabs(var - (1 - ab)) < 3 * (1 - ab) * std::sqrt(2.0 / (draws - 1)));
}
