// SPDX-License-Identifier: Apache-2.0
#include "selfcheck.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "checkpoint.hpp"
#include "error.hpp"
#include "losses.hpp"
#include "metrics.hpp"
#include "toygen.hpp"

namespace siamdiff {

namespace {

CheckResult make_result(const std::string& name, double err, double tol,
                        const std::string& extra = "") {
    CheckResult r;
    r.name = name;
    r.max_err = err;
    r.pass = err <= tol;
    char buf[64];
    std::snprintf(buf, sizeof buf, "tol=%.3g", tol);
    r.detail = extra.empty() ? buf : extra + ", " + buf;
    return r;
}

Tensor rotate_rows(const Tensor& x, const RigidTransform& g) {
    Tensor out(x.rows, x.cols);
    for (int64_t i = 0; i < x.rows; ++i) {
        const Vec3 v{x.at(i, 0), x.at(i, 1), x.at(i, 2)};
        const Vec3 w{g.r[0][0] * v.x + g.r[0][1] * v.y + g.r[0][2] * v.z,
                     g.r[1][0] * v.x + g.r[1][1] * v.y + g.r[1][2] * v.z,
                     g.r[2][0] * v.x + g.r[2][1] * v.y + g.r[2][2] * v.z};
        out.at(i, 0) = w.x;
        out.at(i, 1) = w.y;
        out.at(i, 2) = w.z;
    }
    return out;
}

struct EquivarianceFixture {
    Protein p0;
    GraphConfig gcfg;
    EncoderConfig ecfg;
    ModelParams params;
    PreparedSample sample;
};

EquivarianceFixture make_fixture(GraphLevel level, uint64_t seed) {
    EquivarianceFixture f;
    f.p0 = build_peptide("ASVKLDE");
    if (level == GraphLevel::residue) f.p0 = reduce_to_ca(f.p0);
    f.gcfg.level = level;
    f.ecfg = EncoderConfig::make(f.gcfg, 2, 16);
    Rng prng(seed);
    f.params = init_params(f.ecfg, prng);
    Rng srng(seed + 1);
    f.sample = prepare_sample(f.p0, 30, default_schedule(), f.gcfg, {}, srng);
    return f;
}

}  // namespace

std::vector<CheckResult> check_equivariance(int transforms) {
    std::vector<CheckResult> out;
    const auto sched = default_schedule();
    for (GraphLevel level : {GraphLevel::atom, GraphLevel::residue}) {
        EquivarianceFixture f = make_fixture(level, level == GraphLevel::atom ? 11 : 12);
        const EncodedProtein base = encode(f.sample.graph, f.params, f.ecfg);
        const Tensor base_noise = predict_structure_noise(f.sample.graph, f.params, f.ecfg);
        const Tensor base_target =
            chain_rule_target(f.sample.protein_0.coords, f.sample.graph, f.sample.t, sched);

        double err_inv = 0, err_noise = 0, err_target = 0;
        Rng grng(99 + uint64_t(level == GraphLevel::residue));
        bool edges_stable = true;
        for (int k = 0; k < transforms; ++k) {
            const RigidTransform g = RigidTransform::random(grng);
            Protein pt = f.sample.protein_t;
            g.apply_in_place(pt.coords);
            Protein p0 = f.sample.protein_0;
            g.apply_in_place(p0.coords);
            const ProteinGraph gr = build_graph(pt, f.gcfg);
            if (gr.edges != f.sample.graph.edges) {
                edges_stable = false;
                break;
            }
            const EncodedProtein enc = encode(gr, f.params, f.ecfg);
            err_inv = std::max(err_inv, max_abs_diff(enc.atom_reps, base.atom_reps));
            err_inv = std::max(err_inv, max_abs_diff(enc.residue_reps, base.residue_reps));

            const Tensor noise = predict_structure_noise(gr, f.params, f.ecfg);
            err_noise = std::max(err_noise, max_abs_diff(noise, rotate_rows(base_noise, g)));

            const Tensor target = chain_rule_target(p0.coords, gr, f.sample.t, sched);
            err_target = std::max(err_target, max_abs_diff(target, rotate_rows(base_target, g)));
        }
        const char* lv = graph_level_name(level);
        if (!edges_stable) {
            out.push_back({std::string("equivariance.") + lv + ".edges", false, 1.0,
                           "edge set changed under rigid transform"});
            continue;
        }
        out.push_back(
            make_result(std::string("equivariance.") + lv + ".encoder_invariance", err_inv, 1e-9));
        out.push_back(make_result(std::string("equivariance.") + lv + ".noise_head", err_noise,
                                  1e-8));
        out.push_back(make_result(std::string("equivariance.") + lv + ".chain_rule_target",
                                  err_target, 1e-8));
    }
    return out;
}

std::vector<CheckResult> check_schedule_algebra() {
    std::vector<CheckResult> out;
    const auto s = default_schedule();

    double err = 0;
    double prod = 1;
    for (int t = 1; t <= s.T; ++t) {
        prod *= 1.0 - s.beta[size_t(t - 1)];
        err = std::max(err, std::fabs(prod - s.alpha_bar[size_t(t - 1)]));
    }
    out.push_back(make_result("schedule.alpha_bar_running_product", err, 1e-14));

    err = 0;
    for (int t = 2; t <= s.T; ++t) {
        const double beta = s.beta[size_t(t - 1)];
        const double want = beta / (2.0 * (1.0 - beta) * (1.0 - s.alpha_bar_at(t - 1)));
        err = std::max(err, std::fabs(want - s.gamma[size_t(t - 1)]));
        if (s.gamma[size_t(t - 1)] < 0) err = 1;
    }
    out.push_back(make_result("schedule.gamma_formula", err, 1e-14));

    err = 0;
    for (int t = 1; t <= s.T; ++t) {
        const double prev = s.cum_mask_at(t - 1);
        const double recon = prev + (1.0 - prev) * s.step_mask[size_t(t - 1)];
        err = std::max(err, std::fabs(recon - s.cum_mask_at(t)));
        if (s.step_mask[size_t(t - 1)] < -1e-15 || s.step_mask[size_t(t - 1)] > 1 + 1e-15) err = 1;
    }
    out.push_back(make_result("schedule.mask_recurrence", err, 1e-14));

    err = std::fabs(s.cum_mask_at(1) - 0.15) + std::fabs(s.cum_mask_at(s.T) - 1.0) +
          std::fabs(s.step_mask[size_t(s.T - 1)] - 1.0) + std::fabs(s.beta[0] - 1e-4) +
          std::fabs(s.beta[size_t(s.T - 1)] - 0.1);
    out.push_back(make_result("schedule.default_endpoints", err, 1e-12));
    return out;
}

std::vector<CheckResult> check_forward_marginal(int draws) {
    std::vector<CheckResult> out;
    const auto sched = default_schedule();
    const std::vector<Vec3> coords0 = {{0, 0, 0}, {1.2, 0.3, -0.5}, {-2.0, 1.0, 0.7}};
    Rng rng(2024);
    for (int t : {1, 10, 50, 100}) {
        const double ab = sched.alpha_bar_at(t);
        const double want_var = 1.0 - ab;
        std::vector<double> mean(9, 0.0);
        double sumsq = 0;
        for (int d = 0; d < draws; ++d) {
            // Iterated per-step chain: x_t = sqrt(1-beta_t) x_{t-1} + sqrt(beta_t) xi.
            double x[9];
            for (int i = 0; i < 3; ++i) {
                x[3 * i] = coords0[size_t(i)].x;
                x[3 * i + 1] = coords0[size_t(i)].y;
                x[3 * i + 2] = coords0[size_t(i)].z;
            }
            for (int s = 1; s <= t; ++s) {
                const double a = std::sqrt(1.0 - sched.beta[size_t(s - 1)]);
                const double b = std::sqrt(sched.beta[size_t(s - 1)]);
                for (double& xi : x) xi = a * xi + b * rng.gaussian();
            }
            for (int i = 0; i < 9; ++i) {
                mean[size_t(i)] += x[i];
                const double base =
                    std::sqrt(ab) * (i % 3 == 0   ? coords0[size_t(i / 3)].x
                                     : i % 3 == 1 ? coords0[size_t(i / 3)].y
                                                  : coords0[size_t(i / 3)].z);
                sumsq += (x[i] - base) * (x[i] - base);
            }
        }
        double worst_mean_sigmas = 0;
        const double mean_sigma = std::sqrt(want_var / double(draws));
        for (int i = 0; i < 9; ++i) {
            const double base = std::sqrt(ab) * (i % 3 == 0   ? coords0[size_t(i / 3)].x
                                                 : i % 3 == 1 ? coords0[size_t(i / 3)].y
                                                              : coords0[size_t(i / 3)].z);
            const double dev = std::fabs(mean[size_t(i)] / double(draws) - base);
            worst_mean_sigmas = std::max(worst_mean_sigmas, dev / mean_sigma);
        }
        const double n = 9.0 * double(draws);
        const double var_est = sumsq / n;
        const double var_sigma = want_var * std::sqrt(2.0 / (n - 1.0));
        const double var_sigmas = std::fabs(var_est - want_var) / var_sigma;

        out.push_back(make_result("forward_marginal.mean.t" + std::to_string(t),
                                  worst_mean_sigmas, 3.0, "unit=MC sigmas"));
        out.push_back(make_result("forward_marginal.var.t" + std::to_string(t), var_sigmas, 3.0,
                                  "unit=MC sigmas"));
    }
    return out;
}

namespace {

// 1-D numerical Bayes: posterior of r_{t-1} given r_t and r_0 on a fine grid.
std::pair<double, double> grid_bayes_posterior(double r0, double rt, int t,
                                               const DiffusionSchedule& s) {
    const double ab_prev = s.alpha_bar_at(t - 1);
    const double beta = s.beta[size_t(t - 1)];
    const double alpha = s.alpha[size_t(t - 1)];
    const double mu_prior = std::sqrt(ab_prev) * r0;
    const double sd_prior = std::sqrt(1.0 - ab_prev);
    const double center_lik = rt / std::sqrt(alpha);
    const double sd_lik = std::sqrt(beta / alpha);
    const double lo = std::min(mu_prior - 10 * sd_prior, center_lik - 10 * sd_lik);
    const double hi = std::max(mu_prior + 10 * sd_prior, center_lik + 10 * sd_lik);
    const int n = 200001;
    const double step = (hi - lo) / double(n - 1);
    double z = 0, m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + step * double(i);
        const double dp = (x - mu_prior) / sd_prior;
        const double dl = (rt - std::sqrt(alpha) * x);
        const double logw = -0.5 * dp * dp - 0.5 * dl * dl / beta;
        const double w = std::exp(logw);
        z += w;
        m1 += w * x;
        m2 += w * x * x;
    }
    m1 /= z;
    m2 /= z;
    return {m1, m2 - m1 * m1};
}

DiffusionSchedule toy_chain() { return make_schedule(3, 0.01, 0.2, 0.2, 1.0); }

// Joint path probabilities of the 1-residue absorbing chain; state 0 keeps
// the original type, state 1 is MASK.
struct ChainTable {
    // joint[t][a][b] = P(s^{t-1} = a, s^t = b), t in 1..T
    double joint[4][2][2] = {};
};

ChainTable enumerate_chain(const DiffusionSchedule& s) {
    ChainTable out;
    const int T = s.T;
    for (int path = 0; path < (1 << T); ++path) {
        double prob = 1;
        int prev = 0;
        bool valid = true;
        std::vector<int> states(size_t(T) + 1, 0);
        for (int t = 1; t <= T; ++t) {
            const int cur = (path >> (t - 1)) & 1;
            states[size_t(t)] = cur;
            const double rho = s.step_mask[size_t(t - 1)];
            if (prev == 1 && cur == 0) {
                valid = false;  // absorbing: cannot unmask
                break;
            }
            prob *= (prev == 1) ? 1.0 : (cur == 1 ? rho : 1.0 - rho);
            prev = cur;
        }
        if (!valid || prob == 0) continue;
        for (int t = 1; t <= T; ++t)
            out.joint[t][states[size_t(t - 1)]][states[size_t(t)]] += prob;
    }
    return out;
}

}  // namespace

std::vector<CheckResult> check_posteriors() {
    std::vector<CheckResult> out;
    const auto sched = default_schedule();

    double err_mean = 0, err_var = 0;
    for (int t : {2, 25, 77, 100}) {
        const double r0 = 0.7, rt = -0.4;
        const auto [gm, gv] = grid_bayes_posterior(r0, rt, t, sched);
        Tensor c0(1, 1), ct(1, 1);
        c0.v[0] = r0;
        ct.v[0] = rt;
        const StructurePosterior post = structure_posterior(ct, c0, t, sched);
        err_mean = std::max(err_mean, std::fabs(post.mean.v[0] - gm));
        err_var = std::max(err_var, std::fabs(post.variance - gv));
    }
    out.push_back(make_result("posterior.structure.grid_mean", err_mean, 1e-3));
    out.push_back(make_result("posterior.structure.grid_var", err_var, 1e-3));

    const auto toy = toy_chain();
    const ChainTable table = enumerate_chain(toy);
    double err_seq = 0;
    for (int t = 1; t <= toy.T; ++t) {
        // Conditioned on s^t = MASK.
        const double pb = table.joint[t][0][1] + table.joint[t][1][1];
        if (pb > 0) {
            const auto post = sequence_posterior(ResidueType::MASK, ResidueType::ALA, t, toy);
            err_seq = std::max(err_seq, std::fabs(post.p_orig - table.joint[t][0][1] / pb));
            err_seq = std::max(err_seq, std::fabs(post.p_mask - table.joint[t][1][1] / pb));
            err_seq = std::max(err_seq, std::fabs(post.p_orig + post.p_mask - 1.0));
        }
        // Conditioned on s^t = original: point mass.
        const double pk = table.joint[t][0][0] + table.joint[t][1][0];
        if (pk > 0) {
            const auto post = sequence_posterior(ResidueType::ALA, ResidueType::ALA, t, toy);
            err_seq = std::max(err_seq, std::fabs(post.p_orig - 1.0));
            err_seq = std::max(err_seq, std::fabs(post.p_mask));
        }
    }
    out.push_back(make_result("posterior.sequence.path_enumeration", err_seq, 1e-12));
    return out;
}

CheckResult check_zero_kl_delta() {
    const auto toy = toy_chain();
    // Point-mass predictor on the true type (index 0 of three candidates).
    const int kTypes = 3;
    double worst = 0;
    for (int t = 1; t <= toy.T; ++t) {
        // p_theta(s^{t-1} | s^t = MASK) = sum over candidate s0 of
        // q(s^{t-1} | s^t, s0) * p_tilde(s0), support {type0..type2, MASK}.
        std::vector<double> p(kTypes + 1, 0.0);
        for (int cand = 0; cand < kTypes; ++cand) {
            const double mass = (cand == 0) ? 1.0 : 0.0;  // delta on ground truth
            if (mass == 0) continue;
            const auto post = sequence_posterior(ResidueType::MASK, ResidueType(cand), t, toy);
            p[size_t(cand)] += mass * post.p_orig;
            p[size_t(kTypes)] += mass * post.p_mask;
        }
        const auto q = sequence_posterior(ResidueType::MASK, ResidueType(0), t, toy);
        const double qv[2] = {q.p_orig, q.p_mask};
        const double pv[2] = {p[0], p[size_t(kTypes)]};
        double kl = 0;
        for (int i = 0; i < 2; ++i)
            if (qv[i] > 0) kl += qv[i] * std::log(qv[i] / pv[i]);
        worst = std::max(worst, std::fabs(kl));
    }
    return make_result("sequence_kl.point_mass_predictor", worst, 1e-10);
}

CheckResult check_gradients(int min_coords) {
    const Protein p = build_peptide("KDS");
    GraphConfig gcfg;
    gcfg.level = GraphLevel::atom;
    const EncoderConfig ecfg = EncoderConfig::make(gcfg, 2, 16);
    Rng prng(31);
    ModelParams params = init_params(ecfg, prng);
    const auto sched = default_schedule();
    const LossOptions opts;
    ConformerConfig conf;

    Rng srng(77);
    const SiamSample sample =
        prepare_siamese_sample(p, 35, sched, gcfg, conf, opts, false, srng);

    GradientBundle grads;
    siamdiff_loss_on(sample, params, ecfg, opts, &grads);

    const auto loss_value = [&](const ModelParams& q) {
        return siamdiff_loss_on(sample, q, ecfg, opts).loss_total;
    };

    const size_t total = params.scalar_count();
    const size_t stride = std::max<size_t>(1, total / size_t(min_coords));
    const double h = 1e-4;
    double max_violation = 0;
    size_t checked = 0;
    size_t flat = 0;
    for (const auto& [name, tensor] : params.tensors) {
        for (size_t i = 0; i < tensor.v.size(); ++i, ++flat) {
            if (flat % stride != 0) continue;
            ModelParams probe = params;
            probe.tensors.at(name).v[i] = tensor.v[i] + h;
            const double up = loss_value(probe);
            probe.tensors.at(name).v[i] = tensor.v[i] - h;
            const double dn = loss_value(probe);
            const double fd = (up - dn) / (2.0 * h);
            const double an = grads.tensors.at(name).v[i];
            const double tol = std::max(1e-4, 1e-3 * std::max(std::fabs(fd), std::fabs(an)));
            max_violation = std::max(max_violation, std::fabs(fd - an) / tol);
            ++checked;
        }
    }
    CheckResult r = make_result("gradients.finite_difference", max_violation, 1.0,
                                "coords=" + std::to_string(checked) + ", err in tol units");
    r.pass = r.pass && checked >= size_t(min_coords);
    return r;
}

namespace {

// Independent F_max oracle: materializes predicted sets per threshold.
double fmax_oracle(const PredictionSet& preds, const std::vector<double>& grid) {
    double best = 0;
    const size_t n = preds.scores.size();
    for (double thr : grid) {
        std::vector<std::vector<uint32_t>> predicted(n);
        for (size_t i = 0; i < n; ++i)
            for (int f = 0; f < preds.num_terms; ++f)
                if (preds.scores[i][size_t(f)] >= thr) predicted[i].push_back(uint32_t(f));
        double psum = 0, rsum = 0;
        size_t m = 0;
        for (size_t i = 0; i < n; ++i) {
            size_t correct = 0;
            for (uint32_t f : predicted[i])
                for (uint32_t g : preds.truth[i])
                    if (f == g) ++correct;
            if (!predicted[i].empty()) {
                ++m;
                psum += double(correct) / double(predicted[i].size());
            }
            rsum += double(correct) / double(preds.truth[i].size());
        }
        if (m == 0) continue;
        const double prec = psum / double(m), rec = rsum / double(n);
        if (prec + rec == 0) continue;
        best = std::max(best, 2 * prec * rec / (prec + rec));
    }
    return best;
}

// Rank-then-Pearson with an O(n^2) tie-aware ranking, independent of the
// sorting implementation in metrics.cpp.
double spearman_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ranks = [](const std::vector<double>& x) {
        std::vector<double> r(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
            double smaller = 0, equal = 0;
            for (size_t j = 0; j < x.size(); ++j) {
                if (x[j] < x[i]) ++smaller;
                if (x[j] == x[i]) ++equal;
            }
            r[i] = smaller + 0.5 * (equal + 1);
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    double ma = 0, mb = 0;
    for (size_t i = 0; i < ra.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= double(ra.size());
    mb /= double(rb.size());
    double cov = 0, va = 0, vb = 0;
    for (size_t i = 0; i < ra.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    return cov / std::sqrt(va * vb);
}

}  // namespace

std::vector<CheckResult> check_metrics() {
    std::vector<CheckResult> out;
    const auto grid = default_threshold_grid();

    // Perfect predictor.
    PredictionSet perfect;
    perfect.num_terms = 4;
    perfect.scores = {{1, 0, 0, 1}, {0, 1, 0, 0}, {1, 1, 1, 0}};
    perfect.truth = {{0, 3}, {1}, {0, 1, 2}};
    out.push_back(make_result("fmax.perfect", std::fabs(fmax(perfect, grid) - 1.0), 0.0));

    // Exhaustive N=3, F=4 fixture plus randomized fixtures against the oracle.
    double err = 0;
    Rng rng(4242);
    for (int rep = 0; rep < 100; ++rep) {
        PredictionSet ps;
        ps.num_terms = 4;
        ps.scores.resize(3);
        ps.truth.resize(3);
        for (int i = 0; i < 3; ++i) {
            for (int f = 0; f < 4; ++f)
                ps.scores[size_t(i)].push_back(double(rng.uniform_int(0, 4)) / 4.0);
            const uint32_t t1 = uint32_t(rng.uniform_int(0, 3));
            ps.truth[size_t(i)] = {t1};
            if (rng.uniform() < 0.5) ps.truth[size_t(i)].push_back(uint32_t((t1 + 1) % 4));
        }
        err = std::max(err, std::fabs(fmax(ps, grid) - fmax_oracle(ps, grid)));
    }
    out.push_back(make_result("fmax.exhaustive_oracle", err, 0.0));

    // All-one predictor: recall 1, precision mean(|T_i|/F).
    PredictionSet allone;
    allone.num_terms = 4;
    allone.scores = {{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}};
    allone.truth = {{0}, {1, 2}, {0, 1, 2, 3}};
    const double prec = (0.25 + 0.5 + 1.0) / 3.0;
    const double want = 2 * prec * 1.0 / (prec + 1.0);
    out.push_back(make_result("fmax.all_one_scores", std::fabs(fmax(allone, grid) - want), 1e-12));

    // Zero scores against a grid that excludes 0: skip rule gives 0.
    PredictionSet zeros = allone;
    zeros.scores = {{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}};
    std::vector<double> positive_grid(grid.begin() + 1, grid.end());
    out.push_back(make_result("fmax.skip_rule_zero", std::fabs(fmax(zeros, positive_grid)), 0.0));

    RankingSet ident;
    ident.pred = {0.1, 0.4, 0.5, 0.9};
    ident.truth = {1, 2, 3, 4};
    out.push_back(
        make_result("spearman.identity", std::fabs(spearman_global(ident) - 1.0), 1e-12));
    RankingSet rev = ident;
    rev.truth = {4, 3, 2, 1};
    out.push_back(make_result("spearman.reversed", std::fabs(spearman_global(rev) + 1.0), 1e-12));

    RankingSet ties;
    ties.pred = {1, 2, 2, 3};
    ties.truth = {1, 3, 2, 4};
    out.push_back(make_result(
        "spearman.ties_oracle",
        std::fabs(spearman_global(ties) - spearman_oracle(ties.pred, ties.truth)), 1e-12));

    // Mean over groups: +1 and -1 average to 0; random groups match per-group
    // oracle means.
    RankingSet grouped;
    grouped.group = {0, 0, 0, 1, 1, 1};
    grouped.pred = {1, 2, 3, 1, 2, 3};
    grouped.truth = {10, 20, 30, 3, 2, 1};
    out.push_back(make_result("spearman.mean_plus_minus", std::fabs(spearman_mean(grouped)), 1e-12));

    double merr = 0;
    for (int rep = 0; rep < 20; ++rep) {
        RankingSet rs;
        double oracle_sum = 0;
        for (uint32_t g = 0; g < 3; ++g) {
            std::vector<double> a, b;
            for (int i = 0; i < 6; ++i) {
                a.push_back(double(rng.uniform_int(0, 9)));
                b.push_back(double(rng.uniform_int(0, 9)) + 0.1 * double(i));
            }
            // ensure non-constant
            a[0] += 10.0;
            for (int i = 0; i < 6; ++i) {
                rs.group.push_back(g);
                rs.pred.push_back(a[size_t(i)]);
                rs.truth.push_back(b[size_t(i)]);
            }
            oracle_sum += spearman_oracle(a, b);
        }
        merr = std::max(merr, std::fabs(spearman_mean(rs) - oracle_sum / 3.0));
    }
    out.push_back(make_result("spearman.mean_groups_oracle", merr, 1e-12));
    return out;
}

CheckResult check_conformers(int draws) {
    const Protein p = build_peptide("ARNDCQEGHILKMFSTWYV");  // all types except PRO
    const ClashChecker checker(p);
    ConformerConfig cfg;
    const auto bonds = detect_bonds(p, 1.9);
    Rng rng(5150);
    double max_bond_err = 0, max_backbone_err = 0;
    double min_clash = 1e300;
    for (int d = 0; d < draws; ++d) {
        const Protein c = simulate_conformer(p, GraphLevel::atom, cfg, rng, checker);
        for (size_t i = 0; i < p.num_atoms(); ++i) {
            const std::string& an = p.atom_names[i];
            if (an == "N" || an == "CA" || an == "C" || an == "O")
                max_backbone_err =
                    std::max(max_backbone_err, (c.coords[i] - p.coords[i]).norm());
        }
        for (const auto& [a, b] : bonds) {
            if (p.atom_to_residue[a] != p.atom_to_residue[b]) continue;
            const double orig = (p.coords[a] - p.coords[b]).norm();
            const double now = (c.coords[a] - c.coords[b]).norm();
            max_bond_err = std::max(max_bond_err, std::fabs(now - orig));
        }
        min_clash = std::min(min_clash, checker.min_nonbonded(c.coords).first);
    }
    CheckResult r;
    r.name = "conformer.validity";
    r.max_err = std::max(max_bond_err, max_backbone_err);
    r.pass = max_backbone_err == 0.0 && max_bond_err <= 1e-9 &&
             min_clash >= ConformerConfig{}.clash_min_dist;
    char buf[160];
    std::snprintf(buf, sizeof buf, "backbone=%.3g bond=%.3g min_nonbonded=%.3f over %d draws",
                  max_backbone_err, max_bond_err, min_clash, draws);
    r.detail = buf;
    return r;
}

std::vector<CheckResult> check_loss_identities(int fixtures) {
    std::vector<CheckResult> out;
    const auto sched = default_schedule();
    const char* pool[] = {"GAS", "KDE", "VLNQ", "ASVK", "MKR"};
    GraphConfig gcfg;
    gcfg.level = GraphLevel::atom;
    const EncoderConfig ecfg = EncoderConfig::make(gcfg, 2, 12);
    ConformerConfig conf;
    const LossOptions opts;

    double err_four = 0, err_add = 0, err_swap = 0;
    for (int k = 0; k < fixtures; ++k) {
        Rng prng(100 + uint64_t(k));
        const ModelParams params = init_params(ecfg, prng);
        const Protein p = build_peptide(pool[k % 5]);
        Rng srng(200 + uint64_t(k));
        const int t = int(srng.uniform_int(1, sched.T));
        const SiamSample s = prepare_siamese_sample(p, t, sched, gcfg, conf, opts, false, srng);
        const LossReport rep = siamdiff_loss_on(s, params, ecfg, opts);
        const double four = 0.5 * ((rep.per_direction[0] + rep.per_direction[1]) +
                                   (rep.per_direction[2] + rep.per_direction[3]));
        err_four = std::max(err_four, std::fabs(rep.loss_total - four));

        const SiamSample swapped{s.s2, s.s1};
        const LossReport rep2 = siamdiff_loss_on(swapped, params, ecfg, opts);
        err_swap = std::max(err_swap, std::fabs(rep.loss_total - rep2.loss_total));

        Rng drng(300 + uint64_t(k));
        const LossReport dp = diffpret_loss(p, t, params, sched, gcfg, ecfg, opts, drng);
        err_add = std::max(err_add, std::fabs(dp.loss_total - (dp.loss_struct + dp.loss_seq)));
    }
    out.push_back(make_result("loss.siamdiff_four_term_half_sum", err_four, 1e-12));
    out.push_back(make_result("loss.siamdiff_swap_symmetry", err_swap, 1e-12));
    out.push_back(make_result("loss.diffpret_additivity", err_add, 1e-12));

    // Collapse: identical trajectories (zero conformer noise, tied coordinate
    // noise) reduce each direction to the single-trajectory loss.
    {
        Rng prng(9);
        const ModelParams params = init_params(ecfg, prng);
        const Protein p = build_peptide("ASVK");
        Rng srng(10);
        PreparedSample s1 = prepare_sample(p, 40, sched, gcfg, opts, srng);
        SiamSample collapsed{s1, s1};
        const LossReport rep = siamdiff_loss_on(collapsed, params, ecfg, opts);
        const LossReport dp = diffpret_loss_on(s1, params, ecfg, opts);
        double err = std::fabs(rep.per_direction[0] - dp.loss_struct);
        err = std::max(err, std::fabs(rep.per_direction[1] - dp.loss_seq));
        err = std::max(err, std::fabs(rep.per_direction[2] - dp.loss_struct));
        err = std::max(err, std::fabs(rep.per_direction[3] - dp.loss_seq));
        err = std::max(err, std::fabs(rep.loss_total - dp.loss_total));
        out.push_back(make_result("loss.collapse_equivalence", err, 1e-9));
    }
    return out;
}

std::vector<CheckResult> check_checkpoint_roundtrip(const std::string& tmp_dir) {
    std::vector<CheckResult> out;
    GraphConfig gcfg;
    const EncoderConfig ecfg = EncoderConfig::make(gcfg, 2, 8);
    Rng rng(77);
    ModelParams params = init_params(ecfg, rng);
    const uint64_t digest = fnv1a64(ecfg.arch_string());
    const std::string p1 = tmp_dir + "/ck_a.bin", p2 = tmp_dir + "/ck_b.bin";

    save_checkpoint(p1, params, digest);
    const LoadedCheckpoint loaded = load_checkpoint(p1);
    save_checkpoint(p2, loaded.params, loaded.arch_digest);

    const auto slurp = [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    };
    const std::string a = slurp(p1), b = slurp(p2);
    CheckResult rt;
    rt.name = "checkpoint.roundtrip_bytes";
    rt.pass = !a.empty() && a == b;
    rt.detail = "save->load->save identical, " + std::to_string(a.size()) + " bytes";
    out.push_back(rt);

    // Corrupt one payload byte: load must fail with an integrity error.
    std::string tampered = a;
    tampered[tampered.size() - 5] = char(tampered[tampered.size() - 5] ^ 0x5a);
    const std::string p3 = tmp_dir + "/ck_c.bin";
    {
        std::ofstream f(p3, std::ios::binary);
        f.write(tampered.data(), std::streamsize(tampered.size()));
    }
    CheckResult tam;
    tam.name = "checkpoint.digest_detects_corruption";
    tam.pass = false;
    try {
        load_checkpoint(p3);
        tam.detail = "corrupted file loaded without error";
    } catch (const IntegrityError&) {
        tam.pass = true;
        tam.detail = "IntegrityError raised";
    }
    out.push_back(tam);

    CheckResult arch;
    arch.name = "checkpoint.architecture_digest_guard";
    arch.pass = false;
    try {
        load_checkpoint_checked(p1, digest ^ 0x1);
        arch.detail = "mismatched architecture accepted";
    } catch (const ConfigError&) {
        arch.pass = true;
        arch.detail = "ConfigError raised";
    }
    out.push_back(arch);
    return out;
}

std::vector<CheckResult> run_all_checks(const std::string& tmp_dir) {
    std::vector<CheckResult> all;
    const auto append = [&all](std::vector<CheckResult> v) {
        for (auto& r : v) all.push_back(std::move(r));
    };
    append(check_schedule_algebra());
    append(check_posteriors());
    all.push_back(check_zero_kl_delta());
    append(check_equivariance(100));
    all.push_back(check_gradients(60));
    append(check_metrics());
    all.push_back(check_conformers(100));
    append(check_loss_identities(10));
    append(check_forward_marginal(20000));
    append(check_checkpoint_roundtrip(tmp_dir));
    return all;
}

}  // namespace siamdiff
