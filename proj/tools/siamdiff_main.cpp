// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: pretrain / diffuse / eval / selfcheck.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "checkpoint.hpp"
#include "error.hpp"
#include "graphio.hpp"
#include "metrics.hpp"
#include "pdb.hpp"
#include "probe.hpp"
#include "runconfig.hpp"
#include "selfcheck.hpp"
#include "toygen.hpp"
#include "trainer.hpp"

namespace fs = std::filesystem;
using namespace siamdiff;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitIntegrity = 5;

// Exclusive-create lock file released on scope exit; a second writer to the
// same output directory fails before touching anything.
class DirLock {
   public:
    explicit DirLock(const fs::path& dir) : path_(dir / ".lock") {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (fs::exists(path_))
            throw ConfigError("output directory is locked by another run: " + path_.string());
        std::ofstream f(path_);
        if (!f) throw DataError("cannot create lock file: " + path_.string());
        f << "locked\n";
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

   private:
    fs::path path_;
};

std::vector<std::string> read_manifest(const std::string& manifest_path) {
    std::ifstream f(manifest_path);
    if (!f) throw DataError("cannot open dataset manifest: " + manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();
    std::vector<std::string> paths;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        fs::path p(line);
        if (p.is_relative()) p = base / p;
        paths.push_back(p.string());
    }
    if (paths.empty()) throw DataError("dataset manifest is empty: " + manifest_path);
    return paths;
}

std::vector<Protein> load_dataset(const std::vector<std::string>& paths, bool strip_h) {
    std::vector<Protein> out;
    out.reserve(paths.size());
    for (const auto& p : paths) {
        if (!fs::exists(p)) throw DataError("dataset file does not exist: " + p);
        Protein prot = load_pdb_file(p, {strip_h});
        for (ResidueType r : prot.sequence)
            if (r == ResidueType::MASK)
                throw DataError("dataset protein contains UNK residues (no ground truth): " + p);
        out.push_back(std::move(prot));
    }
    return out;
}

std::vector<int> parse_t_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    if (out.empty()) throw ConfigError("empty t list");
    return out;
}

std::string format_log_record(const TrainLogRecord& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n", r.epoch, r.batch, r.t,
                  r.stage, r.loss_struct, r.loss_seq, r.loss_total, r.denoise_accuracy);
    return buf;
}

int cmd_pretrain(RunConfig rc) {
    const PretrainConfig cfg = pretrain_config_from(rc);
    const DiffusionSchedule sched = schedule_from(rc);
    const GraphConfig gcfg = graph_config_from(rc, cfg.level);
    const EncoderConfig ecfg = encoder_config_from(rc, gcfg);
    const std::string manifest = rc.get_str("data.manifest", "");
    const bool strip_h = rc.get_bool("data.strip_hydrogens", false);
    const std::string out_dir = rc.get_str("run.out_dir", "out");
    const int checkpoint_every = rc.get_int("pretrain.checkpoint_every", 1);
    rc.check_all_consumed();
    if (manifest.empty()) throw ConfigError("data.manifest is required for pretrain");

    const auto paths = read_manifest(manifest);
    const auto dataset = load_dataset(paths, strip_h);

    DirLock lock(out_dir);
    std::ofstream log(fs::path(out_dir) / "train_log.csv", std::ios::trunc);
    if (!log) throw DataError("cannot open train log for writing");
    log << "epoch,batch,t,stage,loss_struct,loss_seq,loss_total,denoise_accuracy\n";

    Rng init_rng(cfg.seed);
    ModelParams params = init_params(ecfg, init_rng);
    const uint64_t digest = fnv1a64(ecfg.arch_string());

    const auto ckpt_path = [&](const std::string& name) {
        return (fs::path(out_dir) / name).string();
    };

    try {
        const TrainResult result = run_pretraining(
            dataset, cfg, gcfg, ecfg, sched, std::move(params),
            [&](const TrainLogRecord& r) { log << format_log_record(r); },
            [&](int epoch, const ModelParams& snapshot) {
                if (checkpoint_every > 0 && (epoch + 1) % checkpoint_every == 0) {
                    char name[64];
                    std::snprintf(name, sizeof name, "epoch_%04d.ckpt", epoch);
                    save_checkpoint(ckpt_path(name), snapshot, digest);
                }
            });
        save_checkpoint(ckpt_path("model.ckpt"), result.params, digest);
    } catch (const DivergenceError& e) {
        save_checkpoint(ckpt_path("diverged.ckpt"), e.params_at_failure, digest);
        std::cerr << "error: " << e.what() << " (state dumped to diverged.ckpt)\n";
        return kExitNumeric;
    }
    log.flush();
    std::cout << "pretrain: wrote " << (fs::path(out_dir) / "model.ckpt").string() << "\n";
    return 0;
}

int cmd_diffuse(RunConfig rc) {
    const DiffusionSchedule sched = schedule_from(rc);
    const std::string input = rc.get_str("diffuse.input", "");
    const std::string t_list = rc.get_str("diffuse.t_list", "0," + std::to_string(sched.T));
    const bool strip_h = rc.get_bool("data.strip_hydrogens", false);
    const std::string out_dir = rc.get_str("run.out_dir", "out");
    const uint64_t seed = rc.get_u64("run.seed", 0);
    rc.check_all_consumed();
    if (input.empty()) throw ConfigError("diffuse.input is required");
    if (!fs::exists(input)) throw DataError("diffuse input does not exist: " + input);

    const Protein p = load_pdb_file(input, {strip_h});
    DirLock lock(out_dir);
    const Rng root(seed);

    for (int t : parse_t_list(t_list)) {
        char base[64];
        std::snprintf(base, sizeof base, "step_%04d", t);
        const fs::path pdb_path = fs::path(out_dir) / (std::string(base) + ".pdb");
        if (t == 0) {
            std::ofstream f(pdb_path);
            f << write_pdb_subset(p);
            continue;
        }
        sched.check_step(t);
        Rng rng = root.derive(uint64_t(t));
        const NoisyState state = sample_joint_forward(p, t, sched, rng);
        {
            std::ofstream f(pdb_path);
            f << write_pdb_subset(state.protein_t);
        }
        {
            // Full-precision dump: the noise draw plus the exact noised
            // coordinates (the PDB columns round to 1e-3).
            std::ofstream f(fs::path(out_dir) / (std::string(base) + ".eps.csv"));
            f << "atom,eps_x,eps_y,eps_z,x,y,z\n";
            char buf[256];
            for (size_t i = 0; i < state.protein_t.num_atoms(); ++i) {
                std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i,
                              state.eps_coord.at(int64_t(i), 0), state.eps_coord.at(int64_t(i), 1),
                              state.eps_coord.at(int64_t(i), 2), state.protein_t.coords[i].x,
                              state.protein_t.coords[i].y, state.protein_t.coords[i].z);
                f << buf;
            }
        }
        {
            std::ofstream f(fs::path(out_dir) / (std::string(base) + ".seq.txt"));
            for (ResidueType r : state.protein_t.sequence) f << residue_letter(r);
            f << "\n";
        }
    }
    std::cout << "diffuse: wrote trajectory dumps to " << out_dir << "\n";
    return 0;
}

struct TermScores {
    std::vector<std::string> proteins;
    PredictionSet set;
};

TermScores read_fmax_files(const std::string& scores_path, const std::string& truth_path) {
    const auto read_csv = [](const std::string& path) {
        std::ifstream f(path);
        if (!f) throw DataError("cannot open metric fixture: " + path);
        std::vector<std::vector<std::string>> rows;
        std::string line;
        while (std::getline(f, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> cells;
            std::istringstream in(line);
            std::string c;
            while (std::getline(in, c, ',')) cells.push_back(c);
            rows.push_back(cells);
        }
        return rows;
    };
    std::map<std::string, std::map<uint32_t, double>> scores;
    uint32_t max_term = 0;
    for (const auto& row : read_csv(scores_path)) {
        if (row.size() != 3) throw DataError("fmax scores: expected protein,term,score rows");
        const uint32_t term = uint32_t(std::stoul(row[1]));
        scores[row[0]][term] = std::stod(row[2]);
        max_term = std::max(max_term, term);
    }
    std::map<std::string, std::vector<uint32_t>> truth;
    for (const auto& row : read_csv(truth_path)) {
        if (row.size() != 2) throw DataError("fmax truth: expected protein,term rows");
        const uint32_t term = uint32_t(std::stoul(row[1]));
        truth[row[0]].push_back(term);
        max_term = std::max(max_term, term);
    }
    TermScores out;
    out.set.num_terms = int(max_term) + 1;
    for (const auto& [prot, terms] : truth) {
        out.proteins.push_back(prot);
        std::vector<double> s(size_t(out.set.num_terms), 0.0);
        auto it = scores.find(prot);
        if (it != scores.end())
            for (const auto& [term, val] : it->second) s[term] = val;
        out.set.scores.push_back(std::move(s));
        out.set.truth.push_back(terms);
    }
    return out;
}

RankingSet read_spearman_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open ranking fixture: " + path);
    RankingSet out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream in(line);
        std::string g, p, t;
        if (!std::getline(in, g, ',') || !std::getline(in, p, ',') || !std::getline(in, t, ','))
            throw DataError("ranking fixture: expected group,pred,truth rows");
        out.group.push_back(uint32_t(std::stoul(g)));
        out.pred.push_back(std::stod(p));
        out.truth.push_back(std::stod(t));
    }
    return out;
}

int cmd_eval(RunConfig rc) {
    const DiffusionSchedule sched = schedule_from(rc);
    const PretrainConfig pcfg = pretrain_config_from(rc);
    const GraphConfig gcfg = graph_config_from(rc, pcfg.level);
    const EncoderConfig ecfg = encoder_config_from(rc, gcfg);
    const std::string ckpt = rc.get_str("eval.checkpoint", "");
    const std::string manifest = rc.get_str("data.manifest", "");
    const bool strip_h = rc.get_bool("data.strip_hydrogens", false);
    const std::string t_list = rc.get_str("eval.t_list", "1,25,50,75,100");
    const int samples = rc.get_int("eval.probe_samples", 8);
    const std::string fmax_scores = rc.get_str("eval.fmax_scores", "");
    const std::string fmax_truth = rc.get_str("eval.fmax_truth", "");
    const std::string spearman_file = rc.get_str("eval.spearman", "");
    const std::string out_dir = rc.get_str("run.out_dir", "out");
    const uint64_t seed = rc.get_u64("run.seed", 0);
    rc.check_all_consumed();

    DirLock lock(out_dir);
    std::ofstream summary(fs::path(out_dir) / "metrics.txt");

    if (!manifest.empty()) {
        if (ckpt.empty()) throw ConfigError("eval.checkpoint is required with a dataset");
        if (!fs::exists(ckpt)) throw DataError("checkpoint does not exist: " + ckpt);
        const ModelParams params = load_checkpoint_checked(ckpt, fnv1a64(ecfg.arch_string()));
        const auto dataset_raw = load_dataset(read_manifest(manifest), strip_h);
        std::vector<Protein> dataset;
        for (const auto& p : dataset_raw) {
            Protein q = truncate_protein(p, size_t(pcfg.max_residues));
            dataset.push_back(pcfg.level == GraphLevel::residue ? reduce_to_ca(q) : std::move(q));
        }
        const auto rows = denoising_probe(params, dataset, sched, parse_t_list(t_list), gcfg,
                                          ecfg, pcfg.loss, samples, seed);
        const std::string csv = probe_table_csv(rows);
        std::ofstream f(fs::path(out_dir) / "probe.csv");
        f << csv;
        std::cout << csv;
        summary << csv;
    }

    if (!fmax_scores.empty() || !fmax_truth.empty()) {
        if (fmax_scores.empty() || fmax_truth.empty())
            throw ConfigError("eval.fmax_scores and eval.fmax_truth must be given together");
        const TermScores ts = read_fmax_files(fmax_scores, fmax_truth);
        const double value = fmax(ts.set, default_threshold_grid());
        char buf[64];
        std::snprintf(buf, sizeof buf, "F_max = %.6f\n", value);
        std::cout << buf;
        summary << buf;
    }

    if (!spearman_file.empty()) {
        const RankingSet rs = read_spearman_file(spearman_file);
        char buf[96];
        std::snprintf(buf, sizeof buf, "global_spearman = %.6f\n", spearman_global(rs));
        std::cout << buf;
        summary << buf;
        std::snprintf(buf, sizeof buf, "mean_spearman = %.6f\n", spearman_mean(rs));
        std::cout << buf;
        summary << buf;
    }
    return 0;
}

int cmd_ingest(RunConfig rc) {
    const std::string input = rc.get_str("ingest.input", "");
    const std::string output = rc.get_str("ingest.output", "graph.ckpt");
    const std::string level_s = rc.get_str("ingest.level", "atom");
    const bool strip_h = rc.get_bool("data.strip_hydrogens", false);
    if (input.empty()) throw ConfigError("ingest.input is required");
    const GraphLevel level = [&] {
        if (level_s == "atom") return GraphLevel::atom;
        if (level_s == "residue") return GraphLevel::residue;
        throw ConfigError("ingest.level must be atom or residue, got " + level_s);
    }();
    const GraphConfig gcfg = graph_config_from(rc, level);
    rc.check_all_consumed();
    if (!fs::exists(input)) throw DataError("ingest input does not exist: " + input);

    Protein p = load_pdb_file(input, {strip_h});
    if (level == GraphLevel::residue) p = reduce_to_ca(p);
    const ProteinGraph g = build_graph(p, gcfg);
    save_checkpoint(output, graph_to_tensors(g), fnv1a64("graph-container-v1"));
    std::printf("ingest: %u nodes, %zu edges, %zu line-graph edges -> %s\n", g.num_nodes,
                g.num_edges(), g.line_graph_edges.size(), output.c_str());
    return 0;
}

int cmd_selfcheck(const std::string& tmp_dir) {
    std::error_code ec;
    fs::create_directories(tmp_dir, ec);
    const auto results = run_all_checks(tmp_dir);
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] %-45s max_err=%-12.3g %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.max_err, r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    std::printf("%zu checks, %s\n", results.size(), all_pass ? "all passed" : "FAILURES present");
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint sequence-structure diffusion pre-training for protein encoders"};
    app.require_subcommand(1);

    std::string config_path, out_dir, mode, level, seq_red, t_list, input_path;
    std::string tmp_dir = "/tmp/siamdiff_selfcheck";
    int epochs = -1;
    long long seed = -1;
    bool paper_scale = false, tied_noise = false, strip_h = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file");
        sub->add_option("--out", out_dir, "output directory (overrides run.out_dir)");
        sub->add_option("--seed", seed, "rng seed (overrides run.seed)");
    };

    CLI::App* pre = app.add_subcommand("pretrain", "run diffusion pre-training");
    add_common(pre);
    pre->add_option("--mode", mode, "diffpret | siamdiff");
    pre->add_option("--level", level, "atom | residue");
    pre->add_option("--epochs", epochs, "number of epochs");
    pre->add_flag("--paper-scale", paper_scale, "6 layers / full hidden width preset");
    pre->add_option("--seq-loss-reduction", seq_red, "mean | sum");
    pre->add_flag("--tied-noise", tied_noise, "share coordinate noise across trajectories");
    pre->add_flag("--strip-hydrogens", strip_h, "drop hydrogen atoms at parse time");

    CLI::App* dif = app.add_subcommand("diffuse", "dump forward-diffusion trajectories");
    add_common(dif);
    dif->add_option("--input", input_path, "input protein file");
    dif->add_option("--t", t_list, "comma-separated diffusion steps");
    dif->add_flag("--strip-hydrogens", strip_h, "drop hydrogen atoms at parse time");

    CLI::App* ev = app.add_subcommand("eval", "denoising probe and metric fixtures");
    add_common(ev);
    ev->add_option("--checkpoint", input_path, "checkpoint to evaluate");
    ev->add_option("--t", t_list, "comma-separated probe steps");

    std::string ingest_level, ingest_out;
    CLI::App* ing = app.add_subcommand("ingest", "build a graph and write the flat container");
    add_common(ing);
    ing->add_option("--input", input_path, "input protein file");
    ing->add_option("--level", ingest_level, "atom | residue");
    ing->add_option("--output", ingest_out, "container file to write");
    ing->add_flag("--strip-hydrogens", strip_h, "drop hydrogen atoms at parse time");

    CLI::App* self = app.add_subcommand("selfcheck", "run the invariant suite");
    self->add_option("--tmp", tmp_dir, "scratch directory");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig rc = config_path.empty() ? RunConfig::parse("") : RunConfig::load(config_path);
        if (!out_dir.empty()) rc.set("run.out_dir", out_dir);
        if (seed >= 0) rc.set("run.seed", std::to_string(seed));
        if (!mode.empty()) rc.set("pretrain.mode", mode);
        if (!level.empty()) rc.set("pretrain.level", level);
        if (epochs >= 0) rc.set("pretrain.epochs", std::to_string(epochs));
        if (paper_scale) rc.set("encoder.paper_scale", "true");
        if (!seq_red.empty()) rc.set("pretrain.seq_loss_reduction", seq_red);
        if (tied_noise) rc.set("pretrain.tied_noise", "true");
        if (strip_h) rc.set("data.strip_hydrogens", "true");

        if (pre->parsed()) return cmd_pretrain(std::move(rc));
        if (dif->parsed()) {
            if (!input_path.empty()) rc.set("diffuse.input", input_path);
            if (!t_list.empty()) rc.set("diffuse.t_list", t_list);
            return cmd_diffuse(std::move(rc));
        }
        if (ev->parsed()) {
            if (!input_path.empty()) rc.set("eval.checkpoint", input_path);
            if (!t_list.empty()) rc.set("eval.t_list", t_list);
            return cmd_eval(std::move(rc));
        }
        if (ing->parsed()) {
            if (!input_path.empty()) rc.set("ingest.input", input_path);
            if (!ingest_level.empty()) rc.set("ingest.level", ingest_level);
            if (!ingest_out.empty()) rc.set("ingest.output", ingest_out);
            return cmd_ingest(std::move(rc));
        }
        if (self->parsed()) return cmd_selfcheck(tmp_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const DivergenceError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
