// SPDX-License-Identifier: Apache-2.0
#include "runconfig.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace siamdiff {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(uint8_t(s[a]))) ++a;
    while (b > a && std::isspace(uint8_t(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig rc;
    std::istringstream in(text);
    std::string line, section;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(line_no) + ": empty section");
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any [section]");
        const std::string full = section + "." + key;
        if (rc.values_.count(full))
            throw ConfigError("config: duplicate key '" + full + "'");
        rc.values_[full] = value;
    }
    return rc;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string RunConfig::get_str(const std::string& key, const std::string& fallback) const {
    consumed_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    consumed_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a number: " + it->second);
    }
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, double(fallback));
    const int i = int(v);
    if (double(i) != v) throw ConfigError("config: key '" + key + "' is not an integer");
    return i;
}

uint64_t RunConfig::get_u64(const std::string& key, uint64_t fallback) const {
    consumed_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoull(it->second);
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not an unsigned integer");
    }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    consumed_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: key '" + key + "' is not a boolean: " + v);
}

void RunConfig::set(const std::string& key, const std::string& value) { values_[key] = value; }

void RunConfig::check_all_consumed() const {
    std::string unknown;
    for (const auto& [k, _] : values_) {
        if (!consumed_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
    }
    if (!unknown.empty()) throw ConfigError("config: unknown keys: " + unknown);
}

GraphConfig graph_config_from(const RunConfig& rc, GraphLevel level) {
    GraphConfig g;
    g.level = level;
    g.atom_radius = rc.get_double("graph.atom_radius", g.atom_radius);
    g.seq_dist_threshold = rc.get_int("graph.seq_dist_threshold", g.seq_dist_threshold);
    g.residue_radius = rc.get_double("graph.residue_radius", g.residue_radius);
    g.knn_k = rc.get_int("graph.knn_k", g.knn_k);
    g.long_range_cutoff = rc.get_int("graph.long_range_cutoff", g.long_range_cutoff);
    g.angle_bins = rc.get_int("graph.angle_bins", g.angle_bins);
    g.validate();
    return g;
}

DiffusionSchedule schedule_from(const RunConfig& rc) {
    const int T = rc.get_int("schedule.steps", 100);
    return make_schedule(T, rc.get_double("schedule.beta_min", 1e-4),
                         rc.get_double("schedule.beta_max", 0.1),
                         rc.get_double("schedule.mask_min", 0.15),
                         rc.get_double("schedule.mask_max", 1.0));
}

std::vector<StageSpan> parse_stage_schedule(const std::string& text) {
    // "1:0-159,2:160-199" with inclusive epoch ranges.
    std::vector<StageSpan> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const size_t colon = item.find(':');
        const size_t dash = item.find('-', colon == std::string::npos ? 0 : colon);
        if (colon == std::string::npos || dash == std::string::npos)
            throw ConfigError("stage_schedule: expected 'stage:first-last', got '" + item + "'");
        try {
            StageSpan span;
            span.stage = std::stoi(item.substr(0, colon));
            span.epoch_begin = std::stoi(item.substr(colon + 1, dash - colon - 1));
            span.epoch_end = std::stoi(item.substr(dash + 1)) + 1;
            out.push_back(span);
        } catch (const std::exception&) {
            throw ConfigError("stage_schedule: malformed item '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("stage_schedule: empty");
    return out;
}

PretrainConfig pretrain_config_from(const RunConfig& rc) {
    PretrainConfig c;
    const std::string mode = rc.get_str("pretrain.mode", "siamdiff");
    if (mode == "diffpret")
        c.mode = PretrainMode::diffpret;
    else if (mode == "siamdiff")
        c.mode = PretrainMode::siamdiff;
    else
        throw ConfigError("pretrain.mode must be diffpret or siamdiff, got " + mode);

    const std::string level = rc.get_str("pretrain.level", "atom");
    if (level == "atom")
        c.level = GraphLevel::atom;
    else if (level == "residue")
        c.level = GraphLevel::residue;
    else
        throw ConfigError("pretrain.level must be atom or residue, got " + level);

    c.T = rc.get_int("schedule.steps", 100);
    c.stage_boundary = rc.get_int("pretrain.stage_boundary", 10);
    const std::string stages = rc.get_str("pretrain.stage_schedule", "");
    if (!stages.empty()) c.stage_schedule = parse_stage_schedule(stages);
    c.conformer.torsion_sigma = rc.get_double("pretrain.torsion_sigma", c.conformer.torsion_sigma);
    c.conformer.residue_gauss_sigma =
        rc.get_double("pretrain.residue_gauss_sigma", c.conformer.residue_gauss_sigma);
    c.conformer.clash_min_dist =
        rc.get_double("pretrain.clash_min_dist", c.conformer.clash_min_dist);
    c.conformer.clash_max_retries =
        rc.get_int("pretrain.clash_max_retries", c.conformer.clash_max_retries);
    c.learning_rate = rc.get_double("pretrain.learning_rate", 1e-4);
    c.epochs = rc.get_int("pretrain.epochs", 1);
    c.batch_size = rc.get_int("pretrain.batch_size", 2);
    c.max_residues = rc.get_int("data.max_residues", 150);
    c.seed = rc.get_u64("run.seed", 0);

    const std::string opt = rc.get_str("pretrain.optimizer", "adam");
    if (opt == "adam")
        c.optimizer = OptimizerKind::adam;
    else if (opt == "sgd")
        c.optimizer = OptimizerKind::sgd;
    else
        throw ConfigError("pretrain.optimizer must be adam or sgd, got " + opt);

    const auto reduction = [](const std::string& v, const char* key) {
        if (v == "mean") return Reduction::mean;
        if (v == "sum") return Reduction::sum;
        throw ConfigError(std::string(key) + " must be mean or sum, got " + v);
    };
    c.loss.seq_reduction =
        reduction(rc.get_str("pretrain.seq_loss_reduction", "mean"), "pretrain.seq_loss_reduction");
    c.loss.struct_reduction = reduction(rc.get_str("pretrain.struct_loss_reduction", "mean"),
                                        "pretrain.struct_loss_reduction");
    c.loss.structure_diffusion = rc.get_bool("pretrain.structure_diffusion", true);
    c.tied_noise = rc.get_bool("pretrain.tied_noise", false);
    c.validate();
    return c;
}

EncoderConfig encoder_config_from(const RunConfig& rc, const GraphConfig& gcfg) {
    if (rc.get_bool("encoder.paper_scale", false)) return EncoderConfig::paper_scale(gcfg);
    return EncoderConfig::make(gcfg, rc.get_int("encoder.layers", 3),
                               rc.get_int("encoder.hidden", 64),
                               rc.get_bool("encoder.edge_mp", true));
}

}  // namespace siamdiff
