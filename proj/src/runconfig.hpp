// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "graph.hpp"
#include "schedule.hpp"
#include "trainer.hpp"

namespace siamdiff {

// Line-oriented `key = value` document with [section] headers and '#'
// comments. Keys are addressed as "section.key". Every key must be consumed
// by a typed getter; leftovers are rejected (unknown-key errors).
class RunConfig {
   public:
    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Overrides (CLI flags) replace file values.
    void set(const std::string& key, const std::string& value);

    // Throws ConfigError listing any key no getter asked for.
    void check_all_consumed() const;

   private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

GraphConfig graph_config_from(const RunConfig& rc, GraphLevel level);
DiffusionSchedule schedule_from(const RunConfig& rc);
PretrainConfig pretrain_config_from(const RunConfig& rc);
// Encoder hyperparameters; honors encoder.paper_scale.
EncoderConfig encoder_config_from(const RunConfig& rc, const GraphConfig& gcfg);

std::vector<StageSpan> parse_stage_schedule(const std::string& text);

}  // namespace siamdiff
