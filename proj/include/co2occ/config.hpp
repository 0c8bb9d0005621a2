#pragma once

#include <string>

#include "co2occ/eval.hpp"

namespace co2occ {

/// Every pipeline knob in one place, loadable from a key = value file.
struct PipelineConfig {
    std::int64_t interval = 300;
    Eigen::Index max_gap = 12;
    std::uint64_t seed = 0;
    EvalConfig eval; ///< carries TrainConfig and SvrParams
};

/// Parse `key = value` lines ('#' comments) onto the given defaults.
PipelineConfig load_config(const std::string& path, PipelineConfig defaults = {});

/// Apply one key = value assignment; shared with CLI overrides.
void apply_config_entry(PipelineConfig& config, const std::string& key,
                        const std::string& value);

} // namespace co2occ
