#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qimpc/config.hpp"
#include "qimpc/control.hpp"

namespace qimpc {

struct RunSummary {
    std::string experiment;
    std::uint64_t seed = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double reduction = 0.0;  // (initial - final) / initial
    std::int64_t steps = 0;
    double wall_ms = 0.0;
    bool converged = false;
    std::int64_t bound_violations = 0;  // must be 0
    bool ok = true;
    std::string error;
};

struct ExperimentOutput {
    std::vector<TrajectoryLog> logs;       // one per seed, seed order
    std::vector<RunSummary> summaries;
};

/// Runs one log per seed (seeds execute concurrently); a failing seed yields
/// an error summary without disturbing its siblings.
ExperimentOutput run_experiment(const ExperimentConfig& cfg,
                                bool baseline = false);

nlohmann::json summary_to_json(const RunSummary& s);

/// Per-seed CSVs, an aggregate summary JSON, and the three SVG plots, all
/// written atomically under `out_dir`.
void write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out,
                   const std::filesystem::path& out_dir);

/// cfg.out_dir if set, else $QIMPC_OUT_ROOT (default "out") / experiment.
std::filesystem::path resolve_out_dir(const ExperimentConfig& cfg);

}  // namespace qimpc
