#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qimpc/circuits.hpp"
#include "qimpc/control.hpp"
#include "qimpc/losses.hpp"
#include "qimpc/optimizer.hpp"
#include "qimpc/plants.hpp"

namespace qimpc {

/// Everything a reproducible experiment run needs. Round-trips losslessly
/// through JSON; unknown keys are rejected on load.
struct ExperimentConfig {
    std::string experiment = "custom";
    Plant plant;
    QuantumPolicy policy;
    LossSpec loss;
    MpcConfig mpc;  // mpc.seed is unused here; per-run seeds come from `seeds`
    SgdConfig optimizer;
    std::vector<double> x0;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    std::string out_dir;  // empty -> <output root>/<experiment>
    bool loss_log_scale = false;
};

std::vector<std::string> preset_names();
bool is_preset_name(const std::string& name);
/// One of the five built-in experiment presets; throws on unknown name.
ExperimentConfig preset(const std::string& name);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Strict parse: unknown keys anywhere raise std::invalid_argument naming the
/// offending key. A top-level "experiment" naming a preset fills defaults; any
/// other present section overrides field by field.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Cross-field validation (dimensions, bounds, weights).
void validate_config(const ExperimentConfig& cfg);

/// Accepts a preset name, a path, or a path missing its ".json" suffix.
ExperimentConfig load_config(const std::string& path_or_name);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace qimpc
