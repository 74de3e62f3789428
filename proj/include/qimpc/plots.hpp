#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qimpc/control.hpp"

namespace qimpc {

struct PlotOptions {
    bool loss_log_scale = false;
};

/// Writes three self-contained SVG files per experiment — controls, states,
/// loss — with a mean line per series and a shaded +-1 standard deviation band
/// across seeds when more than one log is given. The plotted data is embedded
/// as an XML comment so the files diff cleanly. Deterministic for fixed input.
void emit_plots(const std::vector<TrajectoryLog>& logs,
                const std::filesystem::path& out_dir,
                const std::string& experiment, const PlotOptions& opts = {});

}  // namespace qimpc
