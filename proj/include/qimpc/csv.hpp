#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qimpc/control.hpp"

namespace qimpc {

/// Writes `step,x_0..x_{s-1},u_raw_0..,u_clip_0..,loss,lr,grad_norm`, one row
/// per executed step, floats with 17 significant digits, '\n' newlines. The
/// file is written to a temporary sibling and renamed into place, so an
/// interrupted run never leaves a partial file at the final path.
void write_csv(const TrajectoryLog& log, const std::filesystem::path& path);

struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvFile read_csv(const std::filesystem::path& path);

/// Rebuilds a log (states/controls/loss columns) from a CSV produced by
/// write_csv; used by the standalone plotting path.
TrajectoryLog log_from_csv(const CsvFile& csv);

}  // namespace qimpc
