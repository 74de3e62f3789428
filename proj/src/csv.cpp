#include "qimpc/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qimpc {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void io_fail(const std::filesystem::path& path,
                          const std::string& cause) {
    throw std::runtime_error("csv: " + path.string() + ": " + cause);
}

}  // namespace

void write_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "step";
    for (int i = 0; i < log.state_dim; ++i) out << ",x_" << i;
    for (int i = 0; i < log.control_dim; ++i) out << ",u_raw_" << i;
    for (int i = 0; i < log.control_dim; ++i) out << ",u_clip_" << i;
    out << ",loss,lr,grad_norm\n";
    for (std::size_t k = 0; k < log.steps.size(); ++k) {
        const TrajectoryStep& rec = log.steps[k];
        out << k;
        for (double v : rec.x) out << ',' << fmt17(v);
        for (double v : rec.u_raw) out << ',' << fmt17(v);
        for (double v : rec.u_clip) out << ',' << fmt17(v);
        out << ',' << fmt17(rec.loss) << ',' << fmt17(rec.lr) << ','
            << fmt17(rec.grad_norm) << '\n';
    }

    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) io_fail(tmp, "cannot open for writing");
        f << out.str();
        if (!f.good()) io_fail(tmp, "write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) io_fail(path, "rename failed: " + ec.message());
}

CsvFile read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open for reading");
    CsvFile out;
    std::string line;
    if (!std::getline(in, line)) io_fail(path, "missing header");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(out.header.size());
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (row.size() != out.header.size()) {
            io_fail(path, "row width does not match header");
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

TrajectoryLog log_from_csv(const CsvFile& csv) {
    TrajectoryLog log;
    int s = 0, m = 0;
    for (const std::string& h : csv.header) {
        if (h.rfind("x_", 0) == 0) ++s;
        if (h.rfind("u_clip_", 0) == 0) ++m;
    }
    log.state_dim = s;
    log.control_dim = m;
    const std::size_t expected = 1 + static_cast<std::size_t>(s + 2 * m) + 3;
    if (csv.header.size() != expected) {
        throw std::invalid_argument("csv: unexpected column layout");
    }
    for (const auto& row : csv.rows) {
        TrajectoryStep rec;
        std::size_t c = 1;
        rec.x.assign(row.begin() + c, row.begin() + c + s);
        c += s;
        rec.u_raw.assign(row.begin() + c, row.begin() + c + m);
        c += m;
        rec.u_clip.assign(row.begin() + c, row.begin() + c + m);
        c += m;
        rec.loss = row[c++];
        rec.lr = row[c++];
        rec.grad_norm = row[c++];
        log.steps.push_back(std::move(rec));
    }
    return log;
}

}  // namespace qimpc
