#include "qimpc/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>

#include "qimpc/csv.hpp"
#include "qimpc/plots.hpp"

namespace qimpc {

namespace {

std::int64_t count_bound_violations(const TrajectoryLog& log,
                                    const MpcConfig& mpc) {
    std::int64_t n = 0;
    for (const auto& rec : log.steps) {
        for (std::size_t i = 0; i < rec.u_clip.size(); ++i) {
            if (rec.u_clip[i] < mpc.u_min[i] || rec.u_clip[i] > mpc.u_max[i]) {
                ++n;
            }
        }
    }
    return n;
}

RunSummary summarize(const ExperimentConfig& cfg, std::uint64_t seed,
                     const TrajectoryLog& log, double wall_ms) {
    RunSummary s;
    s.experiment = cfg.experiment;
    s.seed = seed;
    s.steps = static_cast<std::int64_t>(log.steps.size());
    if (!log.steps.empty()) {
        s.initial_loss = log.steps.front().loss;
        s.final_loss = log.steps.back().loss;
        s.reduction = s.initial_loss != 0.0
                          ? (s.initial_loss - s.final_loss) / s.initial_loss
                          : 0.0;
    }
    s.wall_ms = wall_ms;
    s.converged = log.converged;
    s.bound_violations = count_bound_violations(log, cfg.mpc);
    s.ok = log.ok;
    s.error = log.error;
    return s;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg, bool baseline) {
    validate_config(cfg);
    const auto run_one = [&](std::uint64_t seed) {
        MpcConfig mpc = cfg.mpc;
        mpc.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        TrajectoryLog log =
            baseline ? run_classical_baseline(cfg.plant, cfg.loss, cfg.x0, mpc,
                                              cfg.optimizer)
                     : run_qimpc(cfg.plant, cfg.policy, cfg.loss, cfg.x0, mpc,
                                 cfg.optimizer);
        const auto t1 = std::chrono::steady_clock::now();
        const double wall_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        return std::pair<TrajectoryLog, double>(std::move(log), wall_ms);
    };

    std::vector<std::future<std::pair<TrajectoryLog, double>>> futures;
    futures.reserve(cfg.seeds.size());
    for (std::uint64_t seed : cfg.seeds) {
        futures.push_back(std::async(std::launch::async, run_one, seed));
    }
    ExperimentOutput out;
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        auto [log, wall_ms] = futures[i].get();
        out.summaries.push_back(summarize(cfg, cfg.seeds[i], log, wall_ms));
        out.logs.push_back(std::move(log));
    }
    return out;
}

nlohmann::json summary_to_json(const RunSummary& s) {
    nlohmann::json j{
        {"experiment", s.experiment},
        {"seed", s.seed},
        {"initial_loss", s.initial_loss},
        {"final_loss", s.final_loss},
        {"reduction", s.reduction},
        {"steps", s.steps},
        {"wall_ms", s.wall_ms},
        {"converged", s.converged},
        {"bound_violations", s.bound_violations},
    };
    if (!s.ok) j["error"] = s.error;
    return j;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out,
                   const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < out.logs.size(); ++i) {
        const auto name =
            cfg.experiment + "_seed" + std::to_string(cfg.seeds[i]) + ".csv";
        write_csv(out.logs[i], out_dir / name);
    }
    nlohmann::json agg = nlohmann::json::array();
    for (const auto& s : out.summaries) agg.push_back(summary_to_json(s));
    {
        const auto path = out_dir / (cfg.experiment + "_summary.json");
        const std::filesystem::path tmp = path.string() + ".tmp";
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        f << agg.dump(2) << '\n';
        f.close();
        std::filesystem::rename(tmp, path);
    }
    bool any_steps = false;
    for (const auto& l : out.logs) any_steps |= !l.steps.empty();
    if (any_steps) {
        emit_plots(out.logs, out_dir, cfg.experiment,
                   PlotOptions{cfg.loss_log_scale});
    }
}

std::filesystem::path resolve_out_dir(const ExperimentConfig& cfg) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    const char* root = std::getenv("QIMPC_OUT_ROOT");
    return std::filesystem::path(root ? root : "out") / cfg.experiment;
}

}  // namespace qimpc
