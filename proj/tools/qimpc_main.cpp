// qimpc command-line runner: reproducible experiment runs, preset listing,
// gradient diagnostics, plotting, and the classical comparison baseline.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qimpc/config.hpp"
#include "qimpc/csv.hpp"
#include "qimpc/gradients.hpp"
#include "qimpc/kernels.hpp"
#include "qimpc/plots.hpp"
#include "qimpc/rng_util.hpp"
#include "qimpc/runner.hpp"

namespace {

using namespace qimpc;

int run_command(const std::string& config_arg, const std::string& out_override,
                const std::vector<std::uint64_t>& seed_override, bool baseline) {
    ExperimentConfig cfg = load_config(config_arg);
    if (!seed_override.empty()) cfg.seeds = seed_override;
    if (!out_override.empty()) cfg.out_dir = out_override;
    const auto out_dir = resolve_out_dir(cfg);

    const ExperimentOutput out = run_experiment(cfg, baseline);
    write_outputs(cfg, out, out_dir);

    bool all_ok = true;
    for (const auto& s : out.summaries) {
        if (s.ok) {
            std::printf("%s seed=%llu loss %.6g -> %.6g (%.1f%%) steps=%lld%s\n",
                        s.experiment.c_str(),
                        static_cast<unsigned long long>(s.seed), s.initial_loss,
                        s.final_loss, 100.0 * s.reduction,
                        static_cast<long long>(s.steps),
                        s.converged ? " converged" : "");
        } else {
            std::printf("%s seed=%llu FAILED after %lld steps: %s\n",
                        s.experiment.c_str(),
                        static_cast<unsigned long long>(s.seed),
                        static_cast<long long>(s.steps), s.error.c_str());
            all_ok = false;
        }
    }
    std::printf("outputs written to %s\n", out_dir.string().c_str());
    return all_ok ? 0 : 1;
}

int list_command() {
    for (const auto& name : preset_names()) {
        const ExperimentConfig cfg = preset(name);
        std::printf("%-16s qubits=%d layers=%d steps=%lld state_dim=%d "
                    "control_dim=%d\n",
                    name.c_str(), cfg.policy.ansatz.n_qubits,
                    cfg.policy.ansatz.n_layers,
                    static_cast<long long>(cfg.mpc.total_steps),
                    cfg.plant.state_dim(), cfg.plant.control_dim());
        std::printf("  bounds:");
        for (std::size_t i = 0; i < cfg.mpc.u_min.size(); ++i) {
            std::printf(" [%g, %g]", cfg.mpc.u_min[i], cfg.mpc.u_max[i]);
        }
        std::printf("\n  optimizer: lr %g (min %g, decay %g), momentum %g, "
                    "grad clip %g\n",
                    cfg.optimizer.lr_init, cfg.optimizer.lr_min,
                    cfg.optimizer.lr_decay, cfg.optimizer.momentum,
                    cfg.optimizer.grad_clip);
        std::printf("  loss weights:");
        if (cfg.loss.weights.empty()) std::printf(" (none)");
        for (double w : cfg.loss.weights) std::printf(" %g", w);
        std::printf("\n");
    }
    std::printf("kernels:");
    for (const auto& k : kernels::available()) std::printf(" %s", k.c_str());
    std::printf(" (active: %s)\n", kernels::active().name);
    return 0;
}

int grad_check_command(int qubits, int trials) {
    if (qubits < 1 || qubits > 8) {
        std::fprintf(stderr, "grad-check: qubits must be in [1, 8]\n");
        return 2;
    }
    std::mt19937_64 rng(0xc0ffee);
    const auto uniform = [&](double a, double b) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return a + (b - a) * u;
    };
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(qubits));
        QuantumPolicy policy;
        policy.ansatz = {n, 2,
                         (rng() & 1) ? Entanglement::Ring : Entanglement::Linear,
                         RotOrder::ZYZ};
        const int features = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        for (int i = 0; i < features; ++i) {
            policy.encoder.feature_wires.push_back(i);
        }
        policy.encoder.kind = EncoderKind::RotationTriple;
        const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        for (int i = 0; i < m; ++i) {
            policy.head.readout_wires.push_back(i);
            policy.head.gains.push_back(1.0);
            policy.head.offsets.push_back(0.0);
        }
        ParamTensor theta = random_params(policy.ansatz, rng(), std::numbers::pi);
        std::vector<double> x(features);
        for (double& v : x) v = uniform(-1.0, 1.0);

        const std::vector<double> ps =
            parameter_shift_jacobian(policy, theta, x);
        const double h = 1e-5;
        const std::size_t p_count = theta.size();
        for (std::size_t p = 0; p < p_count; ++p) {
            ParamTensor tp = theta;
            tp.values[p] += h;
            const auto up = evaluate_controls(policy, tp, x).raw;
            tp.values[p] -= 2.0 * h;
            const auto um = evaluate_controls(policy, tp, x).raw;
            for (std::size_t i = 0; i < up.size(); ++i) {
                const double fd = (up[i] - um[i]) / (2.0 * h);
                const double err =
                    std::abs(ps[i * p_count + p] - fd) / (1.0 + std::abs(fd));
                worst = std::max(worst, err);
            }
        }
    }
    const bool pass = worst < 1e-6;
    std::printf("grad-check: %d trials, up to %d qubits, max relative error "
                "%.3e -> %s\n",
                trials, qubits, worst, pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

int plot_command(const std::string& in_dir, bool log_loss) {
    namespace fs = std::filesystem;
    std::map<std::string, std::vector<fs::path>> groups;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        const std::string name = entry.path().filename().string();
        const auto pos = name.rfind("_seed");
        if (entry.path().extension() == ".csv" && pos != std::string::npos) {
            groups[name.substr(0, pos)].push_back(entry.path());
        }
    }
    if (groups.empty()) {
        std::fprintf(stderr, "plot: no *_seed*.csv files in %s\n",
                     in_dir.c_str());
        return 1;
    }
    for (auto& [experiment, paths] : groups) {
        std::sort(paths.begin(), paths.end());
        std::vector<TrajectoryLog> logs;
        for (const auto& p : paths) logs.push_back(log_from_csv(read_csv(p)));
        emit_plots(logs, in_dir, experiment, PlotOptions{log_loss});
        std::printf("plotted %s (%zu seeds)\n", experiment.c_str(), logs.size());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qimpc — variational-circuit receding-horizon control runner"};
    app.require_subcommand(1);

    std::string config_arg, out_override, in_dir;
    std::vector<std::uint64_t> seed_override;
    int qubits = 4, trials = 100;
    bool log_loss = false;

    auto* run = app.add_subcommand("run", "run an experiment config or preset");
    run->add_option("--config", config_arg, "preset name or config path")
        ->required();
    run->add_option("--out", out_override, "output directory");
    run->add_option("--seeds", seed_override, "seed list")->delimiter(',');

    app.add_subcommand("list", "print presets and their parameters");

    auto* gc = app.add_subcommand(
        "grad-check", "parameter-shift vs finite-difference report");
    gc->add_option("--qubits", qubits, "max register size");
    gc->add_option("--trials", trials, "random instances");

    auto* plot = app.add_subcommand("plot", "re-plot CSV logs in a directory");
    plot->add_option("--in", in_dir, "directory with *_seed*.csv files")
        ->required();
    plot->add_flag("--log-loss", log_loss, "logarithmic loss axis");

    auto* baseline = app.add_subcommand(
        "baseline", "classical gradient-descent comparison run");
    baseline->add_option("--config", config_arg, "preset name or config path")
        ->required();
    baseline->add_option("--out", out_override, "output directory");
    baseline->add_option("--seeds", seed_override, "seed list")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        if (app.got_subcommand("run")) {
            return run_command(config_arg, out_override, seed_override, false);
        }
        if (app.got_subcommand("baseline")) {
            return run_command(config_arg, out_override, seed_override, true);
        }
        if (app.got_subcommand("list")) return list_command();
        if (app.got_subcommand("grad-check")) {
            return grad_check_command(qubits, trials);
        }
        if (app.got_subcommand("plot")) return plot_command(in_dir, log_loss);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 2;
}
