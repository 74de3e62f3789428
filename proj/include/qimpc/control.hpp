#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qimpc/circuits.hpp"
#include "qimpc/losses.hpp"
#include "qimpc/optimizer.hpp"
#include "qimpc/plants.hpp"

namespace qimpc {

/// Componentwise max(u_min, min(u, u_max)); idempotent.
std::vector<double> clip_controls(std::span<const double> u,
                                  std::span<const double> u_min,
                                  std::span<const double> u_max);

struct MpcConfig {
    enum class Mode {
        Online,     // one plant step + one parameter update per iteration;
                    // horizon counts outer episodes of total_steps each
        Lookahead,  // roll out `horizon` steps per iteration, sum the stage
                    // losses, update once, apply only the first control
    };

    std::int64_t total_steps = 50;  // T, iterations per episode
    std::int64_t horizon = 1;       // N
    Mode mode = Mode::Online;
    std::vector<double> u_min;
    std::vector<double> u_max;
    std::optional<double> epsilon;      // convergence radius, off by default
    std::optional<std::int64_t> shots;  // exact expectations when unset
    std::uint64_t seed = 0;
};

void validate_mpc(const MpcConfig& mpc, int control_dim);

struct TrajectoryStep {
    std::vector<double> x;       // state before the step
    std::vector<double> u_raw;   // physical control before clipping
    std::vector<double> u_clip;  // applied control, within bounds
    double loss = 0.0;
    double lr = 0.0;  // learning rate used for this step's update
    double grad_norm = 0.0;
};

struct TrajectoryLog {
    int state_dim = 0;
    int control_dim = 0;
    std::vector<TrajectoryStep> steps;
    std::vector<double> final_theta;  // final control vector for baselines
    bool ok = true;
    bool converged = false;
    std::string error;
};

/// The online hybrid loop: encode state, apply the ansatz, measure controls,
/// clip, step the plant, score the stage loss on the successor state, update
/// the parameters, repeat. Ends early when epsilon is set and
/// ||x - x_target|| < epsilon. Fully reproducible from mpc.seed. Plant
/// singularities and non-finite losses abort with a partial log and cause.
TrajectoryLog run_qimpc(const Plant& plant, const QuantumPolicy& policy,
                        const LossSpec& loss, std::span<const double> x0,
                        const MpcConfig& mpc, const SgdConfig& opt);

/// Same loop, controls produced by projected gradient descent directly on the
/// control vector (no circuit); the comparison baseline.
TrajectoryLog run_classical_baseline(const Plant& plant, const LossSpec& loss,
                                     std::span<const double> x0,
                                     const MpcConfig& mpc, const SgdConfig& opt);

}  // namespace qimpc
