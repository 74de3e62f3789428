#include "qimpc/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qimpc/gradients.hpp"
#include "qimpc/rng_util.hpp"

namespace qimpc {

std::vector<double> clip_controls(std::span<const double> u,
                                  std::span<const double> u_min,
                                  std::span<const double> u_max) {
    if (u.size() != u_min.size() || u.size() != u_max.size()) {
        throw std::invalid_argument("clip_controls: dimension mismatch");
    }
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out[i] = std::max(u_min[i], std::min(u[i], u_max[i]));
    }
    return out;
}

void validate_mpc(const MpcConfig& mpc, int control_dim) {
    const auto m = static_cast<std::size_t>(control_dim);
    if (mpc.u_min.size() != m || mpc.u_max.size() != m) {
        throw std::invalid_argument("mpc: bounds dimension mismatch");
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!(mpc.u_min[i] < mpc.u_max[i])) {
            throw std::invalid_argument("mpc: u_min must be < u_max per dimension");
        }
    }
    if (mpc.total_steps < 1) throw std::invalid_argument("mpc: T must be >= 1");
    if (mpc.horizon < 1) throw std::invalid_argument("mpc: horizon must be >= 1");
    if (mpc.epsilon && !(*mpc.epsilon > 0.0)) {
        throw std::invalid_argument("mpc: epsilon must be > 0 when present");
    }
    if (mpc.shots && *mpc.shots < 1) {
        throw std::invalid_argument("mpc: shots must be >= 1 when present");
    }
}

namespace {

double l2_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double l2_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace

TrajectoryLog run_qimpc(const Plant& plant, const QuantumPolicy& policy,
                        const LossSpec& loss, std::span<const double> x0,
                        const MpcConfig& mpc, const SgdConfig& opt_cfg) {
    validate_plant(plant);
    validate_mpc(mpc, plant.control_dim());
    validate_loss(loss);
    validate_head(policy.head, policy.ansatz.n_qubits);
    if (static_cast<int>(policy.head.readout_wires.size()) !=
        plant.control_dim()) {
        throw std::invalid_argument(
            "run_qimpc: readout count does not match plant control dimension");
    }
    if (static_cast<int>(x0.size()) != plant.state_dim()) {
        throw std::invalid_argument("run_qimpc: x0 dimension mismatch");
    }
    if (loss.x_target.size() != x0.size()) {
        throw std::invalid_argument("run_qimpc: x_target dimension mismatch");
    }

    TrajectoryLog log;
    log.state_dim = plant.state_dim();
    log.control_dim = plant.control_dim();

    ParamTensor theta = random_params(policy.ansatz, mpc.seed);
    OptimizerState opt = make_optimizer(theta.size(), opt_cfg);
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> u_prev(static_cast<std::size_t>(plant.control_dim()),
                               0.0);

    const std::int64_t episodes = mpc.mode == MpcConfig::Mode::Online
                                      ? mpc.horizon
                                      : std::int64_t{1};
    const std::int64_t lookahead =
        mpc.mode == MpcConfig::Mode::Lookahead ? mpc.horizon : std::int64_t{1};

    try {
        for (std::int64_t episode = 0; episode < episodes && !log.converged;
             ++episode) {
            for (std::int64_t k = 0; k < mpc.total_steps; ++k) {
                const std::uint64_t step_seed =
                    mix_seed(mpc.seed, static_cast<std::uint64_t>(
                                           episode * mpc.total_steps + k));
                const ControlEval eval =
                    evaluate_controls(policy, theta, x, mpc.shots, step_seed);
                const std::vector<double> u =
                    clip_controls(eval.physical, mpc.u_min, mpc.u_max);
                const std::vector<double> x_next = plant.step(x, u);
                const double j =
                    stage_loss(loss, x_next, u, u_prev, theta.values);
                if (!std::isfinite(j)) {
                    throw std::runtime_error("non-finite stage loss at step " +
                                             std::to_string(k));
                }

                std::vector<double> grad = loss_gradient(
                    policy, theta, x, plant, loss, u_prev, mpc.u_min, mpc.u_max);
                if (lookahead > 1) {
                    // Receding-horizon rollout: accumulate the direct
                    // control-path gradient of each stage along a theta-frozen
                    // rollout, then make one update and apply only the first
                    // control.
                    std::vector<double> x_roll = x_next;
                    std::vector<double> u_roll_prev = u;
                    for (std::int64_t jstep = 1; jstep < lookahead; ++jstep) {
                        const std::vector<double> g =
                            loss_gradient(policy, theta, x_roll, plant, loss,
                                          u_roll_prev, mpc.u_min, mpc.u_max);
                        for (std::size_t p = 0; p < grad.size(); ++p) {
                            grad[p] += g[p];
                        }
                        const ControlEval ev =
                            evaluate_controls(policy, theta, x_roll);
                        const std::vector<double> u_roll =
                            clip_controls(ev.physical, mpc.u_min, mpc.u_max);
                        x_roll = plant.step(x_roll, u_roll);
                        u_roll_prev = u_roll;
                    }
                }

                TrajectoryStep rec;
                rec.x = x;
                rec.u_raw = eval.physical;
                rec.u_clip = u;
                rec.loss = j;
                rec.lr = opt.lr;
                rec.grad_norm = l2_norm(grad);
                sgd_momentum_update(theta.values, grad, opt, opt_cfg);
                log.steps.push_back(std::move(rec));

                x = x_next;
                u_prev = u;
                if (mpc.epsilon &&
                    l2_distance(x, loss.x_target) < *mpc.epsilon) {
                    log.converged = true;
                    break;
                }
            }
        }
    } catch (const std::exception& e) {
        log.ok = false;
        log.error = e.what();
    }
    log.final_theta = theta.values;
    return log;
}

TrajectoryLog run_classical_baseline(const Plant& plant, const LossSpec& loss,
                                     std::span<const double> x0,
                                     const MpcConfig& mpc,
                                     const SgdConfig& opt_cfg) {
    validate_plant(plant);
    validate_mpc(mpc, plant.control_dim());
    validate_loss(loss);
    if (static_cast<int>(x0.size()) != plant.state_dim()) {
        throw std::invalid_argument("baseline: x0 dimension mismatch");
    }
    if (loss.x_target.size() != x0.size()) {
        throw std::invalid_argument("baseline: x_target dimension mismatch");
    }

    const std::size_t m = static_cast<std::size_t>(plant.control_dim());
    const std::size_t s = static_cast<std::size_t>(plant.state_dim());
    const StageCost cost =
        compile_loss(loss, plant.state_dim(), plant.control_dim());

    TrajectoryLog log;
    log.state_dim = plant.state_dim();
    log.control_dim = plant.control_dim();

    // Trainable control vector, started at the bound midpoint and kept
    // feasible by projection after every update.
    std::vector<double> u(m);
    for (std::size_t i = 0; i < m; ++i) {
        u[i] = 0.5 * (mpc.u_min[i] + mpc.u_max[i]);
    }
    OptimizerState opt = make_optimizer(m, opt_cfg);
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> u_prev(m, 0.0);

    const std::int64_t episodes =
        mpc.mode == MpcConfig::Mode::Online ? mpc.horizon : std::int64_t{1};
    try {
        for (std::int64_t episode = 0; episode < episodes && !log.converged;
             ++episode) {
            for (std::int64_t k = 0; k < mpc.total_steps; ++k) {
                const std::vector<double> u_applied =
                    clip_controls(u, mpc.u_min, mpc.u_max);
                const std::vector<double> x_next = plant.step(x, u_applied);
                const double j =
                    stage_loss(loss, x_next, u_applied, u_prev, {});
                if (!std::isfinite(j)) {
                    throw std::runtime_error("non-finite stage loss at step " +
                                             std::to_string(k));
                }

                // dJ/du at the applied control, df/du by central differences.
                constexpr double h = 1e-6;
                std::vector<double> grad(m, 0.0);
                std::vector<double> u_pert(u_applied);
                for (std::size_t i = 0; i < m; ++i) {
                    u_pert[i] = u_applied[i] + h;
                    const std::vector<double> xp = plant.step(x, u_pert);
                    u_pert[i] = u_applied[i] - h;
                    const std::vector<double> xm = plant.step(x, u_pert);
                    u_pert[i] = u_applied[i];
                    double acc = 0.0;
                    for (std::size_t r = 0; r < s; ++r) {
                        acc += 2.0 * cost.state_w[r] *
                               (x_next[r] - loss.x_target[r]) *
                               (xp[r] - xm[r]) / (2.0 * h);
                    }
                    acc += 2.0 * cost.u_w[i] * u_applied[i];
                    acc += 2.0 * cost.du_w[i] * (u_applied[i] - u_prev[i]);
                    grad[i] = acc;
                }

                TrajectoryStep rec;
                rec.x = x;
                rec.u_raw = u;
                rec.u_clip = u_applied;
                rec.loss = j;
                rec.lr = opt.lr;
                rec.grad_norm = l2_norm(grad);
                sgd_momentum_update(u, grad, opt, opt_cfg);
                u = clip_controls(u, mpc.u_min, mpc.u_max);
                log.steps.push_back(std::move(rec));

                x = x_next;
                u_prev = u_applied;
                if (mpc.epsilon &&
                    l2_distance(x, loss.x_target) < *mpc.epsilon) {
                    log.converged = true;
                    break;
                }
            }
        }
    } catch (const std::exception& e) {
        log.ok = false;
        log.error = e.what();
    }
    log.final_theta = u;
    return log;
}

}  // namespace qimpc
