#include "qimpc/losses.hpp"

#include <stdexcept>

namespace qimpc {

std::size_t loss_weight_count(LossKind kind) {
    switch (kind) {
        case LossKind::MseToTarget:
            return 0;
        case LossKind::AlgorithmOne:
            return 1;
        case LossKind::Building:
            return 2;
        case LossKind::Vehicle:
            return 4;
        case LossKind::DoublePendulum:
            return 3;
    }
    return 0;
}

void validate_loss(const LossSpec& spec) {
    if (spec.weights.size() != loss_weight_count(spec.kind)) {
        throw std::invalid_argument(
            "loss: expected " + std::to_string(loss_weight_count(spec.kind)) +
            " weights, got " + std::to_string(spec.weights.size()));
    }
    for (double w : spec.weights) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw std::invalid_argument("loss: weights must lie in [0, 1]");
        }
    }
}

StageCost compile_loss(const LossSpec& spec, int state_dim, int control_dim) {
    validate_loss(spec);
    const auto s = static_cast<std::size_t>(state_dim);
    const auto m = static_cast<std::size_t>(control_dim);
    StageCost cost;
    cost.state_w.assign(s, 0.0);
    cost.u_w.assign(m, 0.0);
    cost.du_w.assign(m, 0.0);
    switch (spec.kind) {
        case LossKind::MseToTarget:
            cost.state_w.assign(s, 1.0);
            break;
        case LossKind::AlgorithmOne:
            cost.state_w.assign(s, 1.0);
            cost.u_w.assign(m, spec.weights[0]);
            break;
        case LossKind::Building:
            cost.state_w.assign(s, 1.0);
            cost.u_w.assign(m, spec.weights[0]);
            cost.du_w.assign(m, spec.weights[1]);
            break;
        case LossKind::Vehicle:
            if (state_dim != 4 || control_dim != 2) {
                throw std::invalid_argument(
                    "vehicle loss expects state[4], control[2]");
            }
            cost.state_w = {0.0, 0.0, 1.0, 1.0};
            cost.u_w = {spec.weights[0], spec.weights[1]};
            cost.du_w = {spec.weights[2], spec.weights[3]};
            break;
        case LossKind::DoublePendulum:
            cost.state_w.assign(s, spec.weights[0]);
            cost.u_w.assign(m, spec.weights[1]);
            cost.theta_w = spec.weights[2];
            break;
    }
    return cost;
}

double stage_loss(const LossSpec& spec, std::span<const double> x_next,
                  std::span<const double> u, std::span<const double> u_prev,
                  std::span<const double> theta) {
    const StageCost cost = compile_loss(spec, static_cast<int>(x_next.size()),
                                        static_cast<int>(u.size()));
    if (spec.x_target.size() != x_next.size()) {
        throw std::invalid_argument("stage_loss: x_target dimension mismatch");
    }
    if (!u_prev.empty() && u_prev.size() != u.size()) {
        throw std::invalid_argument("stage_loss: u_prev dimension mismatch");
    }
    double j = 0.0;
    for (std::size_t s = 0; s < x_next.size(); ++s) {
        const double e = x_next[s] - spec.x_target[s];
        j += cost.state_w[s] * e * e;
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        j += cost.u_w[i] * u[i] * u[i];
        const double du = u[i] - (u_prev.empty() ? 0.0 : u_prev[i]);
        j += cost.du_w[i] * du * du;
    }
    if (cost.theta_w != 0.0) {
        double t2 = 0.0;
        for (double t : theta) t2 += t * t;
        j += cost.theta_w * t2;
    }
    return j;
}

}  // namespace qimpc
