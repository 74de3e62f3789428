#include "qimpc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qimpc {

OptimizerState make_optimizer(std::size_t n_params, const SgdConfig& cfg) {
    if (!(cfg.lr_init > 0.0) || !(cfg.lr_min >= 0.0) ||
        !(cfg.lr_min <= cfg.lr_init) ||
        !(cfg.lr_decay > 0.0 && cfg.lr_decay <= 1.0) ||
        !(cfg.momentum >= 0.0 && cfg.momentum < 1.0) || !(cfg.grad_clip > 0.0)) {
        throw std::invalid_argument("optimizer: invalid configuration");
    }
    OptimizerState s;
    s.velocity.assign(n_params, 0.0);
    s.lr = cfg.lr_init;
    s.step_count = 0;
    return s;
}

void sgd_momentum_update(std::span<double> params, std::span<const double> grad,
                         OptimizerState& state, const SgdConfig& cfg) {
    if (params.size() != grad.size() || params.size() != state.velocity.size()) {
        throw std::invalid_argument("sgd_momentum_update: shape mismatch");
    }
    for (double g : grad) {
        if (!std::isfinite(g)) {
            throw std::runtime_error(
                "sgd_momentum_update: non-finite gradient at step " +
                std::to_string(state.step_count));
        }
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = std::clamp(grad[i], -cfg.grad_clip, cfg.grad_clip);
        state.velocity[i] = cfg.momentum * state.velocity[i] - state.lr * g;
        params[i] += state.velocity[i];
    }
    state.lr = std::max(cfg.lr_min, state.lr * cfg.lr_decay);
    ++state.step_count;
}

double hoeffding_shot_bound(double eps, std::int64_t shots) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("hoeffding_shot_bound: eps must be > 0");
    }
    if (shots < 1) {
        throw std::invalid_argument("hoeffding_shot_bound: shots must be >= 1");
    }
    return 2.0 * std::exp(-2.0 * eps * eps * static_cast<double>(shots));
}

}  // namespace qimpc
