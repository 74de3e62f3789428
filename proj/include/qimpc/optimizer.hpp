#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qimpc {

struct SgdConfig {
    double lr_init = 0.1;
    double lr_min = 0.01;
    double lr_decay = 1.0;  // multiplicative, applied once per update
    double momentum = 0.85;
    double grad_clip = 0.5;  // componentwise clip of the raw gradient
};

struct OptimizerState {
    std::vector<double> velocity;
    double lr = 0.1;
    std::int64_t step_count = 0;
};

OptimizerState make_optimizer(std::size_t n_params, const SgdConfig& cfg);

/// SGD with momentum: g <- clip(g, +-grad_clip); v <- mu v - lr g;
/// p <- p + v; lr <- max(lr_min, lr * decay). Throws on non-finite gradients.
void sgd_momentum_update(std::span<double> params, std::span<const double> grad,
                         OptimizerState& state, const SgdConfig& cfg);

/// 2 exp(-2 eps^2 shots), the measurement-deviation tail bound for `shots`
/// circuit readouts. eps must be positive, shots >= 1.
double hoeffding_shot_bound(double eps, std::int64_t shots);

}  // namespace qimpc
