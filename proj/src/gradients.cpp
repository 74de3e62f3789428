#include "qimpc/gradients.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qimpc/control.hpp"

namespace qimpc {

std::vector<double> loss_gradient(const QuantumPolicy& policy,
                                  const ParamTensor& theta,
                                  std::span<const double> x, const Plant& plant,
                                  const LossSpec& loss,
                                  std::span<const double> u_prev,
                                  std::span<const double> u_min,
                                  std::span<const double> u_max,
                                  std::optional<std::int64_t> shots) {
    if (shots) {
        throw std::logic_error(
            "loss_gradient: finite-shot mode unsupported, gradients require "
            "exact expectations");
    }
    const std::size_t m = policy.head.readout_wires.size();
    const std::size_t s = static_cast<std::size_t>(plant.state_dim());
    if (u_min.size() != m || u_max.size() != m) {
        throw std::invalid_argument("loss_gradient: bounds dimension mismatch");
    }
    const StageCost cost =
        compile_loss(loss, plant.state_dim(), static_cast<int>(m));
    if (loss.x_target.size() != s) {
        throw std::invalid_argument("loss_gradient: x_target dimension mismatch");
    }

    const ControlEval eval = evaluate_controls(policy, theta, x);
    const std::vector<double> u_clipped =
        clip_controls(eval.physical, u_min, u_max);
    const std::vector<double> x_next = plant.step(x, u_clipped);

    // df/du by central finite difference at the applied (clipped) control.
    constexpr double h = 1e-6;
    std::vector<double> dfdu(s * m, 0.0);  // row-major s x m
    std::vector<double> u_pert(u_clipped);
    for (std::size_t i = 0; i < m; ++i) {
        u_pert[i] = u_clipped[i] + h;
        const std::vector<double> xp = plant.step(x, u_pert);
        u_pert[i] = u_clipped[i] - h;
        const std::vector<double> xm = plant.step(x, u_pert);
        u_pert[i] = u_clipped[i];
        for (std::size_t r = 0; r < s; ++r) {
            dfdu[r * m + i] = (xp[r] - xm[r]) / (2.0 * h);
        }
    }

    std::vector<double> dj_du(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t r = 0; r < s; ++r) {
            acc += 2.0 * cost.state_w[r] * (x_next[r] - loss.x_target[r]) *
                   dfdu[r * m + i];
        }
        acc += 2.0 * cost.u_w[i] * u_clipped[i];
        const double prev = u_prev.empty() ? 0.0 : u_prev[i];
        acc += 2.0 * cost.du_w[i] * (u_clipped[i] - prev);
        // Straight-through clipping: pinned components carry no gradient.
        const bool pinned =
            eval.physical[i] <= u_min[i] || eval.physical[i] >= u_max[i];
        dj_du[i] = pinned ? 0.0 : acc;
    }

    const std::vector<double> jac = parameter_shift_jacobian(policy, theta, x);
    const std::size_t p_count = theta.size();
    std::vector<double> grad(p_count, 0.0);
    for (std::size_t p = 0; p < p_count; ++p) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            acc += dj_du[i] * policy.head.gains[i] * jac[i * p_count + p];
        }
        acc += 2.0 * cost.theta_w * theta.values[p];
        if (!std::isfinite(acc)) {
            throw std::runtime_error(
                "loss_gradient: non-finite gradient component at parameter " +
                std::to_string(p));
        }
        grad[p] = acc;
    }
    return grad;
}

}  // namespace qimpc
