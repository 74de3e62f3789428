#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qimpc/circuits.hpp"
#include "qimpc/losses.hpp"
#include "qimpc/plants.hpp"

namespace qimpc {

/// Gradient of the one-step stage loss with respect to the ansatz parameters,
/// by the chain rule through the plant:
///
///   dJ/dtheta = (dJ/du) (du/dtheta) + direct theta terms,
///
/// where du/dtheta comes from the parameter-shift jacobian composed with the
/// head gains, dJ/du evaluates the tracking term through a central
/// finite-difference df/du on the plant (h = 1e-6 in control units) plus the
/// control penalties, and clipping is handled straight-through: components of
/// the physical control pinned at a bound contribute zero.
///
/// Exact-expectation mode only; a set `shots` is rejected. u_prev feeds the
/// du-penalty terms (pass zeros on the first step). Throws std::runtime_error
/// with context if any intermediate is non-finite.
std::vector<double> loss_gradient(
    const QuantumPolicy& policy, const ParamTensor& theta,
    std::span<const double> x, const Plant& plant, const LossSpec& loss,
    std::span<const double> u_prev, std::span<const double> u_min,
    std::span<const double> u_max,
    std::optional<std::int64_t> shots = std::nullopt);

}  // namespace qimpc
