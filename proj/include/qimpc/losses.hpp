#pragma once

#include <span>
#include <string>
#include <vector>

namespace qimpc {

enum class LossKind {
    MseToTarget,     // ||x' - x*||^2
    AlgorithmOne,    // ||x' - x*||^2 + w0 ||u||^2
    Building,        // ||x' - x*||^2 + w0 ||u||^2 + w1 ||du||^2
    Vehicle,         // ||y'||^2 + ||heading'||^2 + w0 u1^2 + w1 u2^2
                     //   + w2 du1^2 + w3 du2^2
    DoublePendulum,  // w0 ||x' - x*||^2 + w1 ||u||^2 + w2 ||theta||^2
};

struct LossSpec {
    LossKind kind = LossKind::MseToTarget;
    std::vector<double> x_target;
    // Penalization weights, all in [0, 1]; count depends on kind
    // (0, 1, 2, 4, 3 respectively).
    std::vector<double> weights;
};

std::size_t loss_weight_count(LossKind kind);

/// Throws std::invalid_argument on bad weight count or weights outside [0, 1].
void validate_loss(const LossSpec& spec);

/// Per-term coefficient view of a LossSpec for given plant dimensions:
/// J = sum_s state_w[s] (x'[s]-x*[s])^2 + sum_i u_w[i] u[i]^2
///   + sum_i du_w[i] (u[i]-u_prev[i])^2 + theta_w ||theta||^2
struct StageCost {
    std::vector<double> state_w;
    std::vector<double> u_w;
    std::vector<double> du_w;
    double theta_w = 0.0;
};

StageCost compile_loss(const LossSpec& spec, int state_dim, int control_dim);

/// Nonnegative stage cost on the successor state. The first step of a
/// trajectory passes u_prev = 0.
double stage_loss(const LossSpec& spec, std::span<const double> x_next,
                  std::span<const double> u, std::span<const double> u_prev,
                  std::span<const double> theta);

}  // namespace qimpc
