#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "qimpc/control.hpp"
#include "qimpc/gradients.hpp"

using namespace qimpc;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

// Single-qubit policy whose only effective angle is the Rot Y component, so
// raw = <Z> = cos(theta_y).
QuantumPolicy cosine_policy() {
    QuantumPolicy p;
    p.encoder = {EncoderKind::AngleRY, {}};
    p.ansatz = {1, 1, Entanglement::Linear, RotOrder::ZYZ};
    p.head = {{0}, {1.0}, {0.0}};
    return p;
}

// Central finite difference of the raw readouts over one parameter.
std::vector<double> fd_raw_column(const QuantumPolicy& p,
                                  const ParamTensor& theta, std::size_t param,
                                  std::span<const double> x, double h) {
    ParamTensor t = theta;
    t.values[param] += h;
    const auto up = evaluate_controls(p, t, x).raw;
    t.values[param] -= 2 * h;
    const auto um = evaluate_controls(p, t, x).raw;
    std::vector<double> out(up.size());
    for (std::size_t i = 0; i < up.size(); ++i) {
        out[i] = (up[i] - um[i]) / (2 * h);
    }
    return out;
}

// The full composed stage loss J(theta) used by loss_gradient, replicated
// independently for finite differencing.
double composed_loss(const QuantumPolicy& p, const ParamTensor& theta,
                     std::span<const double> x, const Plant& plant,
                     const LossSpec& loss, std::span<const double> u_prev,
                     std::span<const double> u_min,
                     std::span<const double> u_max) {
    const auto eval = evaluate_controls(p, theta, x);
    const auto u = clip_controls(eval.physical, u_min, u_max);
    const auto x_next = plant.step(x, u);
    return stage_loss(loss, x_next, u, u_prev, theta.values);
}

}  // namespace

TEST_CASE("parameter shift on a single-qubit cosine readout") {
    const QuantumPolicy p = cosine_policy();
    const std::vector<double> x{};

    ParamTensor theta = zero_params(p.ansatz);
    auto jac = parameter_shift_jacobian(p, theta, x);
    REQUIRE(jac.size() == 3);
    CHECK(jac[1] == Approx(0.0).epsilon(1e-12));  // d cos / d theta at 0

    theta.at(0, 0, 1) = pi / 2;
    jac = parameter_shift_jacobian(p, theta, x);
    CHECK(jac[1] == Approx(-1.0).epsilon(1e-12));  // -sin(pi/2)
    const auto fd = fd_raw_column(p, theta, 1, x, 1e-5);
    CHECK(jac[1] == Approx(fd[0]).epsilon(1e-6));

    // RZ components never reach the Z readout
    CHECK(jac[0] == 0.0);
    CHECK(jac[2] == 0.0);
}

TEST_CASE("jacobian locality: wires with no path to the readout") {
    // One linear layer on three qubits, readout on wire 0. The CNOT chain
    // 0->1->2 sits entirely after the rotations, so no gate connects wire 2
    // forward into the wire-0 readout: its three columns are exactly zero.
    QuantumPolicy p;
    p.encoder = {EncoderKind::AngleRY, {0, 1, 2}};
    p.ansatz = {3, 1, Entanglement::Linear, RotOrder::ZYZ};
    p.head = {{0}, {1.0}, {0.0}};
    const ParamTensor theta = random_params(p.ansatz, 31, 1.0);
    const std::vector<double> x{0.7, -0.4, 1.2};
    const auto jac = parameter_shift_jacobian(p, theta, x);
    const std::size_t p_count = theta.size();
    REQUIRE(jac.size() == p_count);
    for (int axis = 0; axis < 3; ++axis) {
        CHECK(jac[static_cast<std::size_t>(2 * 3 + axis)] == 0.0);
    }
    // wires 0 and 1 do feed the readout; their columns are generically alive
    double live = 0.0;
    for (int q = 0; q < 2; ++q) {
        for (int axis = 0; axis < 3; ++axis) {
            live += std::abs(jac[static_cast<std::size_t>(q * 3 + axis)]);
        }
    }
    CHECK(live > 1e-3);
}

TEST_CASE("shift rule matches finite differences on random instances") {
    std::mt19937_64 rng(100);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 5);
        QuantumPolicy p;
        p.ansatz = {n, 2,
                    (rng() & 1) ? Entanglement::Ring : Entanglement::Linear,
                    (rng() & 1) ? RotOrder::ZYZ : RotOrder::ZYX};
        const int features = 1 + static_cast<int>(rng() % n);
        for (int i = 0; i < features; ++i) p.encoder.feature_wires.push_back(i);
        p.encoder.kind = trial % 3 == 0   ? EncoderKind::RotationTriple
                         : trial % 3 == 1 ? EncoderKind::HadamardRY
                                          : EncoderKind::AngleRY;
        const int m = 1 + static_cast<int>(rng() % n);
        for (int i = 0; i < m; ++i) {
            p.head.readout_wires.push_back(i);
            p.head.gains.push_back(1.0);
            p.head.offsets.push_back(0.0);
        }
        const ParamTensor theta = random_params(p.ansatz, rng(), pi);
        std::vector<double> x(features);
        for (double& v : x) v = test::uniform(rng, -1, 1);

        const auto jac = parameter_shift_jacobian(p, theta, x);
        const std::size_t p_count = theta.size();
        for (std::size_t param = 0; param < p_count; ++param) {
            const auto fd = fd_raw_column(p, theta, param, x, 1e-5);
            for (std::size_t i = 0; i < fd.size(); ++i) {
                const double err = std::abs(jac[i * p_count + param] - fd[i]) /
                                   (1.0 + std::abs(fd[i]));
                worst = std::max(worst, err);
            }
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("finite-shot mode is rejected on gradient paths") {
    const QuantumPolicy p = cosine_policy();
    const ParamTensor theta = zero_params(p.ansatz);
    CHECK_THROWS_AS(
        parameter_shift_jacobian(p, theta, std::vector<double>{}, 100),
        std::logic_error);

    const Plant plant = make_plant(TargetTrackParams{0.1, 1});
    const LossSpec loss{LossKind::MseToTarget, {0.0}, {}};
    const std::vector<double> u_prev{0.0}, lo{-10.0}, hi{10.0};
    CHECK_THROWS_AS(loss_gradient(p, theta, std::vector<double>{0.5}, plant,
                                  loss, u_prev, lo, hi, 100),
                    std::logic_error);
}

TEST_CASE("stationary point: target state and control-insensitive dynamics") {
    // Vehicle at rest with the readout mapped to u = 0: the successor state
    // equals the (zero) target, so the tracking term contributes nothing and
    // the gradient is exactly zero.
    QuantumPolicy p;
    p.encoder = {EncoderKind::AngleRY, {0, 1, 2, 3}};
    p.ansatz = {4, 1, Entanglement::Linear, RotOrder::ZYZ};
    p.head = {{0, 1}, {1.0, 1.0}, {-1.0, -1.0}};
    const ParamTensor theta = zero_params(p.ansatz);
    const Plant plant = make_plant(VehicleParams{});
    const LossSpec loss{LossKind::Vehicle, {0, 0, 0, 0}, {0, 0, 0, 0}};
    const std::vector<double> x{0, 0, 0, 0}, u_prev{0, 0};
    const std::vector<double> lo{-1, -1}, hi{1, 1};
    const auto grad = loss_gradient(p, theta, x, plant, loss, u_prev, lo, hi);
    for (double g : grad) CHECK(g == 0.0);
}

TEST_CASE("target-tracking plant: analytic df/du = alpha I") {
    QuantumPolicy p;
    p.encoder = {EncoderKind::RotationTriple, {0, 1, 2}};
    p.ansatz = {3, 2, Entanglement::Ring, RotOrder::ZYZ};
    p.head = {{0, 1, 2}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}};
    const double alpha = 0.1;
    const Plant plant = make_plant(TargetTrackParams{alpha, 3});
    const double lambda = 0.2;
    const LossSpec loss{LossKind::AlgorithmOne, {0.1, -0.2, 0.3}, {lambda}};
    const ParamTensor theta = random_params(p.ansatz, 5);
    const std::vector<double> x{0.4, -0.6, 0.2}, u_prev{0, 0, 0};
    const std::vector<double> lo{-10, -10, -10}, hi{10, 10, 10};

    const auto grad = loss_gradient(p, theta, x, plant, loss, u_prev, lo, hi);

    // Rebuild the gradient from the analytic df/du = alpha I.
    const auto eval = evaluate_controls(p, theta, x);
    const auto x_next = plant.step(x, eval.physical);
    const auto jac = parameter_shift_jacobian(p, theta, x);
    const std::size_t p_count = theta.size();
    for (std::size_t param = 0; param < p_count; ++param) {
        double manual = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const double dj_du =
                2.0 * (x_next[i] - loss.x_target[i]) * alpha +
                2.0 * lambda * eval.physical[i];
            manual += dj_du * jac[i * p_count + param];
        }
        CHECK(grad[param] == Approx(manual).epsilon(1e-8));
    }

}

TEST_CASE("1-D tracking gradient sign pushes the control toward the target") {
    // RY(x) encoding followed by a pure-Y Rot gives u = cos(x + theta_y).
    // At x = 1 and theta_y = pi/2 - 1 the control is 0, du/dtheta = -1,
    // x' = 0.9, and dJ/du = 2 * 0.9 * alpha = 0.18, so the theta gradient is
    // -0.18: descent raises theta_y, lowering u below zero, which pulls the
    // state toward the target.
    QuantumPolicy p;
    p.encoder = {EncoderKind::AngleRY, {0}};
    p.ansatz = {1, 1, Entanglement::Linear, RotOrder::ZYZ};
    p.head = {{0}, {1.0}, {0.0}};
    ParamTensor theta = zero_params(p.ansatz);
    theta.at(0, 0, 1) = pi / 2 - 1.0;
    const Plant plant = make_plant(TargetTrackParams{0.1, 1});
    const LossSpec loss{LossKind::MseToTarget, {0.0}, {}};
    const std::vector<double> x{1.0}, u_prev{0.0}, lo{-10.0}, hi{10.0};
    const auto grad = loss_gradient(p, theta, x, plant, loss, u_prev, lo, hi);
    CHECK(grad[1] == Approx(-0.18).epsilon(1e-6));
}

TEST_CASE("chain rule matches full finite differences away from bounds") {
    std::mt19937_64 rng(500);
    double worst = 0.0;
    for (int trial = 0; trial < 12; ++trial) {
        QuantumPolicy p;
        p.encoder = {EncoderKind::RotationTriple, {0, 1, 2}};
        p.ansatz = {3, 2,
                    (rng() & 1) ? Entanglement::Ring : Entanglement::Linear,
                    RotOrder::ZYZ};
        p.head = {{0, 1, 2},
                  {test::uniform(rng, 0.5, 2.0), test::uniform(rng, 0.5, 2.0),
                   test::uniform(rng, 0.5, 2.0)},
                  {0.0, 0.0, 0.0}};
        const Plant plant =
            make_plant(TargetTrackParams{test::uniform(rng, 0.05, 0.9), 3});
        const LossSpec loss{
            LossKind::AlgorithmOne,
            {test::uniform(rng, -0.5, 0.5), test::uniform(rng, -0.5, 0.5),
             test::uniform(rng, -0.5, 0.5)},
            {test::uniform(rng, 0.0, 1.0)}};
        const ParamTensor theta = random_params(p.ansatz, rng(), 1.0);
        std::vector<double> x{test::uniform(rng, -1, 1),
                              test::uniform(rng, -1, 1),
                              test::uniform(rng, -1, 1)};
        const std::vector<double> u_prev{0, 0, 0};
        const std::vector<double> lo{-50, -50, -50}, hi{50, 50, 50};

        const auto grad =
            loss_gradient(p, theta, x, plant, loss, u_prev, lo, hi);
        const double h = 1e-5;
        for (std::size_t param = 0; param < theta.size(); ++param) {
            ParamTensor t = theta;
            t.values[param] += h;
            const double jp = composed_loss(p, t, x, plant, loss, u_prev, lo, hi);
            t.values[param] -= 2 * h;
            const double jm = composed_loss(p, t, x, plant, loss, u_prev, lo, hi);
            const double fd = (jp - jm) / (2 * h);
            worst = std::max(worst,
                             std::abs(grad[param] - fd) / (1.0 + std::abs(fd)));
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("chain rule covers the parameter-regularized loss") {
    QuantumPolicy p;
    p.encoder = {EncoderKind::RotationTriple, {0, 1, 2, 3}};
    p.ansatz = {4, 2, Entanglement::Ring, RotOrder::ZYZ};
    p.head = {{0, 1}, {1.0, 1.0}, {0.0, 0.0}};
    const Plant plant = make_plant(DoublePendulumParams{});
    const LossSpec loss{LossKind::DoublePendulum,
                        {0.79, 0.0, 0.52, 0.0},
                        {1.0, 0.1, 0.01}};
    const ParamTensor theta = random_params(p.ansatz, 77, 0.5);
    const std::vector<double> x{0.1, 0.0, 0.1, 0.0}, u_prev{0, 0};
    const std::vector<double> lo{-5, -5}, hi{5, 5};

    const auto grad = loss_gradient(p, theta, x, plant, loss, u_prev, lo, hi);
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t param = 0; param < theta.size(); ++param) {
        ParamTensor t = theta;
        t.values[param] += h;
        const double jp = composed_loss(p, t, x, plant, loss, u_prev, lo, hi);
        t.values[param] -= 2 * h;
        const double jm = composed_loss(p, t, x, plant, loss, u_prev, lo, hi);
        const double fd = (jp - jm) / (2 * h);
        worst = std::max(worst,
                         std::abs(grad[param] - fd) / (1.0 + std::abs(fd)));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("pinned controls carry no gradient through the clip") {
    QuantumPolicy p;
    p.encoder = {EncoderKind::AngleRY, {0}};
    p.ansatz = {1, 1, Entanglement::Linear, RotOrder::ZYZ};
    // offset pushes the physical control permanently above the upper bound
    p.head = {{0}, {1.0}, {10.0}};
    const ParamTensor theta = random_params(p.ansatz, 2);
    const Plant plant = make_plant(TargetTrackParams{0.1, 1});
    const LossSpec loss{LossKind::AlgorithmOne, {0.5}, {0.3}};
    const std::vector<double> x{0.2}, u_prev{0.0};
    const std::vector<double> lo{-1.0}, hi{1.0};
    const auto grad = loss_gradient(p, theta, x, plant, loss, u_prev, lo, hi);
    for (double g : grad) CHECK(g == 0.0);
}
