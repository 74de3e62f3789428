#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "qimpc/plants.hpp"

using namespace qimpc;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

// Reference RK4 integrator for the continuous pendulum, test-only.
std::array<double, 2> pendulum_rk4(std::array<double, 2> x, double u,
                                   const SimplePendulumParams& p, double dt) {
    const auto f = [&](const std::array<double, 2>& s) {
        return std::array<double, 2>{
            s[1], -(p.g / p.l) * std::sin(s[0]) + u / (p.m * p.l * p.l)};
    };
    const auto k1 = f(x);
    const auto k2 = f({x[0] + 0.5 * dt * k1[0], x[1] + 0.5 * dt * k1[1]});
    const auto k3 = f({x[0] + 0.5 * dt * k2[0], x[1] + 0.5 * dt * k2[1]});
    const auto k4 = f({x[0] + dt * k3[0], x[1] + dt * k3[1]});
    return {x[0] + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            x[1] + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

}  // namespace

TEST_CASE("target tracking step") {
    const std::vector<double> x{1, 1, 1}, u0{0, 0, 0};
    CHECK(target_track_step(x, x, 0.37) == x);  // fixed point, bitwise
    CHECK(target_track_step(x, u0, 0.1) ==
          std::vector<double>{0.9, 0.9, 0.9});
    CHECK(target_track_step(x, u0, 1.0) == u0);  // full step returns u
    CHECK_THROWS_AS(target_track_step(x, std::vector<double>{1.0}, 0.1),
                    std::invalid_argument);
}

TEST_CASE("building heat balance step") {
    const BuildingParams p{0.5, 1.0, 15.0, 5.0, 3.0, 0.1, 10.0, 1};
    CHECK(building_step(20.0, 0.0, p) == Approx(19.8).epsilon(1e-15));
    CHECK(building_step(20.0, 2.0, p) == Approx(20.0).epsilon(1e-15));
    // zero net flux: x = T_out and u cancels the gains exactly
    CHECK(building_step(15.0, -8.0, p) == 15.0);
}

TEST_CASE("vehicle step") {
    const VehicleParams p{};
    SUBCASE("rest is a fixed point under sign-gated friction") {
        const std::vector<double> x{0, 0, 0, 0}, u{0, 0};
        CHECK(vehicle_step(x, u, p) == x);
    }
    SUBCASE("cruise at 10 m/s with no input") {
        const std::vector<double> x{0, 10, 0, 0}, u{0, 0};
        const auto next = vehicle_step(x, u, p);
        CHECK(next[0] == Approx(1.0).epsilon(1e-15));
        CHECK(next[1] == Approx(9.9871275).epsilon(1e-12));
        CHECK(next[2] == 0.0);  // sin(0) = 0, lateral unchanged
        CHECK(next[3] == 0.0);
    }
    SUBCASE("steering at +-pi/2 is a singularity") {
        const std::vector<double> x{0, 5, 0, 0};
        CHECK_THROWS_AS(vehicle_step(x, std::vector<double>{0.0, pi / 2}, p),
                        PlantError);
        CHECK_THROWS_AS(vehicle_step(x, std::vector<double>{0.0, -1.7}, p),
                        PlantError);
    }
}

TEST_CASE("simple pendulum step") {
    const SimplePendulumParams p{1.0, 1.0, 9.81, 0.05, false};
    SUBCASE("stable equilibrium is bitwise fixed") {
        const std::vector<double> x{0, 0}, u{0};
        CHECK(pendulum_step(x, u, p) == x);
    }
    SUBCASE("inverted equilibrium stays within floating-point sin(pi)") {
        const auto next =
            pendulum_step(std::vector<double>{pi, 0.0}, std::vector<double>{0.0}, p);
        CHECK(next[0] == pi);  // position update uses the old (zero) velocity
        CHECK(std::abs(next[1]) < 1e-15);
    }
    SUBCASE("one explicit step from (0.1, 0)") {
        const auto next = pendulum_step(std::vector<double>{0.1, 0.0},
                                        std::vector<double>{0.0}, p);
        CHECK(next[0] == 0.1);
        CHECK(next[1] == Approx(-9.81 * std::sin(0.1) * 0.05).epsilon(1e-15));
    }
    SUBCASE("angle wrapping flag") {
        SimplePendulumParams wrapped = p;
        wrapped.wrap_angles = true;
        const auto next = pendulum_step(std::vector<double>{3.1, 1.5},
                                        std::vector<double>{0.0}, wrapped);
        CHECK(next[0] == Approx(3.1 + 1.5 * 0.05 - 2 * pi).epsilon(1e-12));
        const auto unwrapped = pendulum_step(std::vector<double>{3.1, 1.5},
                                             std::vector<double>{0.0}, p);
        CHECK(unwrapped[0] == Approx(3.175).epsilon(1e-15));
    }
}

TEST_CASE("euler pendulum tracks RK4 at small steps") {
    const SimplePendulumParams p{1.0, 1.0, 9.81, 1e-4, false};
    std::array<double, 2> rk{0.5, 0.0};
    std::vector<double> eu{0.5, 0.0};
    const std::vector<double> u{0.3};
    for (int k = 0; k < 2000; ++k) {  // 0.2 s
        rk = pendulum_rk4(rk, u[0], p, p.dt);
        eu = pendulum_step(eu, u, p);
    }
    CHECK(eu[0] == Approx(rk[0]).epsilon(1e-3));
    CHECK(eu[1] == Approx(rk[1]).epsilon(1e-3));
}

TEST_CASE("small-oscillation period matches 2 pi sqrt(l/g)") {
    const SimplePendulumParams p{1.0, 1.0, 9.81, 1e-4, false};
    std::vector<double> x{0.01, 0.0};
    const std::vector<double> u{0.0};
    double prev = x[0];
    std::vector<double> down_crossings;
    for (long k = 1; k < 50000 && down_crossings.size() < 2; ++k) {
        x = pendulum_step(x, u, p);
        if (prev > 0.0 && x[0] <= 0.0) {
            // linear interpolation inside the step
            const double frac = prev / (prev - x[0]);
            down_crossings.push_back((static_cast<double>(k - 1) + frac) * p.dt);
        }
        prev = x[0];
    }
    REQUIRE(down_crossings.size() == 2);
    const double period = down_crossings[1] - down_crossings[0];
    const double expected = 2.0 * pi * std::sqrt(p.l / p.g);
    CHECK(std::abs(period - expected) / expected < 0.02);
}

TEST_CASE("double pendulum mass matrix") {
    const DoublePendulumParams unit{};
    SUBCASE("aligned links, unit parameters") {
        const auto m = dp_mass_matrix(0.7, 0.7, unit);
        CHECK(m[0][0] == 2.0);
        CHECK(m[0][1] == Approx(1.0).epsilon(1e-15));
        CHECK(m[1][0] == m[0][1]);
        CHECK(m[1][1] == 1.0);
        CHECK(m[0][0] * m[1][1] - m[0][1] * m[1][0] ==
              Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("quarter-turn separation decouples") {
        const auto m = dp_mass_matrix(pi / 2, 0.0, unit);
        CHECK(std::abs(m[0][1]) < 1e-15);
        CHECK(m[0][0] == 2.0);
        CHECK(m[1][1] == 1.0);
    }
    SUBCASE("determinant identity over random angles and parameters") {
        std::mt19937_64 rng(17);
        for (int t = 0; t < 10000; ++t) {
            DoublePendulumParams p;
            p.m1 = test::uniform(rng, 0.5, 2.0);
            p.m2 = test::uniform(rng, 0.5, 2.0);
            p.l1 = test::uniform(rng, 0.5, 2.0);
            p.l2 = test::uniform(rng, 0.5, 2.0);
            const double theta = test::uniform(rng, -pi, pi);
            const double phi = test::uniform(rng, -pi, pi);
            const auto m = dp_mass_matrix(theta, phi, p);
            CHECK(m[0][1] == m[1][0]);  // symmetric by construction
            const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            const double s = std::sin(theta - phi);
            const double expected =
                p.m2 * p.l1 * p.l1 * p.l2 * p.l2 * (p.m1 + p.m2 * s * s);
            CHECK(det == Approx(expected).epsilon(1e-10));
            CHECK(det > 0.0);
        }
    }
}

TEST_CASE("double pendulum coriolis vector") {
    const DoublePendulumParams unit{};
    SUBCASE("vanishes at the origin") {
        const auto c = dp_coriolis(std::vector<double>{0, 0, 0, 0}, unit);
        CHECK(c[0] == 0.0);
        CHECK(c[1] == 0.0);
    }
    SUBCASE("gravity-only term at theta = pi/2") {
        const auto c =
            dp_coriolis(std::vector<double>{pi / 2, 0, 0, 0}, unit);
        CHECK(c[0] == Approx(2.0 * 9.81).epsilon(1e-15));
        CHECK(c[1] == 0.0);
    }
    SUBCASE("aligned links with zero velocity keep only gravity terms") {
        const auto c =
            dp_coriolis(std::vector<double>{0.4, 0, 0.4, 0}, unit);
        CHECK(c[0] == Approx(2.0 * 9.81 * std::sin(0.4)).epsilon(1e-14));
        CHECK(c[1] == Approx(9.81 * std::sin(0.4)).epsilon(1e-14));
    }
}

TEST_CASE("double pendulum step") {
    const DoublePendulumParams p{};
    SUBCASE("zero state with zero torque is a bitwise fixed point") {
        const std::vector<double> x{0, 0, 0, 0}, tau{0, 0};
        CHECK(double_pendulum_step(x, tau, p) == x);
    }
    SUBCASE("constructed torque forces known accelerations") {
        const std::vector<double> x{0, 0, 0, 0};
        const auto m = dp_mass_matrix(0.0, 0.0, p);
        const auto c = dp_coriolis(x, p);
        // tau = C + M (1, 0)^T forces acceleration (1, 0)
        const std::vector<double> tau{c[0] + m[0][0], c[1] + m[1][0]};
        const auto next = double_pendulum_step(x, tau, p);
        CHECK(next[1] == Approx(p.dt * 1.0).epsilon(1e-12));
        CHECK(next[3] == Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("linear-solve residual over random instances") {
        std::mt19937_64 rng(23);
        for (int t = 0; t < 10000; ++t) {
            std::vector<double> x{
                test::uniform(rng, -pi, pi), test::uniform(rng, -3, 3),
                test::uniform(rng, -pi, pi), test::uniform(rng, -3, 3)};
            std::vector<double> tau{test::uniform(rng, -2, 2),
                                    test::uniform(rng, -2, 2)};
            const auto next = double_pendulum_step(x, tau, p);
            const double a0 = (next[1] - x[1]) / p.dt;
            const double a1 = (next[3] - x[3]) / p.dt;
            const auto m = dp_mass_matrix(x[0], x[2], p);
            const auto c = dp_coriolis(x, p);
            const double r0 = m[0][0] * a0 + m[0][1] * a1 + c[0] - tau[0];
            const double r1 = m[1][0] * a0 + m[1][1] * a1 + c[1] - tau[1];
            CHECK(std::sqrt(r0 * r0 + r1 * r1) < 1e-10);
        }
    }
}

TEST_CASE("plant dispatch preserves dimensions under fuzzing") {
    std::mt19937_64 rng(29);
    const std::vector<Plant> plants{
        make_plant(TargetTrackParams{0.3, 3}), make_plant(BuildingParams{}),
        make_plant(VehicleParams{}), make_plant(SimplePendulumParams{}),
        make_plant(DoublePendulumParams{})};
    for (int t = 0; t < 10000; ++t) {
        const Plant& plant = plants[rng() % plants.size()];
        std::vector<double> x(plant.state_dim());
        std::vector<double> u(plant.control_dim());
        for (double& v : x) v = test::uniform(rng, -2, 2);
        for (double& v : u) v = test::uniform(rng, -1, 1);
        if (plant.kind == PlantKind::Vehicle) u[1] = test::uniform(rng, -1.5, 1.5);
        const auto next = plant.step(x, u);
        CHECK(next.size() == static_cast<std::size_t>(plant.state_dim()));
    }
}

TEST_CASE("finite-difference control jacobian of the tracking plant") {
    const Plant plant = make_plant(TargetTrackParams{0.25, 3});
    const std::vector<double> x{0.3, -0.7, 1.1};
    std::vector<double> u{0.2, 0.4, -0.6};
    const double h = 1e-6;
    for (int i = 0; i < 3; ++i) {
        for (int r = 0; r < 3; ++r) {
            std::vector<double> up = u, um = u;
            up[i] += h;
            um[i] -= h;
            const double fd =
                (plant.step(x, up)[r] - plant.step(x, um)[r]) / (2 * h);
            const double expected = (i == r) ? 0.25 : 0.0;
            CHECK(std::abs(fd - expected) < 1e-8);
        }
    }
}

TEST_CASE("plant parameter validation") {
    CHECK_THROWS_AS(validate_plant(make_plant(TargetTrackParams{0.0, 3})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_plant(make_plant(TargetTrackParams{1.5, 3})),
                    std::invalid_argument);
    BuildingParams b;
    b.C = 0.0;
    CHECK_THROWS_AS(validate_plant(make_plant(b)), std::invalid_argument);
    DoublePendulumParams dp;
    dp.l2 = -1.0;
    CHECK_THROWS_AS(validate_plant(make_plant(dp)), std::invalid_argument);
    SimplePendulumParams sp;
    sp.dt = 0.0;
    CHECK_THROWS_AS(validate_plant(make_plant(sp)), std::invalid_argument);
}
