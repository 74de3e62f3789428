#include "qimpc/plants.hpp"

#include <cmath>
#include <numbers>

namespace qimpc {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double wrap_pi(double a) {
    // wrap to (-pi, pi]
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

void check_dims(std::span<const double> x, std::size_t sx,
                std::span<const double> u, std::size_t su, const char* who) {
    if (x.size() != sx || u.size() != su) {
        throw std::invalid_argument(std::string(who) + ": expected state[" +
                                    std::to_string(sx) + "], control[" +
                                    std::to_string(su) + "], got state[" +
                                    std::to_string(x.size()) + "], control[" +
                                    std::to_string(u.size()) + "]");
    }
}

}  // namespace

std::vector<double> target_track_step(std::span<const double> x,
                                      std::span<const double> u, double alpha) {
    check_dims(x, x.size(), u, x.size(), "target_track_step");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] + alpha * (u[i] - x[i]);
    }
    return out;
}

double building_step(double x, double u, const BuildingParams& p) {
    return x + ((p.T_out - x) / (p.R * p.C) + u / p.C +
                (p.Q_solar + p.Q_occ) / p.C) *
                   p.dt;
}

std::vector<double> vehicle_step(std::span<const double> x,
                                 std::span<const double> u,
                                 const VehicleParams& p) {
    check_dims(x, 4, u, 2, "vehicle_step");
    const double v = x[1];
    const double heading = x[3];
    const double steer = u[1];
    if (!(std::abs(steer) < std::numbers::pi / 2.0)) {
        throw PlantError("vehicle_step: steering angle " +
                         std::to_string(steer) + " at or beyond +-pi/2");
    }
    const double f_drag = 0.5 * p.C_d * p.rho * p.A * v * v;
    const double f_roll = p.C_r * p.m * p.g;
    const double resist = sign(v) * (f_drag + f_roll);
    return {
        x[0] + v * std::cos(heading) * p.dt,
        v + (u[0] - resist) / p.m * p.dt,
        x[2] + v * std::sin(heading) * p.dt,
        heading + (v / p.L * std::tan(steer) - p.kappa * v) * p.dt,
    };
}

std::vector<double> pendulum_step(std::span<const double> x,
                                  std::span<const double> u,
                                  const SimplePendulumParams& p) {
    check_dims(x, 2, u, 1, "pendulum_step");
    double theta = x[0] + x[1] * p.dt;
    const double omega =
        x[1] + (-(p.g / p.l) * std::sin(x[0]) + u[0] / (p.m * p.l * p.l)) * p.dt;
    if (p.wrap_angles) theta = wrap_pi(theta);
    return {theta, omega};
}

std::array<std::array<double, 2>, 2> dp_mass_matrix(
    double theta, double phi, const DoublePendulumParams& p) {
    const double off = p.m2 * p.l1 * p.l2 * std::cos(theta - phi);
    return {{{(p.m1 + p.m2) * p.l1 * p.l1, off}, {off, p.m2 * p.l2 * p.l2}}};
}

std::array<double, 2> dp_coriolis(std::span<const double> x,
                                  const DoublePendulumParams& p) {
    if (x.size() != 4) {
        throw std::invalid_argument("dp_coriolis: expected state[4]");
    }
    const double theta = x[0], theta_dot = x[1], phi = x[2], phi_dot = x[3];
    const double s = std::sin(theta - phi);
    return {p.m2 * p.l1 * p.l2 * s * phi_dot * phi_dot +
                (p.m1 + p.m2) * p.g * p.l1 * std::sin(theta),
            -p.m2 * p.l1 * p.l2 * s * theta_dot * theta_dot +
                p.m2 * p.g * p.l2 * std::sin(phi)};
}

std::vector<double> double_pendulum_step(std::span<const double> x,
                                         std::span<const double> tau,
                                         const DoublePendulumParams& p) {
    check_dims(x, 4, tau, 2, "double_pendulum_step");
    const auto m = dp_mass_matrix(x[0], x[2], p);
    const auto c = dp_coriolis(x, p);
    const double r0 = tau[0] - c[0];
    const double r1 = tau[1] - c[1];
    // det = m2 l1^2 l2^2 (m1 + m2 sin^2(theta - phi)) > 0, so the 2x2 Cramer
    // solve is always well posed.
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double a0 = (m[1][1] * r0 - m[0][1] * r1) / det;
    const double a1 = (m[0][0] * r1 - m[1][0] * r0) / det;
    double theta = x[0] + x[1] * p.dt;
    double phi = x[2] + x[3] * p.dt;
    if (p.wrap_angles) {
        theta = wrap_pi(theta);
        phi = wrap_pi(phi);
    }
    return {theta, x[1] + a0 * p.dt, phi, x[3] + a1 * p.dt};
}

int Plant::state_dim() const {
    switch (kind) {
        case PlantKind::TargetTrack:
            return std::get<TargetTrackParams>(params).dim;
        case PlantKind::Building:
            return std::get<BuildingParams>(params).n_rooms;
        case PlantKind::Vehicle:
            return 4;
        case PlantKind::SimplePendulum:
            return 2;
        case PlantKind::DoublePendulum:
            return 4;
    }
    return 0;
}

int Plant::control_dim() const {
    switch (kind) {
        case PlantKind::TargetTrack:
            return std::get<TargetTrackParams>(params).dim;
        case PlantKind::Building:
            return std::get<BuildingParams>(params).n_rooms;
        case PlantKind::Vehicle:
            return 2;
        case PlantKind::SimplePendulum:
            return 1;
        case PlantKind::DoublePendulum:
            return 2;
    }
    return 0;
}

std::vector<double> Plant::step(std::span<const double> x,
                                std::span<const double> u) const {
    switch (kind) {
        case PlantKind::TargetTrack:
            return target_track_step(x, u,
                                     std::get<TargetTrackParams>(params).alpha);
        case PlantKind::Building: {
            const auto& p = std::get<BuildingParams>(params);
            check_dims(x, static_cast<std::size_t>(p.n_rooms), u,
                       static_cast<std::size_t>(p.n_rooms), "building_step");
            std::vector<double> out(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                out[i] = building_step(x[i], u[i], p);
            }
            return out;
        }
        case PlantKind::Vehicle:
            return vehicle_step(x, u, std::get<VehicleParams>(params));
        case PlantKind::SimplePendulum:
            return pendulum_step(x, u, std::get<SimplePendulumParams>(params));
        case PlantKind::DoublePendulum:
            return double_pendulum_step(x, u,
                                        std::get<DoublePendulumParams>(params));
    }
    throw std::logic_error("Plant::step: bad kind");
}

Plant make_plant(const TargetTrackParams& p) {
    return {PlantKind::TargetTrack, p};
}
Plant make_plant(const BuildingParams& p) { return {PlantKind::Building, p}; }
Plant make_plant(const VehicleParams& p) { return {PlantKind::Vehicle, p}; }
Plant make_plant(const SimplePendulumParams& p) {
    return {PlantKind::SimplePendulum, p};
}
Plant make_plant(const DoublePendulumParams& p) {
    return {PlantKind::DoublePendulum, p};
}

void validate_plant(const Plant& plant) {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw std::invalid_argument(std::string("plant parameter ") + name +
                                        " must be strictly positive");
        }
    };
    switch (plant.kind) {
        case PlantKind::TargetTrack: {
            const auto& p = std::get<TargetTrackParams>(plant.params);
            if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
                throw std::invalid_argument("alpha must be in (0, 1]");
            }
            if (p.dim < 1) throw std::invalid_argument("dim must be >= 1");
            break;
        }
        case PlantKind::Building: {
            const auto& p = std::get<BuildingParams>(plant.params);
            positive(p.R, "R");
            positive(p.C, "C");
            positive(p.dt, "dt");
            if (p.n_rooms < 1) throw std::invalid_argument("n_rooms must be >= 1");
            break;
        }
        case PlantKind::Vehicle: {
            const auto& p = std::get<VehicleParams>(plant.params);
            positive(p.m, "m");
            positive(p.L, "L");
            positive(p.dt, "dt");
            break;
        }
        case PlantKind::SimplePendulum: {
            const auto& p = std::get<SimplePendulumParams>(plant.params);
            positive(p.m, "m");
            positive(p.l, "l");
            positive(p.dt, "dt");
            break;
        }
        case PlantKind::DoublePendulum: {
            const auto& p = std::get<DoublePendulumParams>(plant.params);
            positive(p.m1, "m1");
            positive(p.m2, "m2");
            positive(p.l1, "l1");
            positive(p.l2, "l2");
            positive(p.dt, "dt");
            break;
        }
    }
}

}  // namespace qimpc
