#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qimpc {

/// Thrown when plant dynamics hit a genuine singularity (vehicle steering at
/// +-pi/2). The MPC loop converts it into an aborted run with a partial log.
struct PlantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// x(t+1) = x + alpha (u - x), componentwise; a pure discrete map.
struct TargetTrackParams {
    double alpha = 0.1;
    int dim = 3;
};

// Thermal RC room model, Euler-discretized. Q_occupants is treated as a heat
// gain in watts to keep the balance dimensionally consistent. Rooms are
// independent identical copies.
struct BuildingParams {
    double R = 0.5;
    double C = 1.0;
    double T_out = 15.0;
    double Q_solar = 5.0;
    double Q_occ = 3.0;
    double dt = 0.1;
    double P_max = 10.0;
    int n_rooms = 3;
};

// Curvilinear-road longitudinal/lateral model. State (s, v, y, heading);
// controls (traction force, steering angle). Resistive forces act against
// the direction of motion via sign(v), so rest is a fixed point.
struct VehicleParams {
    double m = 1500.0;
    double L = 2.5;
    double C_d = 0.3;
    double rho = 1.225;
    double A = 2.5;
    double C_r = 0.01;
    double g = 9.81;
    double kappa = 0.0;
    double dt = 0.1;
};

struct SimplePendulumParams {
    double m = 1.0;
    double l = 1.0;
    double g = 9.81;
    double dt = 0.05;
    bool wrap_angles = false;
};

struct DoublePendulumParams {
    double m1 = 1.0;
    double m2 = 1.0;
    double l1 = 1.0;
    double l2 = 1.0;
    double g = 9.81;
    double dt = 0.05;
    bool wrap_angles = false;
};

std::vector<double> target_track_step(std::span<const double> x,
                                      std::span<const double> u, double alpha);

/// Single-room heat balance step.
double building_step(double x, double u, const BuildingParams& p);

std::vector<double> vehicle_step(std::span<const double> x,
                                 std::span<const double> u,
                                 const VehicleParams& p);

std::vector<double> pendulum_step(std::span<const double> x,
                                  std::span<const double> u,
                                  const SimplePendulumParams& p);

/// [[ (m1+m2) l1^2, m2 l1 l2 cos(T-p) ], [ m2 l1 l2 cos(T-p), m2 l2^2 ]]
std::array<std::array<double, 2>, 2> dp_mass_matrix(
    double theta, double phi, const DoublePendulumParams& p);

std::array<double, 2> dp_coriolis(std::span<const double> x,
                                  const DoublePendulumParams& p);

std::vector<double> double_pendulum_step(std::span<const double> x,
                                         std::span<const double> tau,
                                         const DoublePendulumParams& p);

enum class PlantKind { TargetTrack, Building, Vehicle, SimplePendulum, DoublePendulum };

struct Plant {
    PlantKind kind = PlantKind::TargetTrack;
    std::variant<TargetTrackParams, BuildingParams, VehicleParams,
                 SimplePendulumParams, DoublePendulumParams>
        params = TargetTrackParams{};

    int state_dim() const;
    int control_dim() const;
    std::vector<double> step(std::span<const double> x,
                             std::span<const double> u) const;
};

Plant make_plant(const TargetTrackParams& p);
Plant make_plant(const BuildingParams& p);
Plant make_plant(const VehicleParams& p);
Plant make_plant(const SimplePendulumParams& p);
Plant make_plant(const DoublePendulumParams& p);

/// Validates strict positivity of masses, lengths, capacities, dt.
void validate_plant(const Plant& plant);

}  // namespace qimpc
