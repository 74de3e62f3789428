#include "qimpc/statevector.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "qimpc/kernels.hpp"

namespace qimpc {

namespace {

using C = std::complex<double>;
using Mat2 = std::array<C, 4>;

Mat2 mat_rx(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {C{c, 0}, C{0, -s}, C{0, -s}, C{c, 0}};
}

Mat2 mat_ry(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {C{c, 0}, C{-s, 0}, C{s, 0}, C{c, 0}};
}

Mat2 mat_rz(double theta) {
    return {std::polar(1.0, -theta / 2.0), C{0, 0}, C{0, 0},
            std::polar(1.0, theta / 2.0)};
}

Mat2 mat_h() {
    const double r = 1.0 / std::sqrt(2.0);
    return {C{r, 0}, C{r, 0}, C{r, 0}, C{-r, 0}};
}

// second * first: `first` is applied to the state before `second`.
Mat2 compose(const Mat2& second, const Mat2& first) {
    return {second[0] * first[0] + second[1] * first[2],
            second[0] * first[1] + second[1] * first[3],
            second[2] * first[0] + second[3] * first[2],
            second[2] * first[1] + second[3] * first[3]};
}

std::size_t wire_mask(int wire, int n_qubits) {
    return std::size_t{1} << (n_qubits - 1 - wire);
}

}  // namespace

StateVector new_zero_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > StateVector::kMaxQubits) {
        throw std::invalid_argument("new_zero_state: n_qubits must be in [1, " +
                                    std::to_string(StateVector::kMaxQubits) +
                                    "], got " + std::to_string(n_qubits));
    }
    StateVector s;
    s.n_qubits = n_qubits;
    s.amps.assign(std::size_t{1} << n_qubits, C{0, 0});
    s.amps[0] = C{1, 0};
    return s;
}

namespace gate {
GateOp rx(int wire, double angle) {
    return {GateKind::RX, wire, -1, {angle, 0, 0}, RotOrder::ZYZ};
}
GateOp ry(int wire, double angle) {
    return {GateKind::RY, wire, -1, {angle, 0, 0}, RotOrder::ZYZ};
}
GateOp rz(int wire, double angle) {
    return {GateKind::RZ, wire, -1, {angle, 0, 0}, RotOrder::ZYZ};
}
GateOp rot(int wire, double a, double b, double c, RotOrder order) {
    return {GateKind::Rot, wire, -1, {a, b, c}, order};
}
GateOp h(int wire) { return {GateKind::H, wire, -1, {0, 0, 0}, RotOrder::ZYZ}; }
GateOp cnot(int control, int target) {
    return {GateKind::CNOT, control, target, {0, 0, 0}, RotOrder::ZYZ};
}
}  // namespace gate

bool operator==(const GateOp& a, const GateOp& b) {
    return a.kind == b.kind && a.wire == b.wire && a.wire2 == b.wire2 &&
           a.angles == b.angles && a.rot_order == b.rot_order;
}

bool operator==(const Circuit& a, const Circuit& b) {
    return a.n_qubits == b.n_qubits && a.ops == b.ops;
}

void validate_gate(const GateOp& op, int n_qubits) {
    if (op.wire < 0 || op.wire >= n_qubits) {
        throw std::out_of_range("gate wire " + std::to_string(op.wire) +
                                " out of range for " + std::to_string(n_qubits) +
                                " qubits");
    }
    if (op.kind == GateKind::CNOT) {
        if (op.wire2 < 0 || op.wire2 >= n_qubits) {
            throw std::out_of_range("CNOT target " + std::to_string(op.wire2) +
                                    " out of range for " +
                                    std::to_string(n_qubits) + " qubits");
        }
        if (op.wire == op.wire2) {
            throw std::invalid_argument("CNOT control equals target (wire " +
                                        std::to_string(op.wire) + ")");
        }
    }
    for (double a : op.angles) {
        if (!std::isfinite(a)) {
            throw std::invalid_argument("gate angle is not finite");
        }
    }
}

std::array<std::complex<double>, 4> gate_unitary(const GateOp& op) {
    switch (op.kind) {
        case GateKind::RX:
            return mat_rx(op.angles[0]);
        case GateKind::RY:
            return mat_ry(op.angles[0]);
        case GateKind::RZ:
            return mat_rz(op.angles[0]);
        case GateKind::H:
            return mat_h();
        case GateKind::Rot: {
            const Mat2 first = mat_rz(op.angles[0]);
            const Mat2 second = mat_ry(op.angles[1]);
            const Mat2 third = op.rot_order == RotOrder::ZYZ
                                   ? mat_rz(op.angles[2])
                                   : mat_rx(op.angles[2]);
            return compose(third, compose(second, first));
        }
        case GateKind::CNOT:
            break;
    }
    throw std::invalid_argument("gate_unitary: CNOT has no 2x2 unitary");
}

void apply_gate_in_place(StateVector& state, const GateOp& op) {
    validate_gate(op, state.n_qubits);
    const auto& k = kernels::active();
    if (op.kind == GateKind::CNOT) {
        k.apply_cnot(state.amps.data(), state.dim(),
                     wire_mask(op.wire, state.n_qubits),
                     wire_mask(op.wire2, state.n_qubits));
        return;
    }
    const Mat2 u = gate_unitary(op);
    k.apply_single(state.amps.data(), state.dim(),
                   wire_mask(op.wire, state.n_qubits), u.data());
}

StateVector apply_gate(StateVector state, const GateOp& op) {
    apply_gate_in_place(state, op);
    return state;
}

void run_circuit_in_place(StateVector& state, const Circuit& circuit) {
    if (circuit.n_qubits != state.n_qubits) {
        throw std::invalid_argument("circuit register size " +
                                    std::to_string(circuit.n_qubits) +
                                    " does not match state register " +
                                    std::to_string(state.n_qubits));
    }
    for (const GateOp& op : circuit.ops) apply_gate_in_place(state, op);
}

StateVector simulate(const Circuit& circuit) {
    StateVector s = new_zero_state(circuit.n_qubits);
    run_circuit_in_place(s, circuit);
    return s;
}

double expectation_z(const StateVector& state, int wire) {
    if (wire < 0 || wire >= state.n_qubits) {
        throw std::out_of_range("expectation_z: wire " + std::to_string(wire) +
                                " out of range");
    }
    return kernels::active().expect_z(state.amps.data(), state.dim(),
                                      wire_mask(wire, state.n_qubits));
}

double sample_expectation_z(const StateVector& state, int wire,
                            std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw std::invalid_argument("sample_expectation_z: shots must be >= 1");
    }
    const double z = expectation_z(state, wire);
    double p = 0.5 * (1.0 + z);
    if (p < 0.0) p = 0.0;
    if (p > 1.0) p = 1.0;
    std::mt19937_64 rng(seed);
    std::int64_t plus = 0;
    for (std::int64_t s = 0; s < shots; ++s) {
        // 53 explicit mantissa bits -> uniform double in [0, 1).
        const double r =
            static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (r < p) ++plus;
    }
    return static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
}

double state_norm(const StateVector& state) {
    return std::sqrt(
        kernels::active().norm_sq(state.amps.data(), state.dim()));
}

}  // namespace qimpc
