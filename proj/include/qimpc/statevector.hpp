#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace qimpc {

/// Dense statevector of a small pure register.
///
/// Bit ordering convention, used everywhere in this project: qubit 0 is the
/// MOST significant bit of the basis index (circuit diagrams read top-down).
/// For n qubits the amplitude of |b_0 b_1 ... b_{n-1}> lives at index
/// (b_0 << (n-1)) | ... | b_{n-1}.
struct StateVector {
    int n_qubits = 0;
    std::vector<std::complex<double>> amps;

    static constexpr int kMaxQubits = 12;

    std::size_t dim() const { return amps.size(); }
};

/// |0...0> on `n_qubits` in [1, 12].
StateVector new_zero_state(int n_qubits);

enum class GateKind { RX, RY, RZ, Rot, H, CNOT };

/// Temporal decomposition of the composite Rot gate: which primitive
/// rotations are applied, in order, with angles (a, b, c).
enum class RotOrder {
    ZYZ,  // RZ(a), RY(b), RZ(c) — canonical, full SU(2) coverage
    ZYX,  // RZ(a), RY(b), RX(c) — alternate ordering kept for fidelity runs
};

struct GateOp {
    GateKind kind = GateKind::RX;
    int wire = 0;    // target of single-qubit kinds, control of CNOT
    int wire2 = -1;  // CNOT target
    std::array<double, 3> angles{0.0, 0.0, 0.0};
    RotOrder rot_order = RotOrder::ZYZ;
};

namespace gate {
GateOp rx(int wire, double angle);
GateOp ry(int wire, double angle);
GateOp rz(int wire, double angle);
GateOp rot(int wire, double a, double b, double c,
           RotOrder order = RotOrder::ZYZ);
GateOp h(int wire);
GateOp cnot(int control, int target);
}  // namespace gate

struct Circuit {
    int n_qubits = 0;
    std::vector<GateOp> ops;
};

bool operator==(const GateOp&, const GateOp&);
bool operator==(const Circuit&, const Circuit&);

/// Throws std::out_of_range / std::invalid_argument if the op does not fit an
/// n-qubit register (wire range, CNOT control != target).
void validate_gate(const GateOp& op, int n_qubits);

/// Row-major 2x2 unitary of a single-qubit op (Rot composed per its order).
std::array<std::complex<double>, 4> gate_unitary(const GateOp& op);

void apply_gate_in_place(StateVector& state, const GateOp& op);
StateVector apply_gate(StateVector state, const GateOp& op);

void run_circuit_in_place(StateVector& state, const Circuit& circuit);
/// Run `circuit` on |0...0>.
StateVector simulate(const Circuit& circuit);

/// <Z_wire> = sum_b (+-1) |amp_b|^2, + where bit `wire` of b is 0.
double expectation_z(const StateVector& state, int wire);

/// Mean of `shots` independent +-1 outcomes with P(+1) = (1 + <Z>)/2.
/// Deterministic for a fixed seed.
double sample_expectation_z(const StateVector& state, int wire,
                            std::int64_t shots, std::uint64_t seed);

double state_norm(const StateVector& state);

}  // namespace qimpc
