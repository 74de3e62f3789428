#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qimpc/statevector.hpp"

namespace qimpc {

enum class EncoderKind {
    RotationTriple,  // per feature x: RY(pi x), RX(pi (x + 1/2)), RZ(pi x / 2)
    HadamardRY,      // H on each feature wire, then RY(x) per wire
    AngleRY,         // RY(x) per feature wire
};

struct EncoderSpec {
    EncoderKind kind = EncoderKind::AngleRY;
    std::vector<int> feature_wires;  // feature index -> wire
};

enum class Entanglement {
    Linear,  // CNOT i -> i+1
    Ring,    // Linear plus CNOT last -> first
};

struct AnsatzSpec {
    int n_qubits = 1;
    int n_layers = 1;
    Entanglement entanglement = Entanglement::Linear;
    RotOrder rot_order = RotOrder::ZYZ;

    int param_count() const { return n_layers * n_qubits * 3; }
};

/// Trainable ansatz angles, shape (layer, qubit, axis), radians.
struct ParamTensor {
    int n_layers = 0;
    int n_qubits = 0;
    std::vector<double> values;  // flat, layer-major then qubit then axis

    double& at(int layer, int qubit, int axis) {
        return values[static_cast<std::size_t>((layer * n_qubits + qubit) * 3 +
                                               axis)];
    }
    double at(int layer, int qubit, int axis) const {
        return values[static_cast<std::size_t>((layer * n_qubits + qubit) * 3 +
                                               axis)];
    }
    std::size_t size() const { return values.size(); }
};

ParamTensor zero_params(const AnsatzSpec& spec);
/// Uniform on [-range, range], seeded.
ParamTensor random_params(const AnsatzSpec& spec, std::uint64_t seed,
                          double range = 0.1);
/// Throws std::invalid_argument if theta's shape does not match the spec or
/// any entry is non-finite.
void validate_params(const AnsatzSpec& spec, const ParamTensor& theta);

/// Maps raw Pauli-Z readouts in [-1, 1] to physical control units through a
/// strictly monotone per-dimension affine map.
struct ControlHead {
    std::vector<int> readout_wires;
    std::vector<double> gains;    // all nonzero
    std::vector<double> offsets;
};

void validate_head(const ControlHead& head, int n_qubits);

struct QuantumPolicy {
    EncoderSpec encoder;
    AnsatzSpec ansatz;
    ControlHead head;
};

/// Deterministic state-encoding circuit; identical x yields identical gates.
Circuit build_encoder(const EncoderSpec& spec, std::span<const double> x,
                      int n_qubits);

/// Per layer: Rot on every qubit, then the entangling CNOT pattern.
Circuit build_ansatz(const AnsatzSpec& spec, const ParamTensor& theta);

struct ControlEval {
    std::vector<double> raw;       // <Z> per readout wire, in [-1, 1]
    std::vector<double> physical;  // gain * raw + offset
};

/// Encode x, apply the ansatz, read the control outputs. Exact expectations
/// by default; finite-shot sampling when `shots` is set (deterministic in
/// `seed`). Pure function of (theta, x, seed).
ControlEval evaluate_controls(const QuantumPolicy& policy,
                              const ParamTensor& theta,
                              std::span<const double> x,
                              std::optional<std::int64_t> shots = std::nullopt,
                              std::uint64_t seed = 0);

/// d raw_i / d theta_p via the parameter-shift rule,
/// [raw_i(theta_p + pi/2) - raw_i(theta_p - pi/2)] / 2 — exact for Pauli
/// rotations. Row-major m x P. Exact-expectation mode only: a set `shots`
/// is rejected, the shift rule holds for expectations, not samples.
std::vector<double> parameter_shift_jacobian(
    const QuantumPolicy& policy, const ParamTensor& theta,
    std::span<const double> x,
    std::optional<std::int64_t> shots = std::nullopt);

}  // namespace qimpc
