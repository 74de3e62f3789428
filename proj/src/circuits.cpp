#include "qimpc/circuits.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "qimpc/rng_util.hpp"

namespace qimpc {

namespace {

void validate_encoder(const EncoderSpec& spec, std::size_t n_features,
                      int n_qubits) {
    if (spec.feature_wires.size() != n_features) {
        throw std::invalid_argument(
            "encoder: " + std::to_string(n_features) + " features but " +
            std::to_string(spec.feature_wires.size()) + " feature wires");
    }
    std::set<int> seen;
    for (int w : spec.feature_wires) {
        if (w < 0 || w >= n_qubits) {
            throw std::invalid_argument("encoder: feature wire " +
                                        std::to_string(w) + " out of range");
        }
        if (!seen.insert(w).second) {
            throw std::invalid_argument("encoder: duplicate feature wire " +
                                        std::to_string(w));
        }
    }
}

}  // namespace

ParamTensor zero_params(const AnsatzSpec& spec) {
    ParamTensor t;
    t.n_layers = spec.n_layers;
    t.n_qubits = spec.n_qubits;
    t.values.assign(static_cast<std::size_t>(spec.param_count()), 0.0);
    return t;
}

ParamTensor random_params(const AnsatzSpec& spec, std::uint64_t seed,
                          double range) {
    ParamTensor t = zero_params(spec);
    std::mt19937_64 rng(mix_seed(seed, 0x7068657461696e69ull));
    for (double& v : t.values) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = (2.0 * u - 1.0) * range;
    }
    return t;
}

void validate_params(const AnsatzSpec& spec, const ParamTensor& theta) {
    if (theta.n_layers != spec.n_layers || theta.n_qubits != spec.n_qubits ||
        theta.values.size() != static_cast<std::size_t>(spec.param_count())) {
        throw std::invalid_argument("params: shape does not match ansatz (" +
                                    std::to_string(spec.n_layers) + " layers x " +
                                    std::to_string(spec.n_qubits) +
                                    " qubits x 3)");
    }
    for (double v : theta.values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("params: non-finite entry");
        }
    }
}

void validate_head(const ControlHead& head, int n_qubits) {
    const std::size_t m = head.readout_wires.size();
    if (m == 0) throw std::invalid_argument("head: no readout wires");
    if (head.gains.size() != m || head.offsets.size() != m) {
        throw std::invalid_argument("head: gains/offsets must match readouts");
    }
    for (int w : head.readout_wires) {
        if (w < 0 || w >= n_qubits) {
            throw std::invalid_argument("head: readout wire " +
                                        std::to_string(w) + " out of range");
        }
    }
    for (double g : head.gains) {
        if (g == 0.0 || !std::isfinite(g)) {
            throw std::invalid_argument("head: gains must be nonzero");
        }
    }
}

Circuit build_encoder(const EncoderSpec& spec, std::span<const double> x,
                      int n_qubits) {
    validate_encoder(spec, x.size(), n_qubits);
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("encoder: non-finite feature");
        }
    }
    constexpr double pi = std::numbers::pi;
    Circuit c;
    c.n_qubits = n_qubits;
    switch (spec.kind) {
        case EncoderKind::RotationTriple:
            for (std::size_t i = 0; i < x.size(); ++i) {
                const int w = spec.feature_wires[i];
                c.ops.push_back(gate::ry(w, pi * x[i]));
                c.ops.push_back(gate::rx(w, pi * (x[i] + 0.5)));
                c.ops.push_back(gate::rz(w, pi * x[i] / 2.0));
            }
            break;
        case EncoderKind::HadamardRY:
            for (int w : spec.feature_wires) c.ops.push_back(gate::h(w));
            for (std::size_t i = 0; i < x.size(); ++i) {
                c.ops.push_back(gate::ry(spec.feature_wires[i], x[i]));
            }
            break;
        case EncoderKind::AngleRY:
            for (std::size_t i = 0; i < x.size(); ++i) {
                c.ops.push_back(gate::ry(spec.feature_wires[i], x[i]));
            }
            break;
    }
    return c;
}

Circuit build_ansatz(const AnsatzSpec& spec, const ParamTensor& theta) {
    if (spec.n_qubits < 1 || spec.n_layers < 1) {
        throw std::invalid_argument("ansatz: needs >= 1 qubit and >= 1 layer");
    }
    validate_params(spec, theta);
    Circuit c;
    c.n_qubits = spec.n_qubits;
    for (int layer = 0; layer < spec.n_layers; ++layer) {
        for (int q = 0; q < spec.n_qubits; ++q) {
            c.ops.push_back(gate::rot(q, theta.at(layer, q, 0),
                                      theta.at(layer, q, 1),
                                      theta.at(layer, q, 2), spec.rot_order));
        }
        for (int q = 0; q + 1 < spec.n_qubits; ++q) {
            c.ops.push_back(gate::cnot(q, q + 1));
        }
        if (spec.entanglement == Entanglement::Ring && spec.n_qubits >= 2) {
            c.ops.push_back(gate::cnot(spec.n_qubits - 1, 0));
        }
    }
    return c;
}

namespace {

std::vector<double> read_exact(const StateVector& st, const ControlHead& head) {
    std::vector<double> raw(head.readout_wires.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        raw[i] = expectation_z(st, head.readout_wires[i]);
    }
    return raw;
}

}  // namespace

ControlEval evaluate_controls(const QuantumPolicy& policy,
                              const ParamTensor& theta,
                              std::span<const double> x,
                              std::optional<std::int64_t> shots,
                              std::uint64_t seed) {
    const int n = policy.ansatz.n_qubits;
    validate_head(policy.head, n);
    StateVector st = simulate(build_encoder(policy.encoder, x, n));
    run_circuit_in_place(st, build_ansatz(policy.ansatz, theta));

    ControlEval out;
    const std::size_t m = policy.head.readout_wires.size();
    out.raw.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const int w = policy.head.readout_wires[i];
        out.raw[i] = shots ? sample_expectation_z(st, w, *shots, mix_seed(seed, i))
                           : expectation_z(st, w);
    }
    out.physical.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.physical[i] = policy.head.gains[i] * out.raw[i] + policy.head.offsets[i];
    }
    return out;
}

std::vector<double> parameter_shift_jacobian(const QuantumPolicy& policy,
                                             const ParamTensor& theta,
                                             std::span<const double> x,
                                             std::optional<std::int64_t> shots) {
    if (shots) {
        throw std::logic_error(
            "parameter_shift_jacobian: finite-shot mode unsupported, the shift "
            "rule is exact only on expectations");
    }
    const int n = policy.ansatz.n_qubits;
    validate_head(policy.head, n);
    validate_params(policy.ansatz, theta);

    // The encoder does not depend on theta; prepare its state once.
    const StateVector encoded = simulate(build_encoder(policy.encoder, x, n));
    const auto eval_raw = [&](const ParamTensor& t) {
        StateVector st = encoded;
        run_circuit_in_place(st, build_ansatz(policy.ansatz, t));
        return read_exact(st, policy.head);
    };

    const std::size_t m = policy.head.readout_wires.size();
    const std::size_t p_count = theta.size();
    std::vector<double> jac(m * p_count, 0.0);

    // Backward lightcone over the ansatz: a Rot whose wire never connects
    // forward to a readout wire cannot influence any readout, so its three
    // columns are exactly zero and need no circuit evaluations.
    std::vector<bool> rot_relevant(
        static_cast<std::size_t>(policy.ansatz.n_layers * n), false);
    {
        std::vector<bool> in_cone(static_cast<std::size_t>(n), false);
        for (int w : policy.head.readout_wires) {
            in_cone[static_cast<std::size_t>(w)] = true;
        }
        const Circuit ansatz = build_ansatz(policy.ansatz, theta);
        std::size_t rot_seen = rot_relevant.size();
        for (auto it = ansatz.ops.rbegin(); it != ansatz.ops.rend(); ++it) {
            if (it->kind == GateKind::CNOT) {
                const auto c = static_cast<std::size_t>(it->wire);
                const auto t = static_cast<std::size_t>(it->wire2);
                if (in_cone[c] || in_cone[t]) {
                    in_cone[c] = true;
                    in_cone[t] = true;
                }
            } else if (it->kind == GateKind::Rot) {
                --rot_seen;
                rot_relevant[rot_seen] =
                    in_cone[static_cast<std::size_t>(it->wire)];
            }
        }
    }

    ParamTensor shifted = theta;
    constexpr double shift = std::numbers::pi / 2.0;
    for (std::size_t p = 0; p < p_count; ++p) {
        if (!rot_relevant[p / 3]) continue;
        const double original = shifted.values[p];
        shifted.values[p] = original + shift;
        const std::vector<double> plus = eval_raw(shifted);
        shifted.values[p] = original - shift;
        const std::vector<double> minus = eval_raw(shifted);
        shifted.values[p] = original;
        for (std::size_t i = 0; i < m; ++i) {
            jac[i * p_count + p] = 0.5 * (plus[i] - minus[i]);
        }
    }
    return jac;
}

}  // namespace qimpc
