#include "qimpc/dense_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qimpc {

namespace {

using C = std::complex<double>;

// Local 2x2 gate definitions, written out independently of the kernel path.
struct M2 {
    C a, b, c, d;  // [[a, b], [c, d]]
};

M2 mul2(const M2& x, const M2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

M2 oracle_gate2(const GateOp& op) {
    const double t = op.angles[0];
    switch (op.kind) {
        case GateKind::RX:
            return {C(std::cos(t / 2), 0), C(0, -std::sin(t / 2)),
                    C(0, -std::sin(t / 2)), C(std::cos(t / 2), 0)};
        case GateKind::RY:
            return {C(std::cos(t / 2), 0), C(-std::sin(t / 2), 0),
                    C(std::sin(t / 2), 0), C(std::cos(t / 2), 0)};
        case GateKind::RZ:
            return {C(std::cos(t / 2), -std::sin(t / 2)), C(0, 0), C(0, 0),
                    C(std::cos(t / 2), std::sin(t / 2))};
        case GateKind::H: {
            const double r = std::sqrt(0.5);
            return {C(r, 0), C(r, 0), C(r, 0), C(-r, 0)};
        }
        case GateKind::Rot: {
            const M2 first = oracle_gate2(gate::rz(0, op.angles[0]));
            const M2 second = oracle_gate2(gate::ry(0, op.angles[1]));
            const M2 third = op.rot_order == RotOrder::ZYZ
                                 ? oracle_gate2(gate::rz(0, op.angles[2]))
                                 : oracle_gate2(gate::rx(0, op.angles[2]));
            return mul2(third, mul2(second, first));
        }
        case GateKind::CNOT:
            break;
    }
    throw std::invalid_argument("oracle_gate2: CNOT handled separately");
}

// Embed a 2x2 acting on `wire` (qubit 0 = MSB) into the full register matrix.
CMatrix embed_single(int n_qubits, int wire, const M2& u) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t mask = std::size_t{1} << (n_qubits - 1 - wire);
    CMatrix out{dim, std::vector<C>(dim * dim, C{0, 0})};
    for (std::size_t col = 0; col < dim; ++col) {
        const bool bit = (col & mask) != 0;
        const std::size_t row0 = col & ~mask;
        const std::size_t row1 = col | mask;
        out.at(row0, col) = bit ? u.b : u.a;
        out.at(row1, col) = bit ? u.d : u.c;
    }
    return out;
}

CMatrix embed_cnot(int n_qubits, int control, int target) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t cmask = std::size_t{1} << (n_qubits - 1 - control);
    const std::size_t tmask = std::size_t{1} << (n_qubits - 1 - target);
    CMatrix out{dim, std::vector<C>(dim * dim, C{0, 0})};
    for (std::size_t col = 0; col < dim; ++col) {
        const std::size_t row = (col & cmask) != 0 ? (col ^ tmask) : col;
        out.at(row, col) = C{1, 0};
    }
    return out;
}

}  // namespace

CMatrix cmatrix_identity(std::size_t dim) {
    CMatrix out{dim, std::vector<C>(dim * dim, C{0, 0})};
    for (std::size_t i = 0; i < dim; ++i) out.at(i, i) = C{1, 0};
    return out;
}

CMatrix cmatrix_mul(const CMatrix& a, const CMatrix& b) {
    if (a.dim != b.dim) {
        throw std::invalid_argument("cmatrix_mul: dimension mismatch");
    }
    const std::size_t dim = a.dim;
    CMatrix out{dim, std::vector<C>(dim * dim, C{0, 0})};
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            const C aik = a.at(i, k);
            if (aik == C{0, 0}) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                out.at(i, j) += aik * b.at(k, j);
            }
        }
    }
    return out;
}

CMatrix dense_unitary_oracle(const Circuit& circuit) {
    constexpr int kMaxOracleQubits = 6;
    if (circuit.n_qubits < 1 || circuit.n_qubits > kMaxOracleQubits) {
        throw std::invalid_argument(
            "dense_unitary_oracle: register size " +
            std::to_string(circuit.n_qubits) + " outside [1, " +
            std::to_string(kMaxOracleQubits) + "]");
    }
    CMatrix total = cmatrix_identity(std::size_t{1} << circuit.n_qubits);
    for (const GateOp& op : circuit.ops) {
        validate_gate(op, circuit.n_qubits);
        const CMatrix g = op.kind == GateKind::CNOT
                              ? embed_cnot(circuit.n_qubits, op.wire, op.wire2)
                              : embed_single(circuit.n_qubits, op.wire,
                                             oracle_gate2(op));
        total = cmatrix_mul(g, total);  // later gates multiply on the left
    }
    return total;
}

std::vector<std::complex<double>> cmatrix_apply(
    const CMatrix& u, const std::vector<std::complex<double>>& x) {
    if (u.dim != x.size()) {
        throw std::invalid_argument("cmatrix_apply: dimension mismatch");
    }
    std::vector<C> y(u.dim, C{0, 0});
    for (std::size_t i = 0; i < u.dim; ++i) {
        C acc{0, 0};
        for (std::size_t j = 0; j < u.dim; ++j) acc += u.at(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

}  // namespace qimpc
