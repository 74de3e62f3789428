#pragma once

#include <complex>
#include <vector>

#include "qimpc/statevector.hpp"

namespace qimpc {

/// Row-major square complex matrix.
struct CMatrix {
    std::size_t dim = 0;
    std::vector<std::complex<double>> m;

    std::complex<double>& at(std::size_t r, std::size_t c) {
        return m[r * dim + c];
    }
    const std::complex<double>& at(std::size_t r, std::size_t c) const {
        return m[r * dim + c];
    }
};

CMatrix cmatrix_identity(std::size_t dim);
CMatrix cmatrix_mul(const CMatrix& a, const CMatrix& b);

/// Full 2^n x 2^n unitary of the circuit, built as an explicit product of
/// per-gate embedded matrices. Deliberately shares nothing with the
/// kernel-based statevector path so the two can check each other. Registers
/// above 6 qubits are refused (oracle-size error).
CMatrix dense_unitary_oracle(const Circuit& circuit);

std::vector<std::complex<double>> cmatrix_apply(
    const CMatrix& u, const std::vector<std::complex<double>>& x);

}  // namespace qimpc
