#pragma once

#include <unistd.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qimpc/statevector.hpp"

namespace qimpc::test {

inline double uniform(std::mt19937_64& rng, double a, double b) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
}

/// Random circuit over {RX, RY, RZ, Rot, H, CNOT} with angles in [-pi, pi].
inline Circuit random_circuit(int n_qubits, int n_gates, std::mt19937_64& rng) {
    Circuit c;
    c.n_qubits = n_qubits;
    for (int g = 0; g < n_gates; ++g) {
        const int kind = static_cast<int>(rng() % 6);
        const int w = static_cast<int>(rng() % static_cast<unsigned>(n_qubits));
        const double a = uniform(rng, -3.14159, 3.14159);
        switch (kind) {
            case 0:
                c.ops.push_back(gate::rx(w, a));
                break;
            case 1:
                c.ops.push_back(gate::ry(w, a));
                break;
            case 2:
                c.ops.push_back(gate::rz(w, a));
                break;
            case 3:
                c.ops.push_back(gate::rot(w, a, uniform(rng, -3.14, 3.14),
                                          uniform(rng, -3.14, 3.14),
                                          (rng() & 1) ? RotOrder::ZYZ
                                                      : RotOrder::ZYX));
                break;
            case 4:
                c.ops.push_back(gate::h(w));
                break;
            default: {
                if (n_qubits < 2) {
                    c.ops.push_back(gate::h(w));
                    break;
                }
                int t = static_cast<int>(rng() % static_cast<unsigned>(n_qubits));
                if (t == w) t = (t + 1) % n_qubits;
                c.ops.push_back(gate::cnot(w, t));
                break;
            }
        }
    }
    return c;
}

inline double max_amp_diff(const std::vector<std::complex<double>>& a,
                           const std::vector<std::complex<double>>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

/// Unique scratch directory under the system temp root.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    const auto root = std::filesystem::temp_directory_path() /
                      ("qimpc_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(root);
    std::filesystem::create_directories(root);
    return root;
}

}  // namespace qimpc::test
