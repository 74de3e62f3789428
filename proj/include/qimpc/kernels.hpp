#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qimpc::kernels {

// Inner-loop kernels over dense amplitude arrays. `dim` is always a power of
// two (the register dimension). Single-qubit gates act on amplitude pairs
// (i, i + stride) where stride = 2^(n - 1 - wire); qubit 0 is the most
// significant bit of the basis index. Masks passed to the CNOT and Z kernels
// are the same single-bit strides.
struct KernelTable {
    const char* name;
    // amps[i], amps[i+stride] <- u[0..3] (row-major 2x2) applied pairwise.
    void (*apply_single)(std::complex<double>* amps, std::size_t dim,
                         std::size_t stride, const std::complex<double>* u);
    // swap amps[i] <-> amps[i | tgt_mask] wherever (i & ctrl_mask) != 0.
    void (*apply_cnot)(std::complex<double>* amps, std::size_t dim,
                       std::size_t ctrl_mask, std::size_t tgt_mask);
    // sum_i sign(i) * |amps[i]|^2, sign = +1 when (i & mask) == 0 else -1.
    double (*expect_z)(const std::complex<double>* amps, std::size_t dim,
                       std::size_t mask);
    double (*norm_sq)(const std::complex<double>* amps, std::size_t dim);
};

// Currently selected kernel table. Default resolution order: QIMPC_KERNEL
// environment variable ("scalar" or "avx2"), else AVX2 when the CPU supports
// it and it was compiled in, else scalar.
const KernelTable& active();

// Force a specific kernel set by name; returns false if unavailable.
bool select(std::string_view name);

std::vector<std::string> available();

const KernelTable& scalar_table();

}  // namespace qimpc::kernels
