#include "qimpc/kernels.hpp"

#include <utility>

namespace qimpc::kernels {
namespace {

void apply_single_scalar(std::complex<double>* amps, std::size_t dim,
                         std::size_t stride, const std::complex<double>* u) {
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const std::complex<double> a0 = amps[i];
            const std::complex<double> a1 = amps[i + stride];
            amps[i] = u[0] * a0 + u[1] * a1;
            amps[i + stride] = u[2] * a0 + u[3] * a1;
        }
    }
}

void apply_cnot_scalar(std::complex<double>* amps, std::size_t dim,
                       std::size_t ctrl_mask, std::size_t tgt_mask) {
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & ctrl_mask) != 0 && (i & tgt_mask) == 0) {
            std::swap(amps[i], amps[i | tgt_mask]);
        }
    }
}

double expect_z_scalar(const std::complex<double>* amps, std::size_t dim,
                       std::size_t mask) {
    double plus = 0.0;
    double minus = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double p = std::norm(amps[i]);
        if ((i & mask) == 0) {
            plus += p;
        } else {
            minus += p;
        }
    }
    return plus - minus;
}

double norm_sq_scalar(const std::complex<double>* amps, std::size_t dim) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) acc += std::norm(amps[i]);
    return acc;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar", apply_single_scalar,
                                   apply_cnot_scalar, expect_z_scalar,
                                   norm_sq_scalar};
    return table;
}

}  // namespace qimpc::kernels
