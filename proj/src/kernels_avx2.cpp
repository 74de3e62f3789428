// AVX2 kernel variants. One __m256d holds two complex<double> amplitudes;
// all register dimensions are powers of two >= 2, so there are no ragged
// tails. Compiled with -mavx2 -mfma and reached only through the runtime
// dispatch table, never called on CPUs without AVX2.
#include "qimpc/kernels.hpp"

#ifdef QIMPC_HAVE_AVX2

#include <immintrin.h>

#include <utility>

namespace qimpc::kernels {
namespace {

// (vector of complex) * (broadcast complex with parts re, im), per lane pair:
//   real: v.re*re - v.im*im,  imag: v.im*re + v.re*im
inline __m256d cmul(__m256d v, __m256d re, __m256d im) {
    const __m256d sw = _mm256_permute_pd(v, 0x5);  // swap re/im per complex
    return _mm256_fmaddsub_pd(v, re, _mm256_mul_pd(sw, im));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_pd(s, _mm_unpackhi_pd(s, s)));
}

void apply_single_avx2(std::complex<double>* amps, std::size_t dim,
                       std::size_t stride, const std::complex<double>* u) {
    double* p = reinterpret_cast<double*>(amps);
    if (stride == 1) {
        // Both amplitudes of each pair live in one vector: (a0, a1).
        const __m256d dre = _mm256_setr_pd(u[0].real(), u[0].real(),
                                           u[3].real(), u[3].real());
        const __m256d dim_ = _mm256_setr_pd(u[0].imag(), u[0].imag(),
                                            u[3].imag(), u[3].imag());
        const __m256d ore = _mm256_setr_pd(u[1].real(), u[1].real(),
                                           u[2].real(), u[2].real());
        const __m256d oim = _mm256_setr_pd(u[1].imag(), u[1].imag(),
                                           u[2].imag(), u[2].imag());
        for (std::size_t i = 0; i < dim; i += 2) {
            const __m256d v = _mm256_loadu_pd(p + 2 * i);
            const __m256d sw = _mm256_permute2f128_pd(v, v, 0x01);  // (a1, a0)
            _mm256_storeu_pd(p + 2 * i,
                             _mm256_add_pd(cmul(v, dre, dim_), cmul(sw, ore, oim)));
        }
        return;
    }
    const __m256d u00re = _mm256_set1_pd(u[0].real());
    const __m256d u00im = _mm256_set1_pd(u[0].imag());
    const __m256d u01re = _mm256_set1_pd(u[1].real());
    const __m256d u01im = _mm256_set1_pd(u[1].imag());
    const __m256d u10re = _mm256_set1_pd(u[2].real());
    const __m256d u10im = _mm256_set1_pd(u[2].imag());
    const __m256d u11re = _mm256_set1_pd(u[3].real());
    const __m256d u11im = _mm256_set1_pd(u[3].imag());
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; i += 2) {
            const __m256d v0 = _mm256_loadu_pd(p + 2 * i);
            const __m256d v1 = _mm256_loadu_pd(p + 2 * (i + stride));
            const __m256d n0 =
                _mm256_add_pd(cmul(v0, u00re, u00im), cmul(v1, u01re, u01im));
            const __m256d n1 =
                _mm256_add_pd(cmul(v0, u10re, u10im), cmul(v1, u11re, u11im));
            _mm256_storeu_pd(p + 2 * i, n0);
            _mm256_storeu_pd(p + 2 * (i + stride), n1);
        }
    }
}

void apply_cnot_avx2(std::complex<double>* amps, std::size_t dim,
                     std::size_t ctrl_mask, std::size_t tgt_mask) {
    double* p = reinterpret_cast<double*>(amps);
    if (ctrl_mask >= 2 && tgt_mask >= 2) {
        for (std::size_t i = 0; i < dim; i += 2) {
            if ((i & ctrl_mask) != 0 && (i & tgt_mask) == 0) {
                const std::size_t j = i | tgt_mask;
                const __m256d a = _mm256_loadu_pd(p + 2 * i);
                const __m256d b = _mm256_loadu_pd(p + 2 * j);
                _mm256_storeu_pd(p + 2 * i, b);
                _mm256_storeu_pd(p + 2 * j, a);
            }
        }
        return;
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & ctrl_mask) != 0 && (i & tgt_mask) == 0) {
            std::swap(amps[i], amps[i | tgt_mask]);
        }
    }
}

double expect_z_avx2(const std::complex<double>* amps, std::size_t dim,
                     std::size_t mask) {
    const double* p = reinterpret_cast<const double*>(amps);
    if (mask == 1) {
        const __m256d sgn = _mm256_setr_pd(1.0, 1.0, -1.0, -1.0);
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < dim; i += 2) {
            const __m256d v = _mm256_loadu_pd(p + 2 * i);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(sgn, _mm256_mul_pd(v, v)));
        }
        return hsum(acc);
    }
    __m256d plus = _mm256_setzero_pd();
    __m256d minus = _mm256_setzero_pd();
    for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; i += 2) {
            const __m256d v = _mm256_loadu_pd(p + 2 * i);
            plus = _mm256_fmadd_pd(v, v, plus);
        }
        for (std::size_t i = base + mask; i < base + 2 * mask; i += 2) {
            const __m256d v = _mm256_loadu_pd(p + 2 * i);
            minus = _mm256_fmadd_pd(v, v, minus);
        }
    }
    return hsum(plus) - hsum(minus);
}

double norm_sq_avx2(const std::complex<double>* amps, std::size_t dim) {
    const double* p = reinterpret_cast<const double*>(amps);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < dim; i += 2) {
        const __m256d v = _mm256_loadu_pd(p + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    return hsum(acc);
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{"avx2", apply_single_avx2, apply_cnot_avx2,
                                   expect_z_avx2, norm_sq_avx2};
    return table;
}

}  // namespace qimpc::kernels

#endif  // QIMPC_HAVE_AVX2
