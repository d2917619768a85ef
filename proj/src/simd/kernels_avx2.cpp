// Compiled with -mavx2 -mfma; only reached through dispatch after a CPUID check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "microsing/simd.hpp"

namespace microsing::simd::avx2 {

namespace {

// Two interleaved complex numbers per register: [re0 im0 re1 im1].
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return std::max(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
}

// a * b for interleaved complex pairs
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

}  // namespace

double weighted_norm2(const double* w, const cplx* z, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d z0 = load2(z + i), z1 = load2(z + i + 2);
        const __m256d w0 = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)), 0x50);
        const __m256d w1 = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i + 2)), 0x50);
        acc0 = _mm256_fmadd_pd(_mm256_mul_pd(z0, z0), w0, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_mul_pd(z1, z1), w1, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        acc += w[i] * (re * re + im * im);
    }
    return acc;
}

double norm2(const cplx* z, std::size_t n) noexcept {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d z0 = load2(z + i), z1 = load2(z + i + 2);
        acc0 = _mm256_fmadd_pd(z0, z0, acc0);
        acc1 = _mm256_fmadd_pd(z1, z1, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        acc += re * re + im * im;
    }
    return acc;
}

double max_abs(const cplx* z, std::size_t n) noexcept {
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = load2(z + i);
        const __m256d sq = _mm256_mul_pd(v, v);
        // re^2 + im^2 in both lanes of each pair
        best = _mm256_max_pd(best, _mm256_hadd_pd(sq, sq));
    }
    double m = hmax(best);
    for (; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        m = std::max(m, re * re + im * im);
    }
    return std::sqrt(m);
}

void cmul_acc(cplx* y, const cplx* a, const cplx* b, std::size_t n) noexcept {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul(load2(a + i), load2(b + i))));
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        y[i] = cplx(y[i].real() + (ar * br - ai * bi), y[i].imag() + (ar * bi + ai * br));
    }
}

void caxpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) noexcept {
    const __m256d ar = _mm256_set1_pd(alpha.real());
    const __m256d ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = load2(x + i);
        const __m256d prod = _mm256_fmaddsub_pd(xv, ar, _mm256_mul_pd(_mm256_permute_pd(xv, 0x5), ai));
        store2(y + i, _mm256_add_pd(load2(y + i), prod));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + (alpha.real() * xr - alpha.imag() * xi),
                    y[i].imag() + (alpha.real() * xi + alpha.imag() * xr));
    }
}

}  // namespace microsing::simd::avx2
