#pragma once
// Hot inner loops shared by the norm, quantization and localization code.
// Each kernel has a scalar reference and an AVX2/FMA variant; the variant is
// chosen once at runtime from CPUID and can be pinned for equivalence tests.

#include <complex>
#include <cstddef>

namespace microsing::simd {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

const char* to_string(Backend b) noexcept;
bool avx2_available() noexcept;
Backend active_backend() noexcept;
// Pins a backend (tests only). Throws Error(Unsupported) when the CPU lacks it.
void force_backend(Backend b);
void reset_backend() noexcept;

// sum_i w[i] * |z[i]|^2
double weighted_norm2(const double* w, const cplx* z, std::size_t n) noexcept;
// sum_i |z[i]|^2
double norm2(const cplx* z, std::size_t n) noexcept;
// max_i |z[i]|
double max_abs(const cplx* z, std::size_t n) noexcept;
// y[i] += a[i] * b[i]
void cmul_acc(cplx* y, const cplx* a, const cplx* b, std::size_t n) noexcept;
// y[i] += alpha * x[i]
void caxpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) noexcept;

#define MICROSING_SIMD_KERNEL_DECLS                                                  \
    double weighted_norm2(const double* w, const cplx* z, std::size_t n) noexcept;   \
    double norm2(const cplx* z, std::size_t n) noexcept;                             \
    double max_abs(const cplx* z, std::size_t n) noexcept;                           \
    void cmul_acc(cplx* y, const cplx* a, const cplx* b, std::size_t n) noexcept;    \
    void caxpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) noexcept;

namespace scalar {
MICROSING_SIMD_KERNEL_DECLS
}
namespace avx2 {
MICROSING_SIMD_KERNEL_DECLS
}

#undef MICROSING_SIMD_KERNEL_DECLS

}  // namespace microsing::simd
