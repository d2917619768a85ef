#include <algorithm>
#include <cmath>

#include "microsing/simd.hpp"

namespace microsing::simd::scalar {

// Complex arithmetic is spelled out on re/im parts so the reference does not
// depend on the library's NaN-aware complex multiply.

double weighted_norm2(const double* w, const cplx* z, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        acc += w[i] * (re * re + im * im);
    }
    return acc;
}

double norm2(const cplx* z, std::size_t n) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        acc += re * re + im * im;
    }
    return acc;
}

double max_abs(const cplx* z, std::size_t n) noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        best = std::max(best, re * re + im * im);
    }
    return std::sqrt(best);
}

void cmul_acc(cplx* y, const cplx* a, const cplx* b, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        y[i] = cplx(y[i].real() + (ar * br - ai * bi), y[i].imag() + (ar * bi + ai * br));
    }
}

void caxpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) noexcept {
    const double ar = alpha.real(), ai = alpha.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
    }
}

}  // namespace microsing::simd::scalar
