#include <atomic>
#include <cstdlib>
#include <cstring>

#include "microsing/error.hpp"
#include "microsing/simd.hpp"

namespace microsing::simd {

namespace {

struct Table {
    Backend backend;
    double (*weighted_norm2)(const double*, const cplx*, std::size_t) noexcept;
    double (*norm2)(const cplx*, std::size_t) noexcept;
    double (*max_abs)(const cplx*, std::size_t) noexcept;
    void (*cmul_acc)(cplx*, const cplx*, const cplx*, std::size_t) noexcept;
    void (*caxpy)(cplx*, cplx, const cplx*, std::size_t) noexcept;
};

constexpr Table kScalar{Backend::Scalar, scalar::weighted_norm2, scalar::norm2, scalar::max_abs,
                        scalar::cmul_acc, scalar::caxpy};
constexpr Table kAvx2{Backend::Avx2, avx2::weighted_norm2, avx2::norm2, avx2::max_abs,
                      avx2::cmul_acc, avx2::caxpy};

bool detect_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

// MICROSING_SIMD=scalar pins the reference kernels
const Table* best_table() noexcept {
    const char* env = std::getenv("MICROSING_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &kScalar;
    return detect_avx2() ? &kAvx2 : &kScalar;
}

std::atomic<const Table*>& current() {
    static std::atomic<const Table*> table{best_table()};
    return table;
}

inline const Table& T() { return *current().load(std::memory_order_relaxed); }

}  // namespace

const char* to_string(Backend b) noexcept { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() noexcept {
    static const bool ok = detect_avx2();
    return ok;
}

Backend active_backend() noexcept { return T().backend; }

void force_backend(Backend b) {
    if (b == Backend::Avx2) {
        require(avx2_available(), ErrorKind::Unsupported, "AVX2/FMA not available on this CPU");
        current().store(&kAvx2);
    } else {
        current().store(&kScalar);
    }
}

void reset_backend() noexcept { current().store(best_table()); }

double weighted_norm2(const double* w, const cplx* z, std::size_t n) noexcept { return T().weighted_norm2(w, z, n); }
double norm2(const cplx* z, std::size_t n) noexcept { return T().norm2(z, n); }
double max_abs(const cplx* z, std::size_t n) noexcept { return T().max_abs(z, n); }
void cmul_acc(cplx* y, const cplx* a, const cplx* b, std::size_t n) noexcept { T().cmul_acc(y, a, b, n); }
void caxpy(cplx* y, cplx alpha, const cplx* x, std::size_t n) noexcept { T().caxpy(y, alpha, x, n); }

}  // namespace microsing::simd
