#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "microsing/corpus.hpp"
#include "microsing/error.hpp"
#include "microsing/spectral.hpp"

using namespace microsing;

namespace {
constexpr double pi = std::numbers::pi;

// brute-force graded norm straight from the index-set definition
double brute_graded(const SmoothingKernel& T, int n) {
    double s = 0.0;
    for (int p = -n; p <= 2 * n; ++p)
        for (int q = -n; q <= 2 * n; ++q)
            if (p + q <= n) s += hs_norm(T, p, q);
    return s;
}
}  // namespace

TEST_CASE("lattice indexing round-trips in one and two dimensions") {
    const FrequencyLattice l1(1, 5), l2(2, 4);
    CHECK(l1.size() == 11);
    CHECK(l2.size() == 81);
    for (std::size_t i = 0; i < l2.size(); ++i) CHECK(l2.index(l2.mode(i)) == i);
    CHECK(l2.index({1, -2}) == std::size_t((1 + 4) * 9 + (-2 + 4)));
    CHECK_THROWS_AS(l1.index({6, 0}), Error);
    CHECK_THROWS_AS(FrequencyLattice(3, 4), Error);
    CHECK_THROWS_AS(FrequencyLattice(1, 3), Error);
}

TEST_CASE("sobolev norm examples") {
    const FrequencyLattice lat(1, 8);
    CHECK(sobolev_norm(SpectralDistribution(lat), 2.5) == 0.0);
    std::vector<cplx> a(lat.size(), 0.0);
    a[lat.index({3, 0})] = 1.0;
    CHECK(sobolev_norm(SpectralDistribution(lat, a), 1.5) == doctest::Approx(std::pow(10.0, 0.75)).epsilon(1e-14));
    // 17 modes of modulus (2pi)^{-1/2}
    CHECK(sobolev_norm(corpus::delta(lat), 0.0) == doctest::Approx(std::sqrt(17.0 / (2 * pi))).epsilon(1e-14));
    std::vector<cplx> bad(lat.size(), 0.0);
    bad[0] = std::nan("");
    CHECK_THROWS_AS(sobolev_norm(SpectralDistribution(lat, bad), 0.0), Error);
}

TEST_CASE("hilbert-schmidt norms") {
    const FrequencyLattice lat(1, 4);
    // identity on |k| <= 2: sum (1+k^2)^2 = 1 + 2*4 + 2*25 = 59
    std::vector<cplx> w(lat.size(), 0.0);
    double brute = 0.0;
    for (int k = -2; k <= 2; ++k) {
        w[lat.index({k, 0})] = 1.0;
        brute += (1.0 + k * k) * (1.0 + k * k);
    }
    CHECK(brute == 59.0);
    CHECK(hs_norm(SmoothingKernel::diagonal(lat, w), 1, 1) == doctest::Approx(std::sqrt(59.0)).epsilon(1e-14));
    const auto r1 = SmoothingKernel::rank_one(lat, {0, 0}, {0, 0});
    CHECK(hs_norm(r1, 3, -2) == doctest::Approx(1.0));
    CHECK(graded_kernel_norm(r1, 0) == doctest::Approx(hs_norm(r1, 0, 0)));
    // p, q >= -1 and p + q <= 1 forces p, q <= 2; enumeration gives 10 pairs
    long pairs = 0;
    for (int p = -1; p <= 3; ++p)
        for (int q = -1; q <= 3; ++q) pairs += (p + q <= 1);
    CHECK(pairs == 10);
    CHECK(graded_pair_count(1) == pairs);
    CHECK(graded_kernel_norm(r1, 1) == doctest::Approx(double(pairs)));
    CHECK(graded_kernel_norm(SmoothingKernel(lat), 3) == 0.0);
}

TEST_CASE("graded kernel norm agrees with brute-force enumeration on random kernels") {
    const FrequencyLattice lat(1, 6);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXcd M(lat.size(), lat.size());
        for (Eigen::Index i = 0; i < M.rows(); ++i)
            for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = cplx(g(rng), g(rng));
        const SmoothingKernel T(lat, M);
        for (int n = 0; n <= 3; ++n) {
            const double b = brute_graded(T, n);
            CHECK(std::abs(graded_kernel_norm(T, n) - b) <= 1e-12 * b);
        }
        const KernelNormTable table(T, 4);
        CHECK(std::abs(table.graded(2) - brute_graded(T, 2)) <= 1e-12 * brute_graded(T, 2));
    }
}

TEST_CASE("apply_kernel") {
    const FrequencyLattice lat(1, 4);
    const auto u = corpus::exp_decay(lat, 0.5);
    CHECK(apply_kernel(SmoothingKernel::identity(lat), u) == u);
    std::vector<cplx> k(lat.size());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = 1.0 / (1.0 + double(i));
    const auto v = apply_kernel(SmoothingKernel::diagonal(lat, k), u);
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(std::abs(v[i] - u[i] * k[i]) < 1e-15);
    const auto w = apply_kernel(SmoothingKernel::rank_one(lat, {0, 0}, {0, 0}), corpus::delta(lat));
    CHECK(std::abs(w.at({0, 0}) - 1.0 / std::sqrt(2 * pi)) < 1e-15);
    CHECK(std::abs(w.at({1, 0})) == 0.0);
}

TEST_CASE("graded norm reports are monotone for every corpus element") {
    const FrequencyLattice lat(1, 32);
    for (const auto& u : {corpus::delta(lat), corpus::hardy(lat), corpus::exp_decay(lat, 1.0)}) {
        const auto rep = graded_norm_report("u", u, 0, 4);
        CHECK(rep.nonnegative());
        CHECK(rep.nondecreasing());
    }
}
