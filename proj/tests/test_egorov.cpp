#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "microsing/corpus.hpp"
#include "microsing/egorov.hpp"
#include "microsing/error.hpp"

using namespace microsing;

namespace {

TrigPoly c_profile() { return TrigPoly::cosine_series(1.0, {0.3}); }

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Usage;
}

SmoothingKernel random_kernel(const FrequencyLattice& lat, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const auto n = Eigen::Index(lat.size());
    Eigen::MatrixXcd M(n, n);
    const double mid = double(lat.bandlimit());
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            M(a, b) = cplx(g(rng), g(rng)) * std::exp(-0.2 * (std::abs(double(a) - mid) + std::abs(double(b) - mid)));
    return SmoothingKernel(lat, M);
}

}  // namespace

TEST_CASE("generator construction") {
    const FrequencyLattice lat(1, 16);
    const Generator free(lat, TrigPoly::constant(1, 1.0));
    const auto& D = free.matrix();
    for (int k = -16; k <= 16; ++k) {
        const auto i = Eigen::Index(lat.index(Mode{k, 0}));
        CHECK(D(i, i).real() == doctest::Approx(std::sqrt(1.0 + k * k)).epsilon(1e-13));
    }
    CHECK((D - Eigen::MatrixXcd(D.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-14);

    const Generator var(lat, c_profile());
    CHECK(var.hermitian_defect() <= 1e-12);
    for (double x : {0.0, 1.0, 2.5, 4.0}) CHECK(var.principal_symbol({x, 0.0}) == doctest::Approx(1.0 + 0.3 * std::cos(x)));

    // 0.45 + 0.55 cos x has minimum -0.1
    CHECK(kind_of([&] { Generator(lat, TrigPoly::cosine_series(0.45, {0.55})); }) == ErrorKind::Ellipticity);
    CHECK(kind_of([&] { Generator(lat, c_profile(), 0.0); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([&] { Generator(FrequencyLattice(1, 4), TrigPoly::cosine_series(1.0, {0.1, 0.1, 0.1})); }) ==
          ErrorKind::InvalidInput);
}

TEST_CASE("propagation of distributions") {
    const FrequencyLattice lat(1, 128);
    const Generator free(lat, TrigPoly::constant(1, 1.0));
    const auto u = corpus::random_phase(lat, 5);
    const auto same = propagate(u, free, 0.0);
    double diff = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) diff = std::max(diff, std::abs(same.coeffs()[i] - u.coeffs()[i]));
    CHECK(diff <= 1e-13);

    const CutoffDictionary dict(lat);
    const auto moved = propagate(corpus::delta(lat), free, 0.7);
    const auto cent = cluster_centroids(singular_support(moved, dict));
    REQUIRE(cent.size() == 2);
    const double step = 2 * std::numbers::pi / dict.grid();
    auto near = [&](double x, double target) { return std::abs(std::remainder(x - target, 2 * std::numbers::pi)) <= step; };
    CHECK(((near(cent[0][0], 0.7) && near(cent[1][0], -0.7)) || (near(cent[1][0], 0.7) && near(cent[0][0], -0.7))));

    // the L2 norm is preserved
    const Generator var(lat, c_profile());
    const auto w = propagate(u, var, 1.3);
    CHECK(sobolev_norm(w, 0.0) == doctest::Approx(sobolev_norm(u, 0.0)).epsilon(1e-11));
}

TEST_CASE("operator conjugation") {
    const FrequencyLattice lat(1, 24);
    const Generator free(lat, TrigPoly::constant(1, 1.0));
    const Generator var(lat, c_profile());
    const auto I = SymbolOperator::identity(lat);
    CHECK((conjugate_operator(I, var, 0.9) - I.to_matrix()).cwiseAbs().maxCoeff() <= 1e-12);
    // Fourier multipliers commute with the free generator
    const auto B = SymbolOperator::bessel_potential(lat, -1.0);
    CHECK((conjugate_operator(B, free, 1.1) - B.to_matrix()).cwiseAbs().maxCoeff() <= 1e-12);
    // but a multiplication operator moves
    const auto M = SymbolOperator::multiplication(lat, TrigPoly::cosine_series(0.0, {1.0}));
    CHECK((conjugate_operator(M, free, 1.1) - M.to_matrix()).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("Hamiltonian flow") {
    const FrequencyLattice lat(1, 32);
    const Generator free(lat, TrigPoly::constant(1, 1.0));
    const auto p = hamiltonian_flow(free, {{1.0, 0.0}, {1.0, 0.0}}, 0.5, 1e-3);
    CHECK(p.x[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(p.omega[0] == 1.0);
    const auto q = hamiltonian_flow(free, {{1.0, 0.0}, {-1.0, 0.0}}, 0.5, 1e-3);
    CHECK(q.x[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(kind_of([&] { hamiltonian_flow(free, {}, 0.5, 0.1); }) == ErrorKind::StepSize);
    CHECK(kind_of([&] { hamiltonian_flow(free, {}, 0.5, 0.0); }) == ErrorKind::StepSize);

    // x' = c(x) on the + ray; the flow is reversible
    const Generator var(lat, c_profile());
    const auto a = hamiltonian_flow(var, {{0.3, 0.0}, {1.0, 0.0}}, 1.2, 1e-3);
    const auto b = hamiltonian_flow(var, a, -1.2, 1e-3);
    CHECK(b.x[0] == doctest::Approx(0.3).epsilon(1e-10));

    // 2D constant speed: straight lines
    const FrequencyLattice lat2(2, 8);
    const Generator free2(lat2, TrigPoly::constant(2, 2.0));
    const auto r = hamiltonian_flow(free2, {{0.0, 0.0}, {0.6, 0.8}}, 1.0, 1e-2);
    CHECK(r.x[0] == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(r.x[1] == doctest::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("propagation of singularities") {
    const FrequencyLattice lat(1, 128);
    const CutoffDictionary dict(lat);
    const int sign = calibrate_flow_direction(lat);
    CHECK(sign == -1);
    const Generator free(lat, TrigPoly::constant(1, 1.0));

    const auto pd = check_propagation(corpus::delta(lat), free, 0.7, dict, {}, sign, 1e-3, 1.0);
    CHECK(pd.status == CheckStatus::Pass);
    CHECK(pd.distance <= 1.0);

    const auto ph = check_propagation(corpus::hardy(lat), free, 1.0, dict, {}, sign, 1e-3, 1.0);
    CHECK(ph.status == CheckStatus::Pass);
    REQUIRE(!ph.predicted.empty());
    const double step = 2 * std::numbers::pi / dict.grid();
    for (const auto& [i, j] : ph.predicted) {
        CHECK(j == 0);
        // hardy occupies cells -1..1, so its image spans the same width around x = -1
        CHECK(std::abs(std::remainder(double(i) * step + 1.0, 2 * std::numbers::pi)) <= 2 * step);
    }

    const auto ps = check_propagation(corpus::exp_decay(lat, 1.0), free, 1.0, dict, {}, sign);
    CHECK(ps.status == CheckStatus::Inconclusive);

    const Generator var(lat, c_profile());
    CHECK(check_propagation(corpus::delta(lat, {2.0, 0.0}), var, 0.8, dict, {}, sign).status == CheckStatus::Pass);
}

TEST_CASE("compatibility of the two actions") {
    const FrequencyLattice lat(1, 32);
    const Generator var(lat, c_profile());
    const auto T = random_kernel(lat, 11);
    CHECK(check_compatibility(T, SymbolOperator::bessel_potential(lat, 1.0), var, 0.3) <= 1e-10);
    const auto M = SymbolOperator::multiplication(lat, TrigPoly::cosine_series(2.0, {0.5, 0.25}));
    CHECK(check_compatibility(T, M, var, 1.2) <= 1e-10);
    CHECK(check_compatibility(T, M, var, 0.0) <= 1e-12);
    // with the opposite conjugation the identity breaks
    CHECK(compatibility_as_printed(T, M, var, 1.2) > 1e-3);
}

TEST_CASE("symbol transport under conjugation") {
    const FrequencyLattice lat(1, 256);
    const Generator var(lat, c_profile());
    const auto I = SymbolOperator::identity(lat);
    for (const auto& row : symbol_transport_check(I, var, 0.5, {0.1, 0.05}, -1)) CHECK(row.deviation <= 1e-10);

    const auto M = SymbolOperator::multiplication(lat, TrigPoly::cosine_series(1.0, {0.5}));
    const auto rows = symbol_transport_check(M, var, 0.5, {0.2, 0.1, 0.05}, -1);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].deviation < rows[0].deviation);
    CHECK(rows[2].deviation < rows[1].deviation);
    CHECK(rows[2].deviation < 0.1);

    const auto packet = wave_packet(lat, 1.0, 1.0, 0.05);
    CHECK(sobolev_norm(packet, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(kind_of([&] { wave_packet(lat, 1.0, 1.0, 0.0); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("unitary group") {
    const FrequencyLattice lat(1, 32);
    const Generator var(lat, c_profile());
    for (double t : {0.4, -1.3, 2.7}) {
        CHECK(unitarity_defect(var, t) <= 1e-12);
        CHECK(group_law_defect(var, 0.3, t) <= 1e-12);
    }
    CHECK((var.propagator(0.0) - Eigen::MatrixXcd::Identity(lat.size(), lat.size())).cwiseAbs().maxCoeff() <= 1e-13);
}
