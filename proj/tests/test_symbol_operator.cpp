#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "microsing/corpus.hpp"
#include "microsing/error.hpp"
#include "microsing/symbol_operator.hpp"

using namespace microsing;

namespace {

TrigPoly random_poly(std::mt19937_64& rng, int degree) {
    std::normal_distribution<double> g;
    std::map<Mode, cplx> c;
    for (int nu = -degree; nu <= degree; ++nu) c[Mode{nu, 0}] = cplx(g(rng), g(rng));
    return TrigPoly(1, c);
}

// dense oracle for multiplication: (f u)_j = sum_nu fhat_nu a_{j - nu}, dropping outputs off the lattice
Eigen::MatrixXcd multiplication_matrix(const FrequencyLattice& lat, const TrigPoly& f) {
    const auto n = Eigen::Index(lat.size());
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (const auto& [nu, c] : f.coeffs()) {
            const Mode j = lat.mode(std::size_t(k)) + nu;
            if (lat.contains(j)) M(Eigen::Index(lat.index(j)), k) += c;
        }
    return M;
}

}  // namespace

TEST_CASE("identity multiplier acts as the identity") {
    const FrequencyLattice lat(1, 16);
    const auto u = corpus::hardy(lat);
    CHECK(op_apply(SymbolOperator::identity(lat), u) == u);
    const auto one = SymbolOperator::multiplier(lat, 0.0, [](Mode) { return cplx(1.0); });
    CHECK(op_apply(one, u) == u);
}

TEST_CASE("multiplication operators match the dense convolution oracle") {
    const FrequencyLattice lat(1, 12);
    std::mt19937_64 rng(11);
    const auto f = random_poly(rng, 3);
    const auto P = SymbolOperator::multiplication(lat, f);
    CHECK((P.to_matrix() - multiplication_matrix(lat, f)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(P.x_mode_bound() == 3);
}

TEST_CASE("composition and adjoint agree with dense matrix algebra") {
    const FrequencyLattice lat(1, 16);
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const auto A = op_compose(SymbolOperator::multiplication(lat, random_poly(rng, 2)),
                                  SymbolOperator::bessel_potential(lat, 1.0));
        const auto B = SymbolOperator::variable_coefficient(lat, random_poly(rng, 1), -1.0);
        const Eigen::MatrixXcd dense = A.to_matrix() * B.to_matrix();
        CHECK((op_compose(A, B).to_matrix() - dense).cwiseAbs().maxCoeff() < 1e-11 * (1.0 + dense.cwiseAbs().maxCoeff()));
        CHECK((A.adjoint().to_matrix() - A.to_matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-13);
        const auto C = commutator(A, B);
        const Eigen::MatrixXcd dc = A.to_matrix() * B.to_matrix() - B.to_matrix() * A.to_matrix();
        CHECK((C.to_matrix() - dc).cwiseAbs().maxCoeff() < 1e-11 * (1.0 + dc.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("composition past N/2 x-modes records a truncation warning") {
    const FrequencyLattice lat(1, 16);
    const auto f = TrigPoly::exp_mode(1, {3, 0});
    const auto P = SymbolOperator::multiplication(lat, f);
    // x-mode bounds 6 and 9 against N/2 = 8
    CHECK_FALSE(op_compose(P, P).truncation_warning());
    CHECK(op_compose(op_compose(P, P), P).truncation_warning());
}

TEST_CASE("from_matrix recovers the mode table") {
    const FrequencyLattice lat(1, 10);
    std::mt19937_64 rng(8);
    const auto P = SymbolOperator::multiplication(lat, random_poly(rng, 2));
    const auto Q = SymbolOperator::from_matrix(lat, 0.0, P.to_matrix());
    CHECK((Q.to_matrix() - P.to_matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(Q.x_mode_bound() == 2);
}

TEST_CASE("principal symbols") {
    const FrequencyLattice lat(1, 32);
    const auto xs = x_grid(1, 16);
    const auto dirs = direction_grid(1, 2);
    const auto s1 = principal_symbol(SymbolOperator::bessel_potential(lat, 1.0), xs, dirs);
    for (const auto& v : s1.values) CHECK(std::abs(v - 1.0) < 1e-14);
    CHECK(s1.degree == 1.0);

    const TrigPoly f = TrigPoly::cosine_series(0.5, {0.2}, {-0.7});
    const auto s2 = principal_symbol(SymbolOperator::multiplication(lat, f), xs, dirs);
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < dirs.size(); ++j) CHECK(std::abs(s2.at(i, j) - f(xs[i][0])) < 1e-14);

    // sampled directly from the closed form 1 + 0.3 cos x
    const auto c = TrigPoly::cosine_series(1.0, {0.3});
    const auto s3 = principal_symbol(SymbolOperator::variable_coefficient(lat, c, 1.0), xs, dirs);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(std::abs(s3.at(i, 0) - (1.0 + 0.3 * std::cos(xs[i][0]))) < 1e-14);

    const auto raw = SymbolOperator::from_matrix(lat, 0.0, Eigen::MatrixXcd::Identity(lat.size(), lat.size()));
    CHECK_THROWS_AS(principal_symbol(raw, xs, dirs), Error);
}

TEST_CASE("characteristic sets") {
    const FrequencyLattice lat(2, 8);
    const auto xs = x_grid(2, 4);
    const auto dirs = direction_grid(2, 8);
    CHECK(char_set(SymbolOperator::bessel_potential(lat, 1.0), 0.5, xs, dirs).empty());
    CHECK(char_set(SymbolOperator::zero(lat), 0.5, xs, dirs).size() == xs.size() * dirs.size());
    // window around omega = (1, 0): the characteristic set is every other direction
    const AngularProfile window = [](const Direction& w) { return cplx(w[0] > 0.9 ? 1.0 : 0.0); };
    const auto P = SymbolOperator::multiplier(
        lat, 0.0,
        [&](Mode k) {
            const double r = std::hypot(k.k1, k.k2);
            return r == 0.0 ? cplx(0.0) : window({k.k1 / r, k.k2 / r});
        },
        window);
    const auto cs = char_set(P, 0.5, xs, dirs);
    std::size_t expected = 0;
    for (std::size_t j = 0; j < dirs.size(); ++j) expected += dirs[j][0] > 0.9 ? 0 : xs.size();
    CHECK(cs.size() == expected);
}

TEST_CASE("classical profiles reproduce the full symbol at large frequency") {
    const FrequencyLattice lat(1, 64);
    CHECK(SymbolOperator::bessel_potential(lat, 1.0).classical_deviation(32) < 1e-3);
    CHECK(SymbolOperator::bessel_potential(lat, 2.0).classical_deviation(8) < 1e-12);
}
