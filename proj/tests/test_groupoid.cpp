#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "microsing/corpus.hpp"
#include "microsing/error.hpp"
#include "microsing/groupoid.hpp"

using namespace microsing;

namespace {

TrigPoly c_profile() { return TrigPoly::cosine_series(1.0, {0.3}); }

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("vector representation keeps the eta = 0 block") {
    const GroupoidModel m(8, 4);
    CHECK(m.block_count() == 9);
    const auto L = LongitudinalOperator::laplacian(m);
    const auto piL = vector_representation(L).to_matrix();
    for (int k = -8; k <= 8; ++k) {
        const auto i = Eigen::Index(m.base.index(Mode{k, 0}));
        CHECK(piL(i, i).real() == doctest::Approx(double(k * k)));
    }
    // the eta = 3 block carries the extra eta^2
    const auto B3 = L.block(3).to_matrix();
    CHECK(B3(0, 0).real() == doctest::Approx(64.0 + 9.0));

    CHECK(max_diff(vector_representation(LongitudinalOperator::identity(m)).to_matrix(),
                   Eigen::MatrixXcd::Identity(17, 17)) == 0.0);

    // an operator whose eta = 0 block vanishes maps to zero
    const auto Z = LongitudinalOperator::from_blocks(m, 0.0, [&](int eta) {
        return eta == 0 ? SymbolOperator::zero(m.base) : SymbolOperator::identity(m.base);
    });
    CHECK(vector_representation(Z).to_matrix().cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(GroupoidModel(8, 9), Error);
}

TEST_CASE("composition and blockwise action") {
    const GroupoidModel m(8, 3);
    const auto S = LongitudinalOperator::from_section(m, c_profile(), TrigPoly::cosine_series(0.0, {0.5}));
    const auto L = LongitudinalOperator::laplacian(m);
    const auto SL = compose(S, L);
    for (int eta = -3; eta <= 3; ++eta)
        CHECK(max_diff(SL.block(eta).to_matrix(), S.block(eta).to_matrix() * L.block(eta).to_matrix()) <= 1e-12);

    const auto F = corpus::random_phase(m.total, 2);
    const auto G = longitudinal_apply(LongitudinalOperator::identity(m), F);
    const std::size_t side = m.base.side();
    for (std::size_t k = 0; k < side; ++k)
        for (std::size_t e = 0; e < side; ++e) {
            const int eta = int(e) - 8;
            const cplx want = std::abs(eta) <= 3 ? F.values()[k * side + e] : cplx(0.0);
            CHECK(std::abs(G.values()[k * side + e] - want) <= 1e-14);
        }
}

TEST_CASE("range pullback puts u on the eta = 0 column") {
    const GroupoidModel m(8, 8);
    const auto A = range_pullback(corpus::delta(m.base), m);
    // coefficient copy: in the T^2 basis this is delta(x) (x) 1(y) scaled by (2 pi)^{-1/2}
    const auto line = corpus::line_delta(m.total) * cplx(1.0 / std::sqrt(2 * std::numbers::pi));
    for (std::size_t i = 0; i < m.total.size(); ++i) CHECK(std::abs(A.values()[i] - line.values()[i]) <= 1e-14);
}

TEST_CASE("groupoid L1 norm") {
    const GroupoidModel m(8, 2);
    // K = 1 / (4 pi^2) constant: the fiber integral over (w', h) is 1
    const auto C = LongitudinalOperator::from_blocks(m, -std::numeric_limits<double>::infinity(), [&](int eta) {
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(17, 17);
        if (eta == 0) M(8, 8) = 1.0;
        return SymbolOperator::from_matrix(m.base, -std::numeric_limits<double>::infinity(), M);
    });
    CHECK(groupoid_l1_norm(C) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(operator_norm(vector_representation(C)) == doctest::Approx(1.0));
    CHECK(groupoid_l1_norm(LongitudinalOperator::zero(m)) == 0.0);

    // ||pi(T)|| <= ||T||_1 on random smoothing families
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (double decay : {0.4, 0.8}) {
        const auto T = LongitudinalOperator::from_blocks(m, -std::numeric_limits<double>::infinity(), [&](int eta) {
            Eigen::MatrixXcd M(17, 17);
            for (int j = 0; j < 17; ++j)
                for (int k = 0; k < 17; ++k)
                    M(j, k) = cplx(g(rng), g(rng)) * std::exp(-decay * (std::abs(j - 8) + std::abs(k - 8) + std::abs(eta)));
            return SymbolOperator::from_matrix(m.base, -std::numeric_limits<double>::infinity(), M);
        });
        CHECK(operator_norm(vector_representation(T)) <= groupoid_l1_norm(T) + 1e-10);
    }
}

TEST_CASE("anchor restriction of principal symbols") {
    const GroupoidModel m(8, 4);
    const TrigPoly v = c_profile(), c = TrigPoly::cosine_series(0.2, {0.0}, {0.7});
    const auto S = LongitudinalOperator::from_section(m, v, c);
    const auto sigma = sample_anchor_symbol(S, 8, 16);
    for (std::size_t i = 0; i < sigma.xs.size(); ++i)
        for (std::size_t j = 0; j < sigma.dirs.size(); ++j) {
            const double x = sigma.xs[i][0];
            const auto& d = sigma.dirs[j];
            CHECK(std::abs(sigma.at(i, j) - (v({x, 0.0}) * d[0] + c({x, 0.0}) * d[1])) <= 1e-12);
        }
    const auto q = anchor_restrict(sigma);
    REQUIRE(q.dirs.size() == 2);
    for (std::size_t i = 0; i < q.xs.size(); ++i) {
        const cplx vx = v({q.xs[i][0], 0.0});
        CHECK(std::abs(q.at(i, 0) - vx) <= 1e-12);
        CHECK(std::abs(q.at(i, 1) + vx) <= 1e-12);
    }
    // a section pointing purely along the group direction restricts to zero
    const auto E = LongitudinalOperator::from_section(m, TrigPoly::constant(1, 0.0), TrigPoly::constant(1, 1.0));
    CHECK(anchor_restrict(sample_anchor_symbol(E, 8)).max_abs() <= 1e-15);
    CHECK_THROWS_AS(sample_anchor_symbol(E, 8, 6 - 1), Error);
}

TEST_CASE("longitudinal generator and equivariance") {
    const GroupoidModel m(16, 4);
    const auto free = build_longitudinal_generator(m, TrigPoly::constant(1, 1.0));
    for (int eta = -4; eta <= 4; ++eta) {
        const auto& B = free.block(eta);
        CHECK(max_diff(B, Eigen::MatrixXcd(B.diagonal().asDiagonal())) <= 1e-14);
        CHECK(B(0, 0).real() == doctest::Approx(std::sqrt(1.0 + 256.0 + eta * eta)));
    }
    const auto D = build_longitudinal_generator(m, c_profile());
    CHECK(D.max_hermitian_defect() <= 1e-12);
    const Generator base(m.base, c_profile());
    CHECK(max_diff(vector_representation(D), base.matrix()) <= 1e-12);

    CHECK(check_equivariance(LongitudinalOperator::laplacian(m), D, base, 0.4) <= 1e-12);
    const TrigPoly f1 = TrigPoly::cosine_series(0.3, {0.2}, {0.1}), f2 = TrigPoly::cosine_series(0.0, {0.4});
    const auto X = LongitudinalOperator::from_blocks(m, 0.0, [&](int eta) {
        return SymbolOperator::multiplication(m.base, f1) + SymbolOperator::multiplication(m.base, f2) * cplx(eta);
    });
    CHECK(check_equivariance(X, D, base, 0.8) <= 1e-10);

    std::vector<Eigen::MatrixXcd> bad(9, Eigen::MatrixXcd::Identity(33, 33));
    bad[2](0, 1) = 1.0;
    CHECK_THROWS_AS(LongitudinalGenerator(m, bad), Error);

    // blockwise propagation preserves the l2 norm
    const auto F = corpus::random_phase(m.total, 9);
    const auto Ft = longitudinal_propagate(F, D, 0.7);
    const auto P0 = longitudinal_apply(LongitudinalOperator::identity(m), F);
    CHECK(sobolev_norm(Ft, 0.0) == doctest::Approx(sobolev_norm(P0, 0.0)).epsilon(1e-11));
}

TEST_CASE("anchor wavefront of pulled-back distributions") {
    const GroupoidModel m(64, 8);
    const auto d = check_anchor_wf(corpus::delta(m.base), m);
    CHECK(d.pass);
    CHECK(!d.detected.empty());
    const auto h = check_anchor_wf(corpus::hardy(m.base), m);
    CHECK(h.pass);
    const auto s = check_anchor_wf(corpus::exp_decay(m.base, 1.0), m);
    CHECK(s.pass);
    CHECK(s.detected.empty());
}
