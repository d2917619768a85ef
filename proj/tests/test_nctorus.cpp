#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "microsing/error.hpp"
#include "microsing/nctorus.hpp"

using namespace microsing;

namespace {

constexpr double kTau = 2 * std::numbers::pi;

NCElement random_element(std::mt19937_64& rng, const Theta& th, int powers = 2, int modes = 2) {
    std::normal_distribution<double> g;
    std::map<int, ThetaFunction> terms;
    for (int n = -powers; n <= powers; ++n) {
        std::map<int, cplx> c;
        for (int m = -modes; m <= modes; ++m) c[m] = cplx(g(rng), g(rng)) * 0.5;
        terms.emplace(n, ThetaFunction(th, c));
    }
    return NCElement(th, terms);
}

cplx xi(double s) { return std::exp(-0.3 * s * s) * cplx(std::cos(s), 0.2 * s); }

// f(s) = e^{-2 pi i s / theta} - e^{-2 pi i / theta}, so f(1) = 0
ThetaFunction vanishing_at_one(const Theta& th) {
    return ThetaFunction(th, {{1, 1.0}, {0, -std::polar(1.0, -kTau / th.value)}});
}

}  // namespace

TEST_CASE("theta parsing") {
    const auto r = Theta::parse("5/7");
    REQUIRE(r.rational.has_value());
    CHECK(r.rational->first == 5);
    CHECK(r.rational->second == 7);
    CHECK(r.value == doctest::Approx(5.0 / 7.0));
    CHECK(Theta::parse("10/14").rational->first == 5);
    CHECK(Theta::parse("0.6180339887").value == doctest::Approx(0.6180339887));
    for (const char* bad : {"", "abc", "3/2", "0", "-0.5", "1/0", "2/3x"}) {
        INFO(bad);
        CHECK_THROWS_AS(Theta::parse(bad), Error);
    }
    CHECK_THROWS_AS(NCElement::one(Theta::ratio(1, 2)) + NCElement::one(Theta::ratio(1, 3)), Error);
}

TEST_CASE("commutation relation through the defining action") {
    for (const auto& th : {Theta::ratio(5, 7), Theta::real(0.6180339887)}) {
        const auto lhs = nc_multiply(NCElement::v2(th), NCElement::v1(th));
        const auto rhs = nc_multiply(NCElement::v1(th), NCElement::v2(th)) * std::polar(1.0, kTau / th.value);
        CHECK(lhs.distance(rhs) <= 1e-14);
        for (double s : {-1.3, 0.0, 0.4, 2.2}) {
            const auto v2xi = [&](double x) { return nc_apply_to_function(NCElement::v2(th), xi, x); };
            const auto v1xi = [&](double x) { return nc_apply_to_function(NCElement::v1(th), xi, x); };
            const cplx a = nc_apply_to_function(NCElement::v2(th), v1xi, s);
            const cplx b = std::polar(1.0, kTau / th.value) * nc_apply_to_function(NCElement::v1(th), v2xi, s);
            CHECK(std::abs(a - b) <= 1e-13);
        }
    }
}

TEST_CASE("multiplication matches composition of actions") {
    const Theta th = Theta::ratio(5, 7);
    std::mt19937_64 rng(17);
    double worst_assoc = 0.0, worst_action = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto a = random_element(rng, th, 1, 1), b = random_element(rng, th, 1, 1), c = random_element(rng, th, 1, 1);
        worst_assoc = std::max(worst_assoc, nc_multiply(nc_multiply(a, b), c).distance(nc_multiply(a, nc_multiply(b, c))));
        if (i < 10) {
            const auto bxi = [&](double x) { return nc_apply_to_function(b, xi, x); };
            for (double s : {0.1, 1.7})
                worst_action = std::max(worst_action, std::abs(nc_apply_to_function(nc_multiply(a, b), xi, s) -
                                                               nc_apply_to_function(a, bxi, s)));
        }
    }
    CHECK(worst_assoc <= 1e-11);
    CHECK(worst_action <= 1e-11);
    const auto a = random_element(rng, th);
    CHECK(nc_multiply(NCElement::one(th), a).distance(a) <= 1e-15);
    CHECK(nc_multiply(a, NCElement::one(th)).distance(a) <= 1e-15);
}

TEST_CASE("left coefficients") {
    const Theta th = Theta::ratio(5, 7);
    const auto f = vanishing_at_one(th);
    // V1 f = f(. + 1) V1
    const auto a = nc_multiply(NCElement::v1(th), NCElement::monomial(f, 0));
    const auto left = a.left_coefficients();
    REQUIRE(left.count(1) == 1);
    for (double s : {0.0, 0.7, 1.0, 3.1}) {
        CHECK(std::abs(left.at(1)(s) - f(s)) <= 1e-14);
        CHECK(std::abs(a.coefficient(1)(s) - f(s + 1)) <= 1e-14);
    }
}

TEST_CASE("action on point-supported distributions") {
    const Theta th = Theta::ratio(5, 7);
    const auto d0 = SymbolicDistribution::delta(0.0);
    const auto id = nc_act(NCElement::one(th), d0);
    REQUIRE(id.terms.size() == 1);
    CHECK(id.terms[0].x == 0.0);
    CHECK(std::abs(id.terms[0].weight - 1.0) <= 1e-15);

    const ThetaFunction f(th, {{1, 0.5}, {-2, cplx(0.0, 1.0)}});
    for (int n : {-2, 1, 3}) {
        const auto r = nc_act(NCElement::monomial(f, n), d0);
        REQUIRE(r.terms.size() == 1);
        CHECK(r.terms[0].x == double(n));
        CHECK(r.terms[0].order == 0);
        CHECK(std::abs(r.terms[0].weight - f(0.0)) <= 1e-14);
    }

    // Leibniz rule on delta'
    const auto r = nc_act(NCElement::monomial(f, 1), SymbolicDistribution::delta(0.0, 1));
    REQUIRE(r.terms.size() == 2);
    CHECK(r.terms[0].x == 1.0);
    CHECK(r.terms[0].order == 0);
    CHECK(std::abs(r.terms[0].weight + f.derivative()(0.0)) <= 1e-13);
    CHECK(r.terms[1].order == 1);
    CHECK(std::abs(r.terms[1].weight - f(0.0)) <= 1e-14);

    // pairing agrees with the direct formula
    const auto u = SymbolicDistribution::delta(0.5, 2, 2.0);
    const cplx p = u.pair([](double x, int k) { return k == 2 ? cplx(-std::sin(x)) : cplx(0.0); });
    CHECK(std::abs(p - 2.0 * -std::sin(0.5)) <= 1e-15);
    CHECK_THROWS_AS(SymbolicDistribution::delta(0.0, -1), Error);
}

TEST_CASE("wavefront ideal of delta_0") {
    const Theta th = Theta::ratio(5, 7);
    CHECK_FALSE(nc_wf_membership(NCElement::one(th)));
    CHECK(nc_wf_membership(NCElement::zero(th)));
    const auto f = vanishing_at_one(th);
    const auto member = nc_multiply(NCElement::v1(th), NCElement::monomial(f, 0));
    CHECK(nc_wf_membership(member));
    CHECK(nc_wf_formula(member));
    const auto literal = NCElement::monomial(f, 1);
    CHECK_FALSE(nc_wf_membership(literal));
    CHECK_FALSE(nc_wf_formula(literal));

    // the set is closed under right multiplication but not under left multiplication
    const auto b = nc_multiply(NCElement::v2(th), NCElement::v1(th, -1));
    CHECK(nc_wf_membership(nc_multiply(member, b)));
    CHECK_FALSE(nc_wf_membership(nc_multiply(literal, NCElement::v1(th))));

    std::mt19937_64 rng(5);
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> g;
    int agree = 0, members = 0;
    for (int i = 0; i < 50; ++i) {
        NCElement a = NCElement::zero(th);
        bool expected = true;
        for (int n : {-1, 0, 2}) {
            std::map<int, cplx> c{{-1, cplx(g(rng), g(rng))}, {1, cplx(g(rng), g(rng))}};
            ThetaFunction fn(th, c);
            if (coin(rng)) {
                c[1] -= fn(double(n)) / std::polar(1.0, -kTau * n / th.value);
                fn = ThetaFunction(th, c);
            } else {
                expected = false;
            }
            a = a + nc_multiply(NCElement::v1(th, n), NCElement::monomial(fn, 0));
        }
        members += expected;
        agree += nc_wf_membership(a) == expected && nc_wf_formula(a) == expected;
    }
    CHECK(agree == 50);
    CHECK(members > 0);
}

TEST_CASE("connections and derivations") {
    const Theta th = Theta::ratio(5, 7);
    for (const auto& u : {SymbolicDistribution::delta(0.5), SymbolicDistribution::delta(-1.0, 2, cplx(0.3, 1.0))}) {
        const auto a = nc_apply_connection(1, nc_apply_connection(2, u, th), th);
        const auto b = nc_apply_connection(2, nc_apply_connection(1, u, th), th);
        auto diff = a + multiply(PolynomialMultiplier{{-1.0}}, b);
        diff = diff + multiply(PolynomialMultiplier{{-cplx(0.0, kTau / th.value)}}, u);
        diff.normalize(1e-12);
        CHECK_FALSE(diff.has_singular_terms(1e-12));
    }

    const auto d1 = nc_derivation(1, NCElement::v1(th));
    CHECK(d1.distance(NCElement::v1(th) * cplx(0.0, -kTau / th.value)) <= 1e-14);
    const auto d2 = nc_derivation(2, NCElement::v2(th));
    CHECK(d2.distance(NCElement::v2(th) * cplx(0.0, -kTau / th.value)) <= 1e-14);
    CHECK(nc_derivation(1, NCElement::v2(th)).distance(NCElement::zero(th)) <= 1e-15);
    CHECK(nc_derivation(2, NCElement::v1(th)).distance(NCElement::zero(th)) <= 1e-15);

    std::mt19937_64 rng(8);
    for (int j : {1, 2})
        for (int i = 0; i < 5; ++i) {
            const auto a = random_element(rng, th, 1, 1), b = random_element(rng, th, 1, 1);
            const auto lhs = nc_derivation(j, nc_multiply(a, b));
            const auto rhs = nc_multiply(nc_derivation(j, a), b) + nc_multiply(a, nc_derivation(j, b));
            CHECK(lhs.distance(rhs) <= 1e-10);
        }
    CHECK_THROWS_AS(nc_derivation(3, NCElement::one(th)), Error);
}

TEST_CASE("principal symbols and ellipticity") {
    const Theta th = Theta::ratio(5, 7);
    const auto one = NCElement::one(th);
    NCDifferentialOperator lap{th, 2, {{{2, 0}, one}, {{0, 2}, one}}};
    const auto sig = nc_principal_symbol(lap, 16);
    REQUIRE(sig.size() == 16);
    for (const auto& s : sig) CHECK(std::abs(s.value.scalar_value() - 1.0) <= 1e-14);
    const auto vl = nc_is_elliptic(lap);
    CHECK(vl.elliptic);
    CHECK_FALSE(vl.heuristic);

    NCDifferentialOperator mixed{th, 2, {{{1, 1}, one}}};
    CHECK_FALSE(nc_is_elliptic(mixed).elliptic);

    // 2 + cos t sin t stays away from zero
    NCDifferentialOperator shifted{th, 2, {{{2, 0}, one * 2.0}, {{0, 2}, one * 2.0}, {{1, 1}, one}}};
    const auto vs = nc_is_elliptic(shifted);
    CHECK(vs.elliptic);
    CHECK(vs.score == doctest::Approx(1.5).epsilon(1e-3));

    // lower-order terms do not enter
    NCDifferentialOperator lower = lap;
    lower.coeffs[{1, 0}] = NCElement::v1(th) * 100.0;
    CHECK(nc_is_elliptic(lower).elliptic);

    // non-scalar coefficients: 2 + V1 is invertible, 1 + V1 is not
    NCDifferentialOperator twoV{th, 2, {{{2, 0}, one * 2.0 + NCElement::v1(th)}, {{0, 2}, one * 2.0 + NCElement::v1(th)}}};
    const auto v2v = nc_is_elliptic(twoV);
    CHECK(v2v.heuristic);
    CHECK(v2v.elliptic);
    NCDifferentialOperator oneV{th, 2, {{{2, 0}, one + NCElement::v1(th)}, {{0, 2}, one + NCElement::v1(th)}}};
    CHECK_FALSE(nc_is_elliptic(oneV).elliptic);

    NCDifferentialOperator empty{th, 2, {{{1, 0}, one}}};
    CHECK_THROWS_AS(nc_principal_symbol(empty), Error);
}

TEST_CASE("element serialization") {
    const Theta th = Theta::ratio(5, 7);
    std::mt19937_64 rng(3);
    const auto a = random_element(rng, th);
    const auto b = nc_from_json(nc_to_json(a));
    CHECK(b.theta() == th);
    CHECK(a.distance(b) == 0.0);

    const auto c = nc_parse_compact("n0:{m0:1+0i};n1:{m-1:0.5-2i, m2:-1}", th);
    CHECK(c.coefficient(0).is_constant());
    CHECK(c.coefficient(1).coeffs().at(-1) == cplx(0.5, -2.0));
    CHECK(c.coefficient(1).coeffs().at(2) == cplx(-1.0, 0.0));

    const json j = {{"terms", {{"1", {{"-1", {0.5, 0.0}}}}}}};
    CHECK_THROWS_AS(nc_from_json(j), Error);
    CHECK(nc_from_json(j, th).coefficient(1).coeffs().at(-1) == cplx(0.5, 0.0));
    CHECK_THROWS_AS(nc_parse_compact("n0:{m0:1};n0:{m1:1}", th), Error);
    CHECK_THROWS_AS(nc_parse_compact("x0:{m0:1}", th), Error);
    CHECK_THROWS_AS(nc_from_json(json{{"theta", "5/7"}, {"terms", {{"0", {{"0", 1.0}}}}}}), Error);
}

TEST_CASE("twisted cyclic model") {
    const Theta th = Theta::ratio(5, 7);
    const auto a = NCElement::one(th) + NCElement::v1(th);
    // untwisted odd cycles never see the eigenvalue -1 of the shift
    Eigen::JacobiSVD<Eigen::MatrixXcd> plain(nc_matrix_representation(a, 5, 0.0));
    CHECK(plain.singularValues()(4) > 0.1);
    Eigen::JacobiSVD<Eigen::MatrixXcd> half(nc_matrix_representation(a, 5, 0.0, std::numbers::pi));
    CHECK(half.singularValues()(4) <= 1e-12);
    // a twisted cycle stays unitary for the pure shift
    const auto V = nc_matrix_representation(NCElement::v1(th, 3), 5, 0.3, 1.1);
    CHECK((V * V.adjoint() - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-14);
}
