#pragma once
// Symbolic model of the noncommutative torus acting on point-supported distributions on R.
//
// Elements a = sum_n g_n V1^n are stored with the V1 powers on the right. Products follow
// V1^n f(s) = f(s + n) V1^n, V1 xi(s) = xi(s + 1) and V2 = e^{-2 pi i s / theta}, so
// V2 V1 = e^{2 pi i / theta} V1 V2. Distributions carry the right action
// delta_x . (g V1^n) = g(x) delta_{x+n} extended by the Leibniz rule.

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "microsing/serialization.hpp"
#include "microsing/spectral.hpp"

namespace microsing {

struct Theta {
    double value = 1.0;
    std::optional<std::pair<long, long>> rational;  // p/q in lowest terms

    static Theta real(double v);
    static Theta ratio(long p, long q);
    // "5/7", "0.6180339887"
    static Theta parse(const std::string& text);
    std::string describe() const;
    bool operator==(const Theta& o) const noexcept { return value == o.value; }
};

// f(s) = sum_m c_m e^{-2 pi i m s / theta}
class ThetaFunction {
public:
    ThetaFunction() = default;
    ThetaFunction(Theta theta, std::map<int, cplx> coeffs);
    static ThetaFunction constant(Theta theta, cplx c);
    static ThetaFunction v2_power(Theta theta, int m, cplx c = 1.0);

    const Theta& theta() const noexcept { return theta_; }
    const std::map<int, cplx>& coeffs() const noexcept { return c_; }
    cplx operator()(double s) const;
    // k-th derivative in s
    ThetaFunction derivative(int k = 1) const;
    // s -> f(s + a)
    ThetaFunction shifted(double a) const;
    ThetaFunction operator*(const ThetaFunction& o) const;
    ThetaFunction operator+(const ThetaFunction& o) const;
    ThetaFunction operator*(cplx z) const;
    double l1() const;
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_constant() const noexcept;

private:
    void prune();
    Theta theta_;
    std::map<int, cplx> c_;
};

class NCElement {
public:
    NCElement() = default;
    NCElement(Theta theta, std::map<int, ThetaFunction> terms);
    static NCElement zero(Theta theta);
    static NCElement one(Theta theta);
    static NCElement v1(Theta theta, int n = 1);
    static NCElement v2(Theta theta, int m = 1);
    // f V1^n
    static NCElement monomial(const ThetaFunction& f, int n);

    const Theta& theta() const noexcept { return theta_; }
    const std::map<int, ThetaFunction>& terms() const noexcept { return terms_; }
    ThetaFunction coefficient(int n) const;
    // f_n with a = sum_n V1^n f_n, i.e. f_n = g_n(. - n)
    std::map<int, ThetaFunction> left_coefficients() const;
    bool is_scalar() const noexcept;
    cplx scalar_value() const;  // requires is_scalar()

    NCElement operator+(const NCElement& o) const;
    NCElement operator-(const NCElement& o) const;
    NCElement operator*(cplx z) const;
    double distance(const NCElement& o) const;  // l1 distance of coefficients

private:
    Theta theta_;
    std::map<int, ThetaFunction> terms_;
};

NCElement nc_multiply(const NCElement& a, const NCElement& b);

// canonical derivations: delta_1(g V1^n) = (-2 pi i n / theta) g V1^n, delta_2(g V1^n) = g' V1^n
NCElement nc_derivation(int j, const NCElement& a);

// Defining action on a function sampled at s + k, k integer. Used by the relation oracle.
cplx nc_apply_to_function(const NCElement& a, const std::function<cplx(double)>& xi, double s);

struct PointSingularity {
    double x = 0.0;
    int order = 0;  // derivative order of the delta
    cplx weight = 1.0;
};

struct SymbolicDistribution {
    std::vector<PointSingularity> terms;
    bool smooth_remainder = false;

    static SymbolicDistribution delta(double x, int order = 0, cplx weight = 1.0);
    // merge equal (x, order), drop weights below tol, sort by (x, order)
    SymbolicDistribution& normalize(double tol = 0.0);
    bool has_singular_terms(double tol = 0.0) const;
    // pairing with a test function given its derivatives: sum w (-1)^rho phi^{(rho)}(x)
    cplx pair(const std::function<cplx(double, int)>& phi_derivative) const;
    SymbolicDistribution operator+(const SymbolicDistribution& o) const;
};

// s -> sum_k p_k s^k; admitted so that the connection -2 pi i s / theta can act
struct PolynomialMultiplier {
    std::vector<cplx> coeffs;
    cplx operator()(double s) const;
    PolynomialMultiplier derivative(int k = 1) const;
};

using Multiplier = std::variant<ThetaFunction, PolynomialMultiplier>;

// f u with the Leibniz rule f delta_x^{(rho)} = sum_j (-1)^j C(rho, j) f^{(j)}(x) delta_x^{(rho - j)}
SymbolicDistribution multiply(const Multiplier& f, const SymbolicDistribution& u);
SymbolicDistribution shift(const SymbolicDistribution& u, double n);
SymbolicDistribution nc_act(const NCElement& a, const SymbolicDistribution& u);

// delta_0 . a has no singular term of nonzero weight
bool nc_wf_membership(const NCElement& a, double tol = 1e-12);
// independent formula: every left coefficient satisfies f_n(n) = 0
bool nc_wf_formula(const NCElement& a, double tol = 1e-12);

// nabla_1 = multiplication by -2 pi i s / theta, nabla_2 = d/ds
SymbolicDistribution nc_apply_connection(int j, const SymbolicDistribution& u, const Theta& theta);

// Differential operator sum_{alpha+beta <= n} C_{alpha beta} nabla_1^alpha nabla_2^beta; only the top
// order enters the principal symbol.
struct NCDifferentialOperator {
    Theta theta;
    int order = 0;
    std::map<std::pair<int, int>, NCElement> coeffs;
};

struct NCSymbolSample {
    double t = 0.0;
    NCElement value;
};
// sigma(t) = sum_{alpha+beta=n} C_{alpha beta} cos^alpha t sin^beta t at t_k = 2 pi k / samples
std::vector<NCSymbolSample> nc_principal_symbol(const NCDifferentialOperator& D, int samples = 64);

// Finite cyclic model: xi on s0 + {0..K-1}, V1 the cyclic shift picking up e^{i twist} at each
// wrap, g acting by g(s0 + k). For theta = p/q and K a multiple of p this is one Bloch fiber.
Eigen::MatrixXcd nc_matrix_representation(const NCElement& a, int K, double s0, double twist = 0.0);

struct EllipticityVerdict {
    bool elliptic = false;
    bool heuristic = false;
    double score = 0.0;  // min |sigma| (scalar) or smallest singular value (heuristic)
};
EllipticityVerdict nc_is_elliptic(const NCDifferentialOperator& D, int samples = 64, double tol = 1e-10);

// {"theta": "5/7", "terms": {"<n>": {"<m>": [re, im]}}} with g_n stored against V1^n on the right,
// or the compact string "n0:{m0:1+0i};n1:{m-1:0.5+0i}". `fallback` is used when no theta is given.
NCElement nc_from_json(const json& j, const std::optional<Theta>& fallback = std::nullopt);
NCElement nc_parse_compact(const std::string& text, const Theta& theta);
json nc_to_json(const NCElement& a);

}  // namespace microsing
