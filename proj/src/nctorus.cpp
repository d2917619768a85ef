#include "microsing/nctorus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <regex>
#include <sstream>

#include "microsing/error.hpp"

namespace microsing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_theta(const Theta& a, const Theta& b) {
    require(a == b, ErrorKind::ThetaMismatch, "theta parameters differ: " + a.describe() + " vs " + b.describe());
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

cplx eval_multiplier(const Multiplier& f, double s, int derivative) {
    return std::visit([&](const auto& g) { return g.derivative(derivative)(s); }, f);
}

}  // namespace

Theta Theta::real(double v) {
    require(std::isfinite(v) && v > 0.0 && v <= 1.0, ErrorKind::InvalidInput, "theta must lie in (0, 1]");
    return Theta{v, std::nullopt};
}

Theta Theta::ratio(long p, long q) {
    require(p > 0 && q > 0 && p <= q, ErrorKind::InvalidInput, "theta = p/q must lie in (0, 1]");
    const long g = std::gcd(p, q);
    return Theta{double(p) / double(q), std::make_pair(p / g, q / g)};
}

Theta Theta::parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            std::size_t used_p = 0, used_q = 0;
            const long p = std::stol(text.substr(0, slash), &used_p);
            const long q = std::stol(text.substr(slash + 1), &used_q);
            require(used_p == slash && used_q == text.size() - slash - 1, ErrorKind::InvalidInput, "bad theta " + text);
            return ratio(p, q);
        }
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        require(used == text.size(), ErrorKind::InvalidInput, "bad theta " + text);
        return real(v);
    } catch (const std::logic_error&) {
        fail(ErrorKind::InvalidInput, "cannot parse theta '" + text + "'");
    }
}

std::string Theta::describe() const {
    if (rational) return std::to_string(rational->first) + "/" + std::to_string(rational->second);
    std::ostringstream os;
    os.precision(17);
    os << value;
    return os.str();
}

ThetaFunction::ThetaFunction(Theta theta, std::map<int, cplx> coeffs) : theta_(theta), c_(std::move(coeffs)) { prune(); }

ThetaFunction ThetaFunction::constant(Theta theta, cplx c) { return ThetaFunction(theta, {{0, c}}); }

ThetaFunction ThetaFunction::v2_power(Theta theta, int m, cplx c) { return ThetaFunction(theta, {{m, c}}); }

void ThetaFunction::prune() { std::erase_if(c_, [](const auto& kv) { return kv.second == cplx(0.0); }); }

cplx ThetaFunction::operator()(double s) const {
    cplx r = 0.0;
    for (const auto& [m, c] : c_) r += c * std::polar(1.0, -kTwoPi * m * s / theta_.value);
    return r;
}

ThetaFunction ThetaFunction::derivative(int k) const {
    if (k == 0) return *this;
    std::map<int, cplx> out;
    for (const auto& [m, c] : c_) out[m] = c * std::pow(cplx(0.0, -kTwoPi * m / theta_.value), k);
    return ThetaFunction(theta_, std::move(out));
}

ThetaFunction ThetaFunction::shifted(double a) const {
    std::map<int, cplx> out;
    for (const auto& [m, c] : c_) out[m] = c * std::polar(1.0, -kTwoPi * m * a / theta_.value);
    return ThetaFunction(theta_, std::move(out));
}

ThetaFunction ThetaFunction::operator*(const ThetaFunction& o) const {
    require_same_theta(theta_, o.theta_);
    std::map<int, cplx> out;
    for (const auto& [m, c] : c_)
        for (const auto& [k, d] : o.c_) out[m + k] += c * d;
    return ThetaFunction(theta_, std::move(out));
}

ThetaFunction ThetaFunction::operator+(const ThetaFunction& o) const {
    require_same_theta(theta_, o.theta_);
    auto out = c_;
    for (const auto& [k, d] : o.c_) out[k] += d;
    return ThetaFunction(theta_, std::move(out));
}

ThetaFunction ThetaFunction::operator*(cplx z) const {
    auto out = c_;
    for (auto& [k, d] : out) d *= z;
    return ThetaFunction(theta_, std::move(out));
}

double ThetaFunction::l1() const {
    double s = 0.0;
    for (const auto& [m, c] : c_) s += std::abs(c);
    return s;
}

bool ThetaFunction::is_constant() const noexcept { return c_.empty() || (c_.size() == 1 && c_.begin()->first == 0); }

NCElement::NCElement(Theta theta, std::map<int, ThetaFunction> terms) : theta_(theta), terms_(std::move(terms)) {
    for (const auto& [n, f] : terms_) require_same_theta(theta_, f.theta());
    std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
}

NCElement NCElement::zero(Theta theta) { return NCElement(theta, {}); }
NCElement NCElement::one(Theta theta) { return v1(theta, 0); }
NCElement NCElement::v1(Theta theta, int n) { return NCElement(theta, {{n, ThetaFunction::constant(theta, 1.0)}}); }
NCElement NCElement::v2(Theta theta, int m) { return NCElement(theta, {{0, ThetaFunction::v2_power(theta, m)}}); }
NCElement NCElement::monomial(const ThetaFunction& f, int n) { return NCElement(f.theta(), {{n, f}}); }

ThetaFunction NCElement::coefficient(int n) const {
    const auto it = terms_.find(n);
    return it == terms_.end() ? ThetaFunction(theta_, {}) : it->second;
}

std::map<int, ThetaFunction> NCElement::left_coefficients() const {
    std::map<int, ThetaFunction> out;
    for (const auto& [n, g] : terms_) out.emplace(n, g.shifted(-double(n)));
    return out;
}

bool NCElement::is_scalar() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second.is_constant());
}

cplx NCElement::scalar_value() const {
    require(is_scalar(), ErrorKind::InvalidInput, "element is not a scalar multiple of the identity");
    return terms_.empty() ? cplx(0.0) : terms_.begin()->second.coeffs().begin()->second;
}

NCElement NCElement::operator+(const NCElement& o) const {
    require_same_theta(theta_, o.theta_);
    auto out = terms_;
    for (const auto& [n, f] : o.terms_) {
        auto it = out.find(n);
        if (it == out.end()) out.emplace(n, f);
        else it->second = it->second + f;
    }
    return NCElement(theta_, std::move(out));
}

NCElement NCElement::operator*(cplx z) const {
    auto out = terms_;
    for (auto& [n, f] : out) f = f * z;
    return NCElement(theta_, std::move(out));
}

NCElement NCElement::operator-(const NCElement& o) const { return *this + o * cplx(-1.0); }

double NCElement::distance(const NCElement& o) const {
    double d = 0.0;
    for (const auto& [n, f] : (*this - o).terms_) d += f.l1();
    return d;
}

NCElement nc_multiply(const NCElement& a, const NCElement& b) {
    require_same_theta(a.theta(), b.theta());
    std::map<int, ThetaFunction> out;
    for (const auto& [n, g] : a.terms()) {
        for (const auto& [m, h] : b.terms()) {
            // g V1^n h V1^m = g h(. + n) V1^{n+m}
            const ThetaFunction prod = g * h.shifted(double(n));
            auto it = out.find(n + m);
            if (it == out.end()) out.emplace(n + m, prod);
            else it->second = it->second + prod;
        }
    }
    return NCElement(a.theta(), std::move(out));
}

NCElement nc_derivation(int j, const NCElement& a) {
    require(j == 1 || j == 2, ErrorKind::InvalidInput, "derivation index must be 1 or 2");
    std::map<int, ThetaFunction> out;
    for (const auto& [n, g] : a.terms())
        out.emplace(n, j == 1 ? g * cplx(0.0, -kTwoPi * n / a.theta().value) : g.derivative(1));
    return NCElement(a.theta(), std::move(out));
}

cplx nc_apply_to_function(const NCElement& a, const std::function<cplx(double)>& xi, double s) {
    cplx r = 0.0;
    for (const auto& [n, g] : a.terms()) r += g(s) * xi(s + n);
    return r;
}

SymbolicDistribution SymbolicDistribution::delta(double x, int order, cplx weight) {
    require(order >= 0, ErrorKind::InvalidInput, "derivative order must be nonnegative");
    SymbolicDistribution u;
    u.terms.push_back({x, order, weight});
    return u;
}

SymbolicDistribution& SymbolicDistribution::normalize(double tol) {
    std::sort(terms.begin(), terms.end(), [](const PointSingularity& a, const PointSingularity& b) {
        return a.x != b.x ? a.x < b.x : a.order < b.order;
    });
    std::vector<PointSingularity> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && std::abs(merged.back().x - t.x) <= 1e-12 && merged.back().order == t.order)
            merged.back().weight += t.weight;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [tol](const PointSingularity& t) { return std::abs(t.weight) <= tol; });
    terms = std::move(merged);
    return *this;
}

bool SymbolicDistribution::has_singular_terms(double tol) const {
    return std::any_of(terms.begin(), terms.end(), [tol](const PointSingularity& t) { return std::abs(t.weight) > tol; });
}

cplx SymbolicDistribution::pair(const std::function<cplx(double, int)>& phi_derivative) const {
    cplx r = 0.0;
    for (const auto& t : terms) r += t.weight * (t.order % 2 ? -1.0 : 1.0) * phi_derivative(t.x, t.order);
    return r;
}

SymbolicDistribution SymbolicDistribution::operator+(const SymbolicDistribution& o) const {
    SymbolicDistribution r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    r.smooth_remainder = smooth_remainder || o.smooth_remainder;
    r.normalize();
    return r;
}

cplx PolynomialMultiplier::operator()(double s) const {
    cplx r = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * s + *it;
    return r;
}

PolynomialMultiplier PolynomialMultiplier::derivative(int k) const {
    PolynomialMultiplier p = *this;
    for (int i = 0; i < k && !p.coeffs.empty(); ++i) {
        std::vector<cplx> d;
        for (std::size_t j = 1; j < p.coeffs.size(); ++j) d.push_back(p.coeffs[j] * double(j));
        p.coeffs = std::move(d);
    }
    return p;
}

SymbolicDistribution multiply(const Multiplier& f, const SymbolicDistribution& u) {
    SymbolicDistribution out;
    out.smooth_remainder = u.smooth_remainder;
    for (const auto& t : u.terms) {
        for (int j = 0; j <= t.order; ++j) {
            const double sign = j % 2 ? -1.0 : 1.0;
            const cplx w = sign * binomial(t.order, j) * eval_multiplier(f, t.x, j) * t.weight;
            out.terms.push_back({t.x, t.order - j, w});
        }
    }
    out.normalize();
    return out;
}

SymbolicDistribution shift(const SymbolicDistribution& u, double n) {
    SymbolicDistribution out = u;
    for (auto& t : out.terms) t.x += n;
    return out;
}

SymbolicDistribution nc_act(const NCElement& a, const SymbolicDistribution& u) {
    SymbolicDistribution out;
    out.smooth_remainder = u.smooth_remainder;
    for (const auto& [n, g] : a.terms()) {
        const auto piece = shift(multiply(g, u), double(n));
        out.terms.insert(out.terms.end(), piece.terms.begin(), piece.terms.end());
    }
    out.normalize();
    return out;
}

namespace {
double membership_scale(const NCElement& a) {
    double s = 1.0;
    for (const auto& [n, g] : a.terms()) s = std::max(s, g.l1());
    return s;
}
}  // namespace

bool nc_wf_membership(const NCElement& a, double tol) {
    return !nc_act(a, SymbolicDistribution::delta(0.0)).has_singular_terms(tol * membership_scale(a));
}

bool nc_wf_formula(const NCElement& a, double tol) {
    const double t = tol * membership_scale(a);
    for (const auto& [n, f] : a.left_coefficients())
        if (std::abs(f(double(n))) > t) return false;
    return true;
}

SymbolicDistribution nc_apply_connection(int j, const SymbolicDistribution& u, const Theta& theta) {
    require(j == 1 || j == 2, ErrorKind::InvalidInput, "connection index must be 1 or 2");
    if (j == 1) return multiply(PolynomialMultiplier{{0.0, cplx(0.0, -kTwoPi / theta.value)}}, u);
    SymbolicDistribution out = u;
    for (auto& t : out.terms) ++t.order;
    return out;
}

std::vector<NCSymbolSample> nc_principal_symbol(const NCDifferentialOperator& D, int samples) {
    require(samples >= 4, ErrorKind::InvalidConfig, "need at least 4 symbol samples");
    bool top = false;
    for (const auto& [ab, C] : D.coeffs) {
        require(ab.first >= 0 && ab.second >= 0 && ab.first + ab.second <= D.order, ErrorKind::InvalidInput,
                "coefficient index outside the declared order");
        top = top || ab.first + ab.second == D.order;
    }
    require(top, ErrorKind::InvalidInput, "operator has no coefficient of top order");
    std::vector<NCSymbolSample> out;
    for (int k = 0; k < samples; ++k) {
        const double t = kTwoPi * k / samples;
        NCElement s = NCElement::zero(D.theta);
        for (const auto& [ab, C] : D.coeffs) {
            if (ab.first + ab.second != D.order) continue;
            s = s + C * cplx(std::pow(std::cos(t), ab.first) * std::pow(std::sin(t), ab.second));
        }
        out.push_back({t, std::move(s)});
    }
    return out;
}

Eigen::MatrixXcd nc_matrix_representation(const NCElement& a, int K, double s0, double twist) {
    require(K >= 1, ErrorKind::InvalidConfig, "representation size must be positive");
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(K, K);
    for (const auto& [n, g] : a.terms())
        for (int k = 0; k < K; ++k) {
            const int j = k + n;
            const int wraps = j >= 0 ? j / K : -((-j + K - 1) / K);
            M(k, j - wraps * K) += g(s0 + k) * std::polar(1.0, twist * wraps);
        }
    return M;
}

EllipticityVerdict nc_is_elliptic(const NCDifferentialOperator& D, int samples, double tol) {
    const auto sigma = nc_principal_symbol(D, samples);
    bool scalar = true;
    for (const auto& [ab, C] : D.coeffs) scalar = scalar && C.is_scalar();
    EllipticityVerdict v;
    v.score = std::numeric_limits<double>::infinity();
    if (scalar) {
        for (const auto& s : sigma) v.score = std::min(v.score, std::abs(s.value.scalar_value()));
        v.elliptic = v.score > tol;
        return v;
    }
    // Bloch sampling of the shift model. For theta = p/q the coefficients are p-periodic along
    // s0 + Z, so the twisted p-cycles over all twists reproduce the full spectrum; the twist and
    // s0 grids are what make this a heuristic. Irrational theta uses a long cycle instead.
    v.heuristic = true;
    const int K = D.theta.rational ? int(D.theta.rational->first) : 64;
    constexpr int twists = 32;
    for (const auto& s : sigma) {
        for (double s0 : {0.0, 0.25, 0.5, 0.75}) {
            for (int tw = 0; tw < twists; ++tw) {
                const Eigen::MatrixXcd M = nc_matrix_representation(s.value, K, s0, kTwoPi * tw / twists);
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
                v.score = std::min(v.score, svd.singularValues()(K - 1));
            }
        }
    }
    v.elliptic = v.score > tol;
    return v;
}

}  // namespace microsing

namespace microsing {

namespace {

cplx parse_complex(const std::string& s) {
    // forms: "1", "-0.5i", "1+0i", "2.5-3i"
    static const std::regex full(R"(^\s*([+-]?[0-9.eE]+(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*([0-9.eE]*)i)?\s*$)");
    std::smatch m;
    require(std::regex_match(s, m, full) && (m[1].matched || m[2].matched), ErrorKind::InvalidInput,
            "cannot parse complex number '" + s + "'");
    double re = m[1].matched ? std::stod(m[1].str()) : 0.0;
    double im = 0.0;
    if (m[2].matched) {
        const std::string mag = m[3].str();
        im = (mag.empty() ? 1.0 : std::stod(mag)) * (m[2].str() == "-" ? -1.0 : 1.0);
    }
    return {re, im};
}

}  // namespace

NCElement nc_parse_compact(const std::string& text, const Theta& theta) {
    static const std::regex term(R"(^\s*n(-?\d+)\s*:\s*\{([^}]*)\}\s*$)");
    static const std::regex mode(R"(^\s*m(-?\d+)\s*:\s*(.+?)\s*$)");
    std::map<int, ThetaFunction> terms;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        if (part.find_first_not_of(" \t\n") == std::string::npos) continue;
        std::smatch tm;
        require(std::regex_match(part, tm, term), ErrorKind::InvalidInput, "bad element term '" + part + "'");
        std::map<int, cplx> c;
        std::stringstream ms(tm[2].str());
        std::string mpart;
        while (std::getline(ms, mpart, ',')) {
            if (mpart.find_first_not_of(" \t\n") == std::string::npos) continue;
            std::smatch mm;
            require(std::regex_match(mpart, mm, mode), ErrorKind::InvalidInput, "bad mode entry '" + mpart + "'");
            c[std::stoi(mm[1].str())] += parse_complex(mm[2].str());
        }
        const int n = std::stoi(tm[1].str());
        require(!terms.count(n), ErrorKind::InvalidInput, "duplicate V1 power " + std::to_string(n));
        terms.emplace(n, ThetaFunction(theta, std::move(c)));
    }
    return NCElement(theta, std::move(terms));
}

NCElement nc_from_json(const json& j, const std::optional<Theta>& fallback) {
    std::optional<Theta> theta = fallback;
    if (j.is_object() && j.contains("theta")) {
        const auto& t = j["theta"];
        theta = t.is_string() ? Theta::parse(t.get<std::string>()) : Theta::real(t.get<double>());
    }
    require(theta.has_value(), ErrorKind::InvalidInput, "element has no theta and none was supplied");
    if (j.is_string()) return nc_parse_compact(j.get<std::string>(), *theta);
    require(j.is_object() && j.contains("terms"), ErrorKind::InvalidInput, "element JSON needs a 'terms' field");
    const auto& terms = j["terms"];
    if (terms.is_string()) return nc_parse_compact(terms.get<std::string>(), *theta);
    require(terms.is_object(), ErrorKind::InvalidInput, "'terms' must map V1 powers to coefficient maps");
    std::map<int, ThetaFunction> out;
    try {
        for (const auto& [ns, coeffs] : terms.items()) {
            std::map<int, cplx> c;
            for (const auto& [ms, v] : coeffs.items()) {
                require(v.is_array() && v.size() == 2, ErrorKind::InvalidInput, "coefficients are [re, im] pairs");
                c[std::stoi(ms)] += cplx(v[0].get<double>(), v[1].get<double>());
            }
            out.emplace(std::stoi(ns), ThetaFunction(*theta, std::move(c)));
        }
    } catch (const std::logic_error& e) {
        fail(ErrorKind::InvalidInput, std::string("bad element JSON: ") + e.what());
    }
    return NCElement(*theta, std::move(out));
}

json nc_to_json(const NCElement& a) {
    json terms = json::object();
    for (const auto& [n, f] : a.terms()) {
        json c = json::object();
        for (const auto& [m, v] : f.coeffs()) c[std::to_string(m)] = {v.real(), v.imag()};
        terms[std::to_string(n)] = c;
    }
    return {{"theta", a.theta().describe()}, {"terms", terms}};
}

}  // namespace microsing
