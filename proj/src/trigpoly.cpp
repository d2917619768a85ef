#include "microsing/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "microsing/error.hpp"

namespace microsing {

TrigPoly::TrigPoly(int dim, std::map<Mode, std::complex<double>> coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {
    require(dim == 1 || dim == 2, ErrorKind::InvalidInput, "trigonometric polynomial dimension must be 1 or 2");
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        require(dim == 2 || it->first.k2 == 0, ErrorKind::InvalidInput, "1D polynomial with a second-axis mode");
        require(std::isfinite(it->second.real()) && std::isfinite(it->second.imag()), ErrorKind::InvalidInput,
                "non-finite trigonometric coefficient");
        it = it->second == std::complex<double>(0.0) ? coeffs_.erase(it) : std::next(it);
    }
}

TrigPoly TrigPoly::constant(int dim, double c) { return TrigPoly(dim, {{Mode{0, 0}, c}}); }

TrigPoly TrigPoly::cosine_series(double c, const std::vector<double>& cos_coeffs, const std::vector<double>& sin_coeffs) {
    std::map<Mode, std::complex<double>> m;
    m[{0, 0}] += c;
    for (std::size_t j = 0; j < cos_coeffs.size(); ++j) {
        const int nu = int(j) + 1;
        m[{nu, 0}] += 0.5 * cos_coeffs[j];
        m[{-nu, 0}] += 0.5 * cos_coeffs[j];
    }
    for (std::size_t j = 0; j < sin_coeffs.size(); ++j) {
        const int nu = int(j) + 1;
        // sin(nu x) = (e^{i nu x} - e^{-i nu x}) / 2i
        m[{nu, 0}] += std::complex<double>(0.0, -0.5 * sin_coeffs[j]);
        m[{-nu, 0}] += std::complex<double>(0.0, 0.5 * sin_coeffs[j]);
    }
    return TrigPoly(1, std::move(m));
}

TrigPoly TrigPoly::exp_mode(int dim, Mode nu, std::complex<double> amplitude) { return TrigPoly(dim, {{nu, amplitude}}); }

std::complex<double> TrigPoly::coeff(Mode nu) const {
    const auto it = coeffs_.find(nu);
    return it == coeffs_.end() ? std::complex<double>(0.0) : it->second;
}

int TrigPoly::max_mode() const noexcept {
    int m = 0;
    for (const auto& [nu, c] : coeffs_) m = std::max({m, std::abs(nu.k1), std::abs(nu.k2)});
    return m;
}

std::complex<double> TrigPoly::operator()(const Point& x) const {
    std::complex<double> acc = 0.0;
    for (const auto& [nu, c] : coeffs_) acc += c * std::polar(1.0, nu.k1 * x[0] + nu.k2 * x[1]);
    return acc;
}

TrigPoly TrigPoly::derivative(int axis) const {
    std::map<Mode, std::complex<double>> m;
    for (const auto& [nu, c] : coeffs_) {
        const int k = axis == 0 ? nu.k1 : nu.k2;
        if (k != 0) m[nu] = c * std::complex<double>(0.0, double(k));
    }
    return TrigPoly(dim_, std::move(m));
}

bool TrigPoly::is_real(double tol) const {
    for (const auto& [nu, c] : coeffs_)
        if (std::abs(c - std::conj(coeff(-nu))) > tol) return false;
    return true;
}

double TrigPoly::min_real_on_grid(int samples) const {
    double best = std::numeric_limits<double>::infinity();
    const double h = 2.0 * std::numbers::pi / samples;
    const int s2 = dim_ == 2 ? samples : 1;
    for (int i = 0; i < samples; ++i)
        for (int j = 0; j < s2; ++j) best = std::min(best, (*this)(Point{i * h, j * h}).real());
    return best;
}

TrigPoly TrigPoly::operator*(const TrigPoly& o) const {
    require(dim_ == o.dim_, ErrorKind::InvalidInput, "trigonometric polynomial dimension mismatch");
    std::map<Mode, std::complex<double>> m;
    for (const auto& [a, ca] : coeffs_)
        for (const auto& [b, cb] : o.coeffs_) m[a + b] += ca * cb;
    return TrigPoly(dim_, std::move(m));
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
    require(dim_ == o.dim_, ErrorKind::InvalidInput, "trigonometric polynomial dimension mismatch");
    auto m = coeffs_;
    for (const auto& [b, cb] : o.coeffs_) m[b] += cb;
    return TrigPoly(dim_, std::move(m));
}

TrigPoly TrigPoly::operator*(std::complex<double> s) const {
    auto m = coeffs_;
    for (auto& [nu, c] : m) c *= s;
    return TrigPoly(dim_, std::move(m));
}

}  // namespace microsing
