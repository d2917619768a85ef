#pragma once
// Band-limited functions on T^d given by finitely many Fourier modes:
// f(x) = sum_nu fhat_nu e^{i nu.x}. Used for multipliers, bumps and wave-speed profiles.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "microsing/lattice.hpp"

namespace microsing {

class TrigPoly {
public:
    TrigPoly() = default;
    TrigPoly(int dim, std::map<Mode, std::complex<double>> coeffs);

    static TrigPoly constant(int dim, double c);
    // c + sum a_j cos(j x) + sum b_j sin(j x) in d = 1 (index j = position + 1).
    static TrigPoly cosine_series(double c, const std::vector<double>& cos_coeffs,
                                  const std::vector<double>& sin_coeffs = {});
    static TrigPoly exp_mode(int dim, Mode nu, std::complex<double> amplitude = 1.0);

    int dim() const noexcept { return dim_; }
    const std::map<Mode, std::complex<double>>& coeffs() const noexcept { return coeffs_; }
    std::complex<double> coeff(Mode nu) const;
    int max_mode() const noexcept;  // sup-norm of the support

    std::complex<double> operator()(const Point& x) const;
    std::complex<double> operator()(double x) const { return (*this)(Point{x, 0.0}); }
    // partial derivative along axis (0 or 1)
    TrigPoly derivative(int axis = 0) const;
    bool is_real(double tol = 1e-14) const;
    // min over an equispaced grid with `samples` points per axis
    double min_real_on_grid(int samples) const;

    TrigPoly operator*(const TrigPoly& o) const;
    TrigPoly operator+(const TrigPoly& o) const;
    TrigPoly operator*(std::complex<double> s) const;

private:
    int dim_ = 1;
    std::map<Mode, std::complex<double>> coeffs_;
};

}  // namespace microsing
