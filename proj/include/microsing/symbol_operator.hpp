#pragma once
// Filtered pseudodifferential operators on the truncated torus in the x-mode form
//   (Pu)_j = sum_nu c_nu(j - nu) a_{j - nu},
// i.e. matrix entries P_{j,k} = c_{j-k}(k). Output frequencies leaving the lattice
// are dropped (orthogonal projection), never wrapped.

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "microsing/spectral.hpp"
#include "microsing/trigpoly.hpp"

namespace microsing {

// Angular profile h_nu(omega) of a classical operator; omega is a unit direction
// (d = 1 uses omega = (+1,0) or (-1,0)).
using AngularProfile = std::function<cplx(const Direction&)>;

struct ClassicalData {
    std::map<Mode, AngularProfile> profiles;  // sigma(x, omega) = sum_nu h_nu(omega) e^{i nu.x}
};

class SymbolOperator {
public:
    using ModeTable = std::map<Mode, std::vector<cplx>>;  // nu -> c_nu(k) over lattice indices

    SymbolOperator(FrequencyLattice lattice, double order, ModeTable modes,
                   std::optional<ClassicalData> classical = std::nullopt);

    static SymbolOperator zero(const FrequencyLattice& lat, double order = 0.0);
    static SymbolOperator identity(const FrequencyLattice& lat);
    // (1 + Delta)^{m/2}
    static SymbolOperator bessel_potential(const FrequencyLattice& lat, double m);
    // Fourier multiplier a(k) of declared order, optionally classical with profile h(omega)
    static SymbolOperator multiplier(const FrequencyLattice& lat, double order, const std::function<cplx(Mode)>& a,
                                     std::optional<AngularProfile> profile = std::nullopt);
    // multiplication by a trigonometric polynomial (order 0, classical)
    static SymbolOperator multiplication(const FrequencyLattice& lat, const TrigPoly& f);
    // c(x)(1 + |xi|^2)^{m/2}, left quantized; principal symbol c(x)
    static SymbolOperator variable_coefficient(const FrequencyLattice& lat, const TrigPoly& c, double m);
    // Recover the mode table from a dense matrix (diagonals with any nonzero entry).
    static SymbolOperator from_matrix(const FrequencyLattice& lat, double order, const Eigen::MatrixXcd& M,
                                      double drop_tol = 0.0);

    const FrequencyLattice& lattice() const noexcept { return lattice_; }
    double order() const noexcept { return order_; }
    const ModeTable& modes() const noexcept { return modes_; }
    int x_mode_bound() const noexcept;  // M_x
    bool is_classical() const noexcept { return classical_.has_value(); }
    const ClassicalData& classical() const;
    // set when composition produced M_x > N/2
    bool truncation_warning() const noexcept { return truncation_warning_; }
    cplx coefficient(Mode nu, Mode k) const;

    Eigen::MatrixXcd to_matrix() const;

    SymbolOperator adjoint() const;
    SymbolOperator operator+(const SymbolOperator& o) const;
    SymbolOperator operator-(const SymbolOperator& o) const;
    SymbolOperator operator*(cplx s) const;

    // max over sampled |xi| >= min_radius of |c_nu(xi) - h_nu(xi/|xi|)(1+|xi|^2)^{m/2}| / (1+|xi|^2)^{m/2}
    double classical_deviation(int min_radius) const;

private:
    FrequencyLattice lattice_;
    double order_;
    ModeTable modes_;
    std::optional<ClassicalData> classical_;
    bool truncation_warning_ = false;

    friend SymbolOperator op_compose(const SymbolOperator&, const SymbolOperator&);
};

SpectralDistribution op_apply(const SymbolOperator& P, const SpectralDistribution& u);
SymbolOperator op_compose(const SymbolOperator& P, const SymbolOperator& Q);
SymbolOperator commutator(const SymbolOperator& P, const SymbolOperator& Q);

// P o T and T o P as smoothing kernels
SmoothingKernel left_compose(const SymbolOperator& P, const SmoothingKernel& T);
SmoothingKernel right_compose(const SmoothingKernel& T, const SymbolOperator& P);

// Sample grids on T^d and on the cosphere.
std::vector<Point> x_grid(int dim, int points_per_axis);
std::vector<Direction> direction_grid(int dim, int directions);

struct SampledSymbol {
    std::vector<Point> xs;
    std::vector<Direction> dirs;
    std::vector<cplx> values;  // values[i * dirs.size() + j] = sigma(xs[i], dirs[j])
    double degree = 0.0;
    cplx at(std::size_t xi, std::size_t dj) const { return values[xi * dirs.size() + dj]; }
    double max_abs() const;
};

cplx evaluate_principal_symbol(const SymbolOperator& P, const Point& x, const Direction& omega);
SampledSymbol principal_symbol(const SymbolOperator& P, const std::vector<Point>& xs, const std::vector<Direction>& dirs);
// sampled (x index, direction index) with |sigma| < tol
std::vector<std::pair<std::size_t, std::size_t>> char_set(const SampledSymbol& sigma, double tol);
std::vector<std::pair<std::size_t, std::size_t>> char_set(const SymbolOperator& P, double tol,
                                                         const std::vector<Point>& xs,
                                                         const std::vector<Direction>& dirs);

}  // namespace microsing
