#pragma once
// Half-wave propagation e^{itD} for D = 1/2 (Op + Op^*), Op = c(x)(1+|xi|^2)^{1/2},
// operator conjugation, Hamiltonian flow of sigma(D) = c(x)|xi| and the checks
// built on them.

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "microsing/microlocal.hpp"
#include "microsing/symbol_operator.hpp"
#include "microsing/trigpoly.hpp"

namespace microsing {

class Generator {
public:
    // c must be real on the grid with min c >= c_min > 0. In d = 2 only constant c is supported.
    Generator(const FrequencyLattice& lat, const TrigPoly& c, double c_min = 0.05);

    const FrequencyLattice& lattice() const noexcept { return lat_; }
    const TrigPoly& profile() const noexcept { return c_; }
    double c_min() const noexcept { return c_min_; }
    const SymbolOperator& symbol_operator() const noexcept { return op_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return D_; }
    const Eigen::VectorXd& eigenvalues() const noexcept { return eig_->values; }
    const Eigen::MatrixXcd& eigenvectors() const noexcept { return eig_->vectors; }
    double hermitian_defect() const;
    // sigma(D)(x, omega) = c(x) on the cosphere
    double principal_symbol(const Point& x) const;

    // e^{itD} as a dense unitary
    Eigen::MatrixXcd propagator(double t) const;

private:
    struct Eigen_ {
        Eigen::VectorXd values;
        Eigen::MatrixXcd vectors;
    };
    FrequencyLattice lat_;
    TrigPoly c_;
    double c_min_;
    SymbolOperator op_;
    Eigen::MatrixXcd D_;
    std::shared_ptr<const Eigen_> eig_;
};

double unitarity_defect(const Generator& g, double t);
double group_law_defect(const Generator& g, double s, double t);

SpectralDistribution propagate(const SpectralDistribution& u, const Generator& g, double t);
Eigen::MatrixXcd conjugate_operator(const Eigen::MatrixXcd& P, const Generator& g, double t);
Eigen::MatrixXcd conjugate_operator(const SymbolOperator& P, const Generator& g, double t);

struct PhasePoint {
    Point x{0.0, 0.0};
    Direction omega{1.0, 0.0};
};

// RK4 for xdot = c(x) omega, xidot = -grad c |xi|, with xi renormalized to the cosphere.
// |dt| must be <= |t|/10 (step-size error otherwise).
PhasePoint hamiltonian_flow(const Generator& g, const PhasePoint& start, double t, double dt);

// Sign s such that the wavefront of e^{itD}u sits at the Hamiltonian flow of time s*t, fixed by
// propagating the positive-frequency half of delta_0 with c = 1 and locating its singularity.
int calibrate_flow_direction(const FrequencyLattice& lat, const DictionaryConfig& dcfg = {},
                             const DetectorConfig& cfg = {}, double t = 0.7);

// mu_t = Hamiltonian flow of time s*t, s from calibrate_flow_direction (cached per process for the default setup)
PhasePoint mu(const Generator& g, const PhasePoint& p, double t, int sign, double dt);

enum class CheckStatus { Pass, Fail, Inconclusive };
const char* to_string(CheckStatus s) noexcept;

struct PropagationResult {
    CheckStatus status = CheckStatus::Inconclusive;
    double distance = 0.0;  // grid cells
    CellSet before, predicted, after;
    int flow_sign = -1;
    double tolerance = 2.0;
};

PropagationResult check_propagation(const SpectralDistribution& u, const Generator& g, double t,
                                    const CutoffDictionary& dict, const DetectorConfig& cfg = {}, int flow_sign = 0,
                                    double dt = 1e-3, double tolerance = 2.0);

// With x.t := x o e^{-itD} and t.a := e^{-itD} a e^{itD}: max |(x.t)a - (x(t.a)).t|
double check_compatibility(const SmoothingKernel& T, const SymbolOperator& P, const Generator& g, double t);
// The same identity with the conjugation as printed, t.a := e^{itD} a e^{-itD}; generally nonzero.
double compatibility_as_printed(const SmoothingKernel& T, const SymbolOperator& P, const Generator& g, double t);

// Normalized Gaussian wave packet at x0 with frequency omega/h and spatial width sqrt(h) (d = 1)
SpectralDistribution wave_packet(const FrequencyLattice& lat, double x0, double omega, double h);

struct TransportRow {
    double h = 0.0;
    double deviation = 0.0;
};
// |<wp, P_t wp> - sigma(P)(mu_{-t}(x0, omega))| maximized over the packet centers.
std::vector<TransportRow> symbol_transport_check(const SymbolOperator& P, const Generator& g, double t,
                                                 const std::vector<double>& hs, int flow_sign = -1,
                                                 const std::vector<double>& centers = {0.4, 1.7, 3.9, 5.2},
                                                 double dt = 1e-3);

}  // namespace microsing
