#pragma once
// Longitudinal operators on G = Pair(T^1) x T^1 over M = T^1. Right invariance in the
// group factor makes every operator block diagonal in the group frequency eta; the
// vector representation pi keeps the eta = 0 block.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "microsing/egorov.hpp"
#include "microsing/microlocal.hpp"
#include "microsing/symbol_operator.hpp"

namespace microsing {

struct GroupoidModel {
    GroupoidModel(int N, int N_g);
    FrequencyLattice base;   // w-lattice
    FrequencyLattice total;  // (w, g) lattice with the same bandlimit
    int N_g;
    int block_count() const noexcept { return 2 * N_g + 1; }
    // fibers G_x carry product Lebesgue measure; vol(G_x^y) = 2 pi
    static constexpr double fiber_volume = 6.283185307179586;
};

// principal symbol p(w; xi, eta) on the unit circle of A*(G)
using AlgebroidSymbol = std::function<cplx(double w, const Direction& xi_eta)>;

class LongitudinalOperator {
public:
    LongitudinalOperator(GroupoidModel model, double order, std::vector<SymbolOperator> blocks,
                         std::optional<AlgebroidSymbol> symbol = std::nullopt);
    static LongitudinalOperator from_blocks(const GroupoidModel& m, double order,
                                            const std::function<SymbolOperator(int eta)>& block,
                                            std::optional<AlgebroidSymbol> symbol = std::nullopt);
    static LongitudinalOperator identity(const GroupoidModel& m);
    static LongitudinalOperator zero(const GroupoidModel& m);
    // blocks xi^2 + eta^2
    static LongitudinalOperator laplacian(const GroupoidModel& m);
    // X_s for the section s = (v, c) of A(G) = TM + R: blocks v(w) xi + c(w) eta, symbol v xi + c eta
    static LongitudinalOperator from_section(const GroupoidModel& m, const TrigPoly& v, const TrigPoly& c);

    const GroupoidModel& model() const noexcept { return model_; }
    double order() const noexcept { return order_; }
    const SymbolOperator& block(int eta) const;
    bool has_symbol() const noexcept { return symbol_.has_value(); }
    const AlgebroidSymbol& symbol() const;
    int x_mode_bound() const noexcept;

private:
    GroupoidModel model_;
    double order_;
    std::vector<SymbolOperator> blocks_;
    std::optional<AlgebroidSymbol> symbol_;
};

LongitudinalOperator compose(const LongitudinalOperator& P, const LongitudinalOperator& Q);

SymbolOperator vector_representation(const LongitudinalOperator& P);
// blockwise action on distributions over (w, g); modes with |eta| > N_g are dropped
SpectralDistribution longitudinal_apply(const LongitudinalOperator& P, const SpectralDistribution& F);
// A_{k, eta} = a_k [eta = 0]
SpectralDistribution range_pullback(const SpectralDistribution& u, const GroupoidModel& m);

// sup over base points of the two fiber L1 integrals of K(w, w', h) = sum_eta K_eta(w, w') e^{i eta h} / (2 pi)
double groupoid_l1_norm(const LongitudinalOperator& P, int quadrature = 0);
double operator_norm(const SymbolOperator& P);

struct AnchorSymbol {
    std::vector<Point> xs;          // base grid
    std::vector<Direction> dirs;    // unit circle in (xi, eta)
    std::vector<cplx> values;
    double degree = 0.0;
    cplx at(std::size_t i, std::size_t j) const { return values[i * dirs.size() + j]; }
};
AnchorSymbol sample_anchor_symbol(const LongitudinalOperator& P, int grid, int directions = 16);
// q-bar: restriction to the (xi, 0) directions; result lives on T*T^1 with directions {+, -}
SampledSymbol anchor_restrict(const AnchorSymbol& sigma);

class LongitudinalGenerator {
public:
    // blocks must be Hermitian to 1e-12
    LongitudinalGenerator(GroupoidModel model, std::vector<Eigen::MatrixXcd> blocks);
    const GroupoidModel& model() const noexcept { return model_; }
    const Eigen::MatrixXcd& block(int eta) const;
    Eigen::MatrixXcd propagator(int eta, double t) const;
    double max_hermitian_defect() const;

private:
    struct Eig {
        Eigen::VectorXd values;
        Eigen::MatrixXcd vectors;
    };
    GroupoidModel model_;
    std::vector<Eigen::MatrixXcd> blocks_;
    std::vector<std::shared_ptr<const Eig>> eig_;
};

// blocks 1/2 (Op + Op^*) of c(w)(1 + xi^2 + eta^2)^{1/2}
LongitudinalGenerator build_longitudinal_generator(const GroupoidModel& m, const TrigPoly& c, double c_min = 0.05);
// pi(D_G) as a dense base matrix
Eigen::MatrixXcd vector_representation(const LongitudinalGenerator& D);

// max |pi(e^{itD} P e^{-itD}) - e^{it pi(D)} pi(P) e^{-it pi(D)}| with the right side built from the base generator
double check_equivariance(const LongitudinalOperator& P, const LongitudinalGenerator& D, const Generator& base, double t);
// e^{itD} on (w, g) distributions, blockwise
SpectralDistribution longitudinal_propagate(const SpectralDistribution& F, const LongitudinalGenerator& D, double t);

PullbackResult check_anchor_wf(const SpectralDistribution& u, const GroupoidModel& m, const DictionaryConfig& dcfg1 = {},
                               const DictionaryConfig& dcfg2 = {}, const DetectorConfig& cfg = {});

}  // namespace microsing
