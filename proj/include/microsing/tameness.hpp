#pragma once
// Tameness degree estimation and regularity classification for maps between the
// graded spaces of distributions (Sobolev grading) and smoothing kernels
// (Hilbert-Schmidt grading). The sup over all inputs in the tameness inequality
//   ||phi(x)||'_n <= C_n ||x||^k_{n+r}
// is replaced by a max over a reproducible set of probe families.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "microsing/spectral.hpp"
#include "microsing/symbol_operator.hpp"

namespace microsing {

enum class Space { Distributions, Kernels };
const char* to_string(Space s) noexcept;

using GradedObject = std::variant<SpectralDistribution, SmoothingKernel>;
Space space_of(const GradedObject& x) noexcept;
double graded_norm(const GradedObject& x, double n);
bool is_zero(const GradedObject& x) noexcept;

class MapHandle {
public:
    using Fn = std::function<GradedObject(const GradedObject&)>;
    MapHandle(std::string name, Space in, Space out, Fn f, bool linear = true);

    GradedObject operator()(const GradedObject& x) const;
    const std::string& name() const noexcept { return name_; }
    Space domain() const noexcept { return in_; }
    Space codomain() const noexcept { return out_; }
    bool linear() const noexcept { return linear_; }

private:
    std::string name_;
    Space in_, out_;
    Fn f_;
    bool linear_;
};

// Theta_u(T) = T(u)
MapHandle theta_map(const SpectralDistribution& u);
// (Theta_u . P)(T) = Theta_u(T o P) = Theta_{Pu}(T)
MapHandle theta_right_action(const SpectralDistribution& u, const SymbolOperator& P);
// T -> T o P on kernels
MapHandle right_multiplication_map(const SymbolOperator& P);
// T -> P o T on kernels
MapHandle left_multiplication_map(const SymbolOperator& P);
// phi . a : x -> phi(x o a) for kernel-domain maps (generic, dense)
MapHandle right_action(const MapHandle& phi, const SymbolOperator& a);
MapHandle identity_map(Space s);
MapHandle zero_map(const FrequencyLattice& lat, Space in, Space out);
// outer after inner
MapHandle compose(const MapHandle& outer, const MapHandle& inner);

// K = diag(k_n) in the phi basis
SmoothingKernel diagonal_probe(const FrequencyLattice& lat, const std::vector<cplx>& weights);

struct ProbeFamily {
    std::string name;
    // Ladder families assign each probe to one window level (levels[p], or p itself when levels is
    // empty) and ratio(n) takes the max over the probes of level n. Fixed families use every probe
    // at every level.
    bool ladder = false;
    std::vector<GradedObject> probes;
    std::vector<int> levels;
    int level_of(std::size_t p) const { return levels.empty() ? int(p) : levels[p]; }
};

struct ProbeSet {
    std::string recipe;
    std::uint64_t seed = 0;
    Space space = Space::Kernels;
    std::vector<ProbeFamily> families;
    void validate(int n_lo, int n_hi) const;
};

struct TamenessConfig {
    int n_lo = 6;
    int n_hi = 14;
    int r_max = 6;  // r ranges over (1/2)Z in [-r_max, r_max]; also the regularity depth
    double tau = 1.5;
    double b = 0.0;
    int random_probes = 2;
    // coefficients of computed inputs below noise_rel * max |a_k| are roundoff (same floor as the oracle)
    double noise_rel = 1e-13;
    std::uint64_t seed = 1;
    void validate() const;
};

// Default recipe: single-mode ladders of both signs (rescaled so that x_n = (1+lambda_c)^{-n/2} phi_c (x) phi_c),
// the rescaled diagonal family diag((1+lambda)^{-n/2}), an off-diagonal rank-one ladder and seeded random
// dense probes; for distributions: single-mode ladders plus shifted deltas.
ProbeSet default_probes(const FrequencyLattice& lat, Space space, const TamenessConfig& cfg);
// mode index used at window level n
int ladder_mode(const FrequencyLattice& lat, int n, int n_lo, int n_hi);

enum class Verdict { Tame, Regular, Inconclusive };
const char* to_string(Verdict v) noexcept;

struct TamenessReport {
    std::string map_name;
    std::optional<double> r_hat;
    double k_hat = 1.0;
    int n_lo = 0, n_hi = 0;
    double r_min = 0.0, r_max = 0.0;
    std::vector<std::pair<int, double>> constants;  // C_n at r_hat (max over families)
    std::vector<std::pair<double, bool>> passes;    // per candidate r
    double b = 0.0;
    bool b_satisfied = true;    // n_lo >= b + |r_hat|
    bool monotone_verdicts = true;  // every r >= r_hat passes
    double residual = 0.0;      // worst growth factor max_{i<j} ratio_j / ratio_i at r_hat
    Verdict verdict = Verdict::Inconclusive;
    std::string recipe;
    std::uint64_t seed = 0;
    std::string failing_family;  // family attaining ratio(n) where the candidate just below r_hat breaks
};

TamenessReport estimate_tameness(const MapHandle& phi, const ProbeSet& probes, int n_lo, int n_hi, double r_min,
                                 double r_max, double tau = 1.5, double b = 0.0);
TamenessReport estimate_tameness(const MapHandle& phi, const FrequencyLattice& lat, const TamenessConfig& cfg = {});

struct RegularityResult {
    bool regular = false;
    TamenessReport report;
};
RegularityResult is_regular_map(const MapHandle& phi, const ProbeSet& probes, int depth, const TamenessConfig& cfg = {});
RegularityResult is_regular_map(const MapHandle& phi, const FrequencyLattice& lat, const TamenessConfig& cfg = {});

struct OracleConfig {
    double s_max = 6.0;
    double noise_rel = 1e-13;  // floor relative to max |a_k|
    double floor_abs = 0.0;    // absolute amplitude floor
    int fit_bands = 3;
};

struct OracleResult {
    bool smooth = true;
    double slope = 0.0;
    std::vector<double> band_max;  // band b covers 2^b <= |k|_inf < 2^{b+1}
    int bands_used = 0;
};

// Fit of log max-band |a_k| against log(1+|k|) over the trusted dyadic bands (top octave discarded).
OracleResult coefficient_regularity_oracle(const SpectralDistribution& u, const OracleConfig& cfg = {});
// largest |a_k| over the top trusted band
double top_band_max(const SpectralDistribution& u);
int trusted_band_count(const FrequencyLattice& lat);

struct TheoremMoResult {
    bool classifier = false;
    bool oracle = false;
    bool agree = false;
    TamenessReport report;
};
TheoremMoResult theorem_mo_check(const SpectralDistribution& u, const TamenessConfig& cfg = {},
                                 const OracleConfig& ocfg = {});

double left_module_defect(const MapHandle& phi, const std::vector<SymbolOperator>& ops, const ProbeSet& probes);
bool check_left_module_map(const MapHandle& phi, const std::vector<SymbolOperator>& ops, const ProbeSet& probes,
                           double tol);

struct RightIdealResult {
    bool precondition = false;  // Theta_u o P classified regular
    bool holds = false;         // Theta_u o (P o Q) classified regular
};
RightIdealResult right_ideal_check(const SpectralDistribution& u, const SymbolOperator& P, const SymbolOperator& Q,
                                   const TamenessConfig& cfg = {});

}  // namespace microsing
