#pragma once
// Singular supports and wavefront sets computed as zero sets of the ideal of
// order-0 cutoffs a with Theta_u . a regular, realized through a finite dictionary
// of operators psi_j(D) o chi_c (spatial taper chi_c, direction window psi_j).

#include <optional>
#include <string>
#include <vector>

#include "microsing/spectral.hpp"
#include "microsing/symbol_operator.hpp"
#include "microsing/tameness.hpp"
#include "microsing/trigpoly.hpp"

namespace microsing {

struct DictionaryConfig {
    std::vector<double> widths;  // spatial widths w; bandwidth B = round(beta / w). Empty: beta/(N/8), beta/(7N/64), beta/(3N/32)
    double alpha = 0.0;          // angular aperture (d = 2); 0 means 1.25 * 2pi / directions
    int directions = 16;         // d = 2 direction samples
    double beta = 6.0;           // Kaiser-Bessel shape parameter
    int grid_points = 0;         // x-grid points per axis; 0 means N/8
    double leakage_tol = 1e-6;   // allowed taper energy fraction beyond N/4
};

struct DetectorConfig {
    OracleConfig oracle{};
    double floor_rel = 1e-2;  // amplitude floor for localized pieces, relative to the input's top trusted band
    double threshold = 0.5;
};

struct DictIndex {
    int width = 0;
    std::size_t center = 0;
    std::size_t direction = 0;
    auto operator<=>(const DictIndex&) const = default;
};

class CutoffDictionary {
public:
    CutoffDictionary(const FrequencyLattice& lat, const DictionaryConfig& cfg = {});

    const FrequencyLattice& lattice() const noexcept { return lat_; }
    int dim() const noexcept { return lat_.dim(); }
    int grid() const noexcept { return G_; }
    const std::vector<Point>& centers() const noexcept { return xs_; }
    const std::vector<Direction>& directions() const noexcept { return dirs_; }
    int width_count() const noexcept { return int(bands_.size()); }
    int bandwidth(int w) const { return bands_.at(std::size_t(w)); }
    double alpha() const noexcept { return alpha_; }
    double max_leakage() const noexcept { return leakage_; }
    // operators per width: |x-grid| * |direction grid|
    std::size_t operators_per_width() const noexcept { return xs_.size() * dirs_.size(); }
    std::size_t size() const noexcept { return operators_per_width() * bands_.size(); }

    // 1D taper coefficients hhat_nu, nu = -B..B, normalized to sum 1
    const std::vector<double>& taper(int w) const { return tapers_.at(std::size_t(w)); }
    double bump(int w, double x, double center) const;                 // chi on one axis
    double spatial(int w, const Point& x, const Point& center) const;  // chi_c(x)
    double window(std::size_t j, Mode k) const;                        // psi_j(k)
    double window(std::size_t j, const Direction& omega) const;        // psi_j(omega)
    TrigPoly spatial_poly(int w, std::size_t center) const;

    // psi_j(D) o chi_c as a classical order-0 operator with principal symbol chi_c(x) psi_j(omega)
    SymbolOperator op(const DictIndex& i) const;
    cplx symbol(const DictIndex& i, const Point& x, const Direction& omega) const;

    // fast paths equal to corpus::multiply(spatial_poly, u) and op_apply(op(i), u)
    SpectralDistribution localize(int w, std::size_t center, const SpectralDistribution& u) const;
    SpectralDistribution apply_window(std::size_t j, const SpectralDistribution& piece) const;

    // for every sampled (x, omega) some symbol has modulus >= 1/2; refine > 1 also checks intermediate points
    bool covering(int refine = 1) const;

private:
    FrequencyLattice lat_;
    int G_;
    double alpha_;
    double leakage_ = 0.0;
    std::vector<int> bands_;
    std::vector<std::vector<double>> tapers_;
    std::vector<Point> xs_;
    std::vector<Direction> dirs_;
    std::vector<std::vector<double>> window_tables_;  // psi_j(k) over lattice indices
};

struct SingularSupport {
    int dim = 1;
    int grid = 0;
    std::vector<Point> xs;
    std::vector<double> scores;
    double threshold = 0.5;
    std::vector<std::size_t> detected() const;
    std::vector<std::size_t> detected(double threshold) const;
};

struct WavefrontSet {
    int dim = 1;
    int grid = 0;
    std::vector<Point> xs;
    std::vector<Direction> dirs;
    std::vector<double> scores;  // scores[i * dirs.size() + j]
    double threshold = 0.5;
    std::vector<DictIndex> witnesses;  // lexicographic
    double score(std::size_t i, std::size_t j) const { return scores[i * dirs.size() + j]; }
    std::vector<std::pair<std::size_t, std::size_t>> detected() const;
    std::vector<std::pair<std::size_t, std::size_t>> detected(double threshold) const;
    std::vector<std::size_t> projection() const;
    std::string heatmap_csv() const;
};

using CellSet = std::vector<std::pair<std::size_t, std::size_t>>;

// Symmetric Hausdorff distance in grid cells (circular per axis and on the direction circle).
// Empty vs empty is 0; empty vs nonempty is +infinity. In d = 1 a direction mismatch counts as infinite.
double hausdorff_cells(const CellSet& a, const CellSet& b, int dim, int grid, std::size_t directions);
double hausdorff_cells(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, int dim, int grid);
// circular distance in cells between a grid point and an arbitrary location
double cell_distance(std::size_t i, const Point& x, int dim, int grid);

double detector_reference(const SpectralDistribution& u);
bool piece_is_regular(const SpectralDistribution& piece, double reference, const DetectorConfig& cfg);

SingularSupport singular_support(const SpectralDistribution& u, const CutoffDictionary& dict,
                                 const DetectorConfig& cfg = {});
WavefrontSet wavefront(const SpectralDistribution& u, const CutoffDictionary& dict, const DetectorConfig& cfg = {});

std::vector<std::pair<std::size_t, std::size_t>> microlocal_elliptic_set(const SymbolOperator& P, double tol,
                                                                         const std::vector<Point>& xs,
                                                                         const std::vector<Direction>& dirs);

// Score-weighted circular centroids of the connected clusters of a detected singular support.
std::vector<Point> cluster_centroids(const SingularSupport& s);

struct RemarkResult {
    bool vanishes = false;      // |f| < tol at every detected singular point
    bool product_singular = false;
    bool holds = false;
    std::vector<Point> singular_points;
};
RemarkResult remark_counterexample_check(const SpectralDistribution& u, const TrigPoly& f, const CutoffDictionary& dict,
                                         const DetectorConfig& cfg = {}, double tol = 1e-2);

// U(x, y) = u(x) (x) 1(y) on T^2 with the same bandlimit
SpectralDistribution tensor_with_one(const SpectralDistribution& u);

struct PullbackResult {
    bool pass = false;
    double distance = 0.0;
    CellSet detected;   // 2D wavefront
    CellSet predicted;  // lift of the 1D wavefront
};
// Detected 2D wavefront of U against {((x,y); +-(1,0)) : (x,+-) in WF(u), all y}.
PullbackResult compare_line_lift(const SpectralDistribution& u, const SpectralDistribution& U,
                                 const DictionaryConfig& dcfg1 = {}, const DictionaryConfig& dcfg2 = {},
                                 const DetectorConfig& cfg = {});
// 1D and 2D detectors share the bandlimit of u; the 2D x-grid has the same spacing as the 1D grid.
PullbackResult projection_pullback_wf_check(const SpectralDistribution& u, const DictionaryConfig& dcfg1 = {},
                                            const DictionaryConfig& dcfg2 = {}, const DetectorConfig& cfg = {});

}  // namespace microsing
