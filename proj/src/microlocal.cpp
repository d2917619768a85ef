#include "microsing/microlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "microsing/corpus.hpp"
#include "microsing/error.hpp"
#include "microsing/simd.hpp"

namespace microsing {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double t) {
    t = std::fmod(t + kPi, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t - kPi;
}

// C-infinity bump exp(-1/(1-t^2)) on (-1,1), scaled to peak 1
double smooth_bump(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

std::size_t circ(std::size_t a, std::size_t b, std::size_t n) {
    const std::size_t d = a > b ? a - b : b - a;
    return std::min(d, n - d);
}

}  // namespace

// ---------------------------------------------------------------------------
// dictionary

CutoffDictionary::CutoffDictionary(const FrequencyLattice& lat, const DictionaryConfig& cfg) : lat_(lat) {
    const int N = lat.bandlimit();
    G_ = cfg.grid_points > 0 ? cfg.grid_points : std::max(4, N / 8);
    require(cfg.beta > 0, ErrorKind::InvalidConfig, "taper shape parameter must be positive");
    require(cfg.directions >= 4, ErrorKind::InvalidConfig, "direction grid needs at least 4 samples");
    alpha_ = cfg.alpha > 0 ? cfg.alpha : 1.25 * kTwoPi / cfg.directions;
    if (cfg.widths.empty()) {
        bands_ = {std::max(1, N / 8), std::max(1, int(std::lround(7.0 * N / 64))), std::max(1, int(std::lround(3.0 * N / 32)))};
    } else {
        for (double w : cfg.widths) {
            require(w > 0 && std::isfinite(w), ErrorKind::InvalidConfig, "bump widths must be positive");
            bands_.push_back(std::max(1, int(std::lround(cfg.beta / w))));
        }
    }
    for (int B : bands_) {
        require(B <= 2 * N, ErrorKind::InvalidConfig,
                "bump width too narrow for the lattice (bandwidth " + std::to_string(B) + ")");
        std::vector<double> h(std::size_t(2 * B + 1));
        double sum = 0.0, energy = 0.0, outside = 0.0;
        for (int nu = -B; nu <= B; ++nu) {
            const double r = double(nu) / double(B + 1);
            const double v = std::cyl_bessel_i(0.0, cfg.beta * std::sqrt(std::max(0.0, 1.0 - r * r)));
            h[std::size_t(nu + B)] = v;
            sum += v;
        }
        for (int nu = -B; nu <= B; ++nu) {
            auto& v = h[std::size_t(nu + B)];
            v /= sum;
            energy += v * v;
            if (4 * std::abs(nu) > N) outside += v * v;
        }
        const double leak = outside / energy;
        leakage_ = std::max(leakage_, leak);
        if (leak > cfg.leakage_tol) {
            std::ostringstream os;
            os << "bump leakage beyond N/4 is " << leak << " (tolerance " << cfg.leakage_tol << ") for bandwidth " << B;
            fail(ErrorKind::InvalidConfig, os.str());
        }
        tapers_.push_back(std::move(h));
    }
    xs_ = x_grid(lat.dim(), G_);
    dirs_ = direction_grid(lat.dim(), cfg.directions);
    window_tables_.resize(dirs_.size());
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
        auto& t = window_tables_[j];
        t.resize(lat.size());
        for (std::size_t q = 0; q < t.size(); ++q) t[q] = window(j, lat.mode(q));
    }
}

double CutoffDictionary::bump(int w, double x, double center) const {
    const auto& h = taper(w);
    const int B = bands_[std::size_t(w)];
    double s = h[std::size_t(B)];
    for (int nu = 1; nu <= B; ++nu) s += 2.0 * h[std::size_t(nu + B)] * std::cos(nu * (x - center));
    return s;
}

double CutoffDictionary::spatial(int w, const Point& x, const Point& c) const {
    const double a = bump(w, x[0], c[0]);
    return lat_.dim() == 1 ? a : a * bump(w, x[1], c[1]);
}

double CutoffDictionary::window(std::size_t j, Mode k) const {
    if (lat_.dim() == 1) {
        const int s = j == 0 ? k.k1 : -k.k1;
        return s > 0 ? 1.0 : (s == 0 ? 0.5 : 0.0);
    }
    if (k.k1 == 0 && k.k2 == 0) return 0.0;
    const double r = std::hypot(double(k.k1), double(k.k2));
    return window(j, Direction{k.k1 / r, k.k2 / r});
}

double CutoffDictionary::window(std::size_t j, const Direction& omega) const {
    if (lat_.dim() == 1) return (j == 0) == (omega[0] > 0) ? 1.0 : 0.0;
    const double th = std::atan2(omega[1], omega[0]);
    const double tj = std::atan2(dirs_[j][1], dirs_[j][0]);
    return smooth_bump(wrap_angle(th - tj) / alpha_);
}

TrigPoly CutoffDictionary::spatial_poly(int w, std::size_t center) const {
    const auto& h = taper(w);
    const int B = bands_[std::size_t(w)];
    const Point& c = xs_.at(center);
    std::map<Mode, cplx> m;
    if (lat_.dim() == 1) {
        for (int nu = -B; nu <= B; ++nu) m[{nu, 0}] = std::polar(h[std::size_t(nu + B)], -nu * c[0]);
    } else {
        for (int a = -B; a <= B; ++a)
            for (int b = -B; b <= B; ++b)
                m[{a, b}] = std::polar(h[std::size_t(a + B)] * h[std::size_t(b + B)], -(a * c[0] + b * c[1]));
    }
    return TrigPoly(lat_.dim(), std::move(m));
}

SymbolOperator CutoffDictionary::op(const DictIndex& i) const {
    const TrigPoly chi = spatial_poly(i.width, i.center);
    SymbolOperator::ModeTable modes;
    ClassicalData cd;
    const std::size_t j = i.direction;
    for (const auto& [nu, cv] : chi.coeffs()) {
        std::vector<cplx> tab(lat_.size(), cplx(0.0));
        for (std::size_t q = 0; q < tab.size(); ++q) {
            const Mode out = lat_.mode(q) + nu;
            if (lat_.contains(out)) tab[q] = cv * window_tables_[j][lat_.index(out)];
        }
        modes.emplace(nu, std::move(tab));
        cd.profiles.emplace(nu, [this, cv, j](const Direction& w) { return cv * window(j, w); });
    }
    return SymbolOperator(lat_, 0.0, std::move(modes), std::move(cd));
}

cplx CutoffDictionary::symbol(const DictIndex& i, const Point& x, const Direction& omega) const {
    return spatial(i.width, x, xs_.at(i.center)) * window(i.direction, omega);
}

SpectralDistribution CutoffDictionary::localize(int w, std::size_t center, const SpectralDistribution& u) const {
    require_same_lattice(lat_, u.lattice(), "localize");
    const auto& h = taper(w);
    const int B = bands_[std::size_t(w)];
    const int N = lat_.bandlimit();
    const int side = lat_.side();
    const Point& c = xs_.at(center);
    auto coef = [&](int nu, double x0) { return std::polar(h[std::size_t(nu + B)], -nu * x0); };
    if (lat_.dim() == 1) {
        std::vector<cplx> out(u.size(), cplx(0.0));
        for (int nu = -B; nu <= B; ++nu) {
            const int lo = std::max(-N, -N - nu), hi = std::min(N, N - nu);
            if (lo > hi) continue;
            simd::caxpy(out.data() + (lo + nu + N), coef(nu, c[0]), u.values().data() + (lo + N), std::size_t(hi - lo + 1));
        }
        return SpectralDistribution(lat_, std::move(out));
    }
    // separable taper: convolve along k1 (whole rows), then along k2 (within rows)
    std::vector<cplx> tmp(u.size(), cplx(0.0)), out(u.size(), cplx(0.0));
    const cplx* a = u.values().data();
    for (int nu = -B; nu <= B; ++nu) {
        const cplx cf = coef(nu, c[0]);
        const int lo = std::max(-N, -N - nu), hi = std::min(N, N - nu);
        if (lo > hi) continue;
        simd::caxpy(tmp.data() + std::size_t(lo + nu + N) * side, cf, a + std::size_t(lo + N) * side,
                    std::size_t(hi - lo + 1) * side);
    }
    for (int nu = -B; nu <= B; ++nu) {
        const cplx cf = coef(nu, c[1]);
        const int lo = std::max(-N, -N - nu), hi = std::min(N, N - nu);
        if (lo > hi) continue;
        for (int r = 0; r < side; ++r)
            simd::caxpy(out.data() + std::size_t(r) * side + (lo + nu + N), cf, tmp.data() + std::size_t(r) * side + (lo + N),
                        std::size_t(hi - lo + 1));
    }
    return SpectralDistribution(lat_, std::move(out));
}

SpectralDistribution CutoffDictionary::apply_window(std::size_t j, const SpectralDistribution& piece) const {
    require_same_lattice(lat_, piece.lattice(), "apply_window");
    const auto& t = window_tables_.at(j);
    std::vector<cplx> out(piece.values());
    for (std::size_t q = 0; q < out.size(); ++q) out[q] *= t[q];
    return SpectralDistribution(lat_, std::move(out));
}

bool CutoffDictionary::covering(int refine) const {
    require(refine >= 1, ErrorKind::InvalidConfig, "refinement factor must be >= 1");
    const auto xs = x_grid(lat_.dim(), G_ * refine);
    const auto ds = lat_.dim() == 1 ? dirs_ : direction_grid(2, int(dirs_.size()) * refine);
    for (const auto& x : xs)
        for (const auto& om : ds) {
            bool covered = false;
            for (int w = 0; w < width_count() && !covered; ++w)
                for (std::size_t c = 0; c < xs_.size() && !covered; ++c) {
                    const double s = spatial(w, x, xs_[c]);
                    if (std::abs(s) < 0.5) continue;
                    for (std::size_t j = 0; j < dirs_.size() && !covered; ++j)
                        covered = std::abs(s * window(j, om)) >= 0.5;
                }
            if (!covered) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// detected sets

std::vector<std::size_t> SingularSupport::detected() const { return detected(threshold); }
std::vector<std::size_t> SingularSupport::detected(double th) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] >= th && scores[i] > 0.0) out.push_back(i);
    return out;
}

CellSet WavefrontSet::detected() const { return detected(threshold); }
CellSet WavefrontSet::detected(double th) const {
    CellSet out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < dirs.size(); ++j)
            if (score(i, j) >= th && score(i, j) > 0.0) out.emplace_back(i, j);
    return out;
}

std::vector<std::size_t> WavefrontSet::projection() const {
    std::vector<std::size_t> out;
    for (const auto& [i, j] : detected())
        if (out.empty() || out.back() != i) out.push_back(i);
    return out;
}

std::string WavefrontSet::heatmap_csv() const {
    std::ostringstream os;
    os.precision(6);
    os << "x";
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        if (dim == 1)
            os << ',' << (dirs[j][0] > 0 ? "+" : "-");
        else
            os << ",theta=" << std::atan2(dirs[j][1], dirs[j][0]);
    }
    os << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (dim == 1)
            os << xs[i][0];
        else
            os << xs[i][0] << ';' << xs[i][1];
        for (std::size_t j = 0; j < dirs.size(); ++j) os << ',' << score(i, j);
        os << '\n';
    }
    return os.str();
}

double hausdorff_cells(const CellSet& a, const CellSet& b, int dim, int grid, std::size_t directions) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    const std::size_t G = std::size_t(grid);
    auto dist = [&](const std::pair<std::size_t, std::size_t>& p, const std::pair<std::size_t, std::size_t>& q) {
        if (dim == 1) {
            if (p.second != q.second) return std::numeric_limits<double>::infinity();
            return double(circ(p.first, q.first, G));
        }
        const std::size_t d = std::max({circ(p.first / G, q.first / G, G), circ(p.first % G, q.first % G, G),
                                        circ(p.second, q.second, directions)});
        return double(d);
    };
    auto directed = [&](const CellSet& x, const CellSet& y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, dist(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

double hausdorff_cells(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, int dim, int grid) {
    CellSet x, y;
    for (auto i : a) x.emplace_back(i, 0);
    for (auto i : b) y.emplace_back(i, 0);
    return hausdorff_cells(x, y, dim, grid, 1);
}

double cell_distance(std::size_t i, const Point& x, int dim, int grid) {
    const double h = kTwoPi / grid;
    const auto G = std::size_t(grid);
    auto axis = [&](std::size_t idx, double v) { return std::abs(wrap_angle(v - double(idx) * h)) / h; };
    if (dim == 1) return axis(i, x[0]);
    return std::max(axis(i / G, x[0]), axis(i % G, x[1]));
}

// ---------------------------------------------------------------------------
// detectors

double detector_reference(const SpectralDistribution& u) { return top_band_max(u); }

bool piece_is_regular(const SpectralDistribution& piece, double reference, const DetectorConfig& cfg) {
    OracleConfig oc = cfg.oracle;
    oc.floor_abs = std::max(oc.floor_abs, cfg.floor_rel * reference);
    return coefficient_regularity_oracle(piece, oc).smooth;
}

SingularSupport singular_support(const SpectralDistribution& u, const CutoffDictionary& dict, const DetectorConfig& cfg) {
    require_same_lattice(u.lattice(), dict.lattice(), "singular_support");
    SingularSupport s;
    s.dim = dict.dim();
    s.grid = dict.grid();
    s.xs = dict.centers();
    s.threshold = cfg.threshold;
    s.scores.assign(s.xs.size(), 0.0);
    const double ref = detector_reference(u);
    const int W = dict.width_count();
    for (std::size_t c = 0; c < s.xs.size(); ++c) {
        int fails = 0;
        for (int w = 0; w < W; ++w)
            if (!piece_is_regular(dict.localize(w, c, u), ref, cfg)) ++fails;
        s.scores[c] = double(fails) / W;
    }
    return s;
}

WavefrontSet wavefront(const SpectralDistribution& u, const CutoffDictionary& dict, const DetectorConfig& cfg) {
    require_same_lattice(u.lattice(), dict.lattice(), "wavefront");
    WavefrontSet wf;
    wf.dim = dict.dim();
    wf.grid = dict.grid();
    wf.xs = dict.centers();
    wf.dirs = dict.directions();
    wf.threshold = cfg.threshold;
    const std::size_t C = wf.xs.size(), J = wf.dirs.size();
    const int W = dict.width_count();
    const double ref = detector_reference(u);

    // pass[w][c][j]: psi_j(D) chi_c u passes the oracle
    std::vector<std::vector<char>> pass(std::size_t(W), std::vector<char>(C * J, 0));
    for (int w = 0; w < W; ++w)
        for (std::size_t c = 0; c < C; ++c) {
            const auto piece = dict.localize(w, c, u);
            for (std::size_t j = 0; j < J; ++j) {
                const bool ok = piece_is_regular(dict.apply_window(j, piece), ref, cfg);
                pass[std::size_t(w)][c * J + j] = ok;
                if (ok) wf.witnesses.push_back({w, c, j});
            }
        }
    // symbol factor tables on the sample grid
    std::vector<double> win(J * J);
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t m = 0; m < J; ++m) win[j * J + m] = dict.window(j, wf.dirs[m]);
    wf.scores.assign(C * J, 0.0);
    for (int w = 0; w < W; ++w) {
        std::vector<double> chi(C * C);
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t i = 0; i < C; ++i) chi[c * C + i] = dict.spatial(w, wf.xs[i], wf.xs[c]);
        for (std::size_t i = 0; i < C; ++i)
            for (std::size_t m = 0; m < J; ++m) {
                bool excluded = false;
                for (std::size_t c = 0; c < C && !excluded; ++c) {
                    const double s = chi[c * C + i];
                    if (std::abs(s) < 0.5) continue;
                    for (std::size_t j = 0; j < J && !excluded; ++j)
                        excluded = pass[std::size_t(w)][c * J + j] && std::abs(s * win[j * J + m]) >= 0.5;
                }
                if (!excluded) wf.scores[i * J + m] += 1.0 / W;
            }
    }
    return wf;
}

std::vector<std::pair<std::size_t, std::size_t>> microlocal_elliptic_set(const SymbolOperator& P, double tol,
                                                                         const std::vector<Point>& xs,
                                                                         const std::vector<Direction>& dirs) {
    const auto s = principal_symbol(P, xs, dirs);
    const double m = s.max_abs();
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (m == 0.0) return out;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < dirs.size(); ++j)
            if (std::abs(s.at(i, j)) >= tol * m) out.emplace_back(i, j);
    return out;
}

std::vector<Point> cluster_centroids(const SingularSupport& s) {
    const auto det = s.detected();
    const std::size_t G = std::size_t(s.grid);
    std::vector<char> in(s.xs.size(), 0), seen(s.xs.size(), 0);
    for (auto i : det) in[i] = 1;
    std::vector<Point> out;
    const double h = kTwoPi / double(G);
    for (auto start : det) {
        if (seen[start]) continue;
        std::vector<std::size_t> stack{start}, members;
        seen[start] = 1;
        while (!stack.empty()) {
            const auto i = stack.back();
            stack.pop_back();
            members.push_back(i);
            std::vector<std::size_t> nb;
            if (s.dim == 1) {
                nb = {(i + 1) % G, (i + G - 1) % G};
            } else {
                const std::size_t a = i / G, b = i % G;
                for (std::size_t da : {G - 1, std::size_t(0), std::size_t(1)})
                    for (std::size_t db : {G - 1, std::size_t(0), std::size_t(1)})
                        nb.push_back(((a + da) % G) * G + (b + db) % G);
            }
            for (auto q : nb)
                if (in[q] && !seen[q]) {
                    seen[q] = 1;
                    stack.push_back(q);
                }
        }
        Point p{0.0, 0.0};
        for (int axis = 0; axis < s.dim; ++axis) {
            double cs = 0.0, sn = 0.0;
            for (auto i : members) {
                const std::size_t idx = s.dim == 1 ? i : (axis == 0 ? i / G : i % G);
                cs += s.scores[i] * std::cos(double(idx) * h);
                sn += s.scores[i] * std::sin(double(idx) * h);
            }
            double t = std::atan2(sn, cs);
            if (t < 0) t += kTwoPi;
            p[std::size_t(axis)] = t;
        }
        out.push_back(p);
    }
    return out;
}

RemarkResult remark_counterexample_check(const SpectralDistribution& u, const TrigPoly& f, const CutoffDictionary& dict,
                                         const DetectorConfig& cfg, double tol) {
    RemarkResult r;
    const auto ss = singular_support(u, dict, cfg);
    r.singular_points = cluster_centroids(ss);
    r.vanishes = std::all_of(r.singular_points.begin(), r.singular_points.end(),
                             [&](const Point& p) { return std::abs(f(p)) < tol; });
    r.product_singular = !piece_is_regular(corpus::multiply(f, u), detector_reference(u), cfg);
    r.holds = r.vanishes && r.product_singular;
    return r;
}

SpectralDistribution tensor_with_one(const SpectralDistribution& u) {
    require(u.lattice().dim() == 1, ErrorKind::InvalidInput, "tensor_with_one expects a distribution on T^1");
    const FrequencyLattice lat2(2, u.lattice().bandlimit());
    const double s = std::sqrt(kTwoPi);  // 1(y) = sqrt(2pi) phi_0(y)
    return SpectralDistribution::from_function(lat2, [&](Mode k) { return k.k2 == 0 ? s * u.at({k.k1, 0}) : cplx(0.0); });
}

PullbackResult projection_pullback_wf_check(const SpectralDistribution& u, const DictionaryConfig& dcfg1,
                                            const DictionaryConfig& dcfg2, const DetectorConfig& cfg) {
    return compare_line_lift(u, tensor_with_one(u), dcfg1, dcfg2, cfg);
}

PullbackResult compare_line_lift(const SpectralDistribution& u, const SpectralDistribution& U,
                                 const DictionaryConfig& dcfg1, const DictionaryConfig& dcfg2, const DetectorConfig& cfg) {
    require(u.lattice().dim() == 1 && U.lattice().dim() == 2, ErrorKind::InvalidInput, "line lift compares T^1 with T^2");
    const CutoffDictionary d1(u.lattice(), dcfg1);
    DictionaryConfig c2 = dcfg2;
    if (c2.grid_points == 0) c2.grid_points = d1.grid();
    const CutoffDictionary d2(U.lattice(), c2);
    require(d2.grid() == d1.grid(), ErrorKind::InvalidConfig, "1D and 2D detectors need the same x-grid spacing");
    const auto wf1 = wavefront(u, d1, cfg);
    const auto wf2 = wavefront(U, d2, cfg);
    PullbackResult r;
    r.detected = wf2.detected();
    const std::size_t G = std::size_t(d1.grid()), J = d2.directions().size();
    for (const auto& [i, j] : wf1.detected()) {
        const std::size_t dir = j == 0 ? 0 : J / 2;  // +(1,0) or -(1,0)
        for (std::size_t y = 0; y < G; ++y) r.predicted.emplace_back(i * G + y, dir);
    }
    std::sort(r.predicted.begin(), r.predicted.end());
    r.distance = hausdorff_cells(r.detected, r.predicted, 2, d1.grid(), J);
    r.pass = r.distance <= 1.0;
    return r;
}

}  // namespace microsing
