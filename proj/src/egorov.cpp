#include "microsing/egorov.hpp"

#include <cmath>
#include <numbers>

#include "microsing/corpus.hpp"
#include "microsing/error.hpp"

namespace microsing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double x) {
    x = std::fmod(x, kTwoPi);
    return x < 0 ? x + kTwoPi : x;
}

std::size_t nearest_cell(double x, int grid) {
    const double h = kTwoPi / grid;
    return std::size_t(std::lround(wrap(x) / h)) % std::size_t(grid);
}

}  // namespace

const char* to_string(CheckStatus s) noexcept {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

Generator::Generator(const FrequencyLattice& lat, const TrigPoly& c, double c_min)
    : lat_(lat), c_(c), c_min_(c_min), op_(SymbolOperator::zero(lat)) {
    require(c.dim() == lat.dim(), ErrorKind::LatticeMismatch, "wave-speed profile dimension differs from lattice");
    require(c_min > 0, ErrorKind::InvalidConfig, "ellipticity floor must be positive");
    require(lat.dim() == 1 ? lat.bandlimit() <= 512 : lat.bandlimit() <= 24, ErrorKind::Unsupported,
            "dense propagation is capped at N <= 512 (d = 1) and N <= 24 (d = 2)");
    if (lat.dim() == 2) require(c.max_mode() == 0, ErrorKind::Unsupported, "d = 2 generators must have constant c");
    require(c.is_real(1e-14), ErrorKind::InvalidInput, "wave speed must be real");
    require(2 * c.max_mode() <= lat.bandlimit(), ErrorKind::InvalidInput, "wave-speed profile exceeds N/2 modes");
    const double cmin = c.min_real_on_grid(std::max(64, 8 * lat.bandlimit()));
    require(cmin >= c_min, ErrorKind::Ellipticity,
            "wave speed min " + std::to_string(cmin) + " is below the ellipticity floor " + std::to_string(c_min));
    op_ = SymbolOperator::variable_coefficient(lat, c, 1.0);
    const Eigen::MatrixXcd M = op_.to_matrix();
    D_ = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D_);
    require(es.info() == Eigen::Success, ErrorKind::InvalidInput, "eigendecomposition failed");
    eig_ = std::make_shared<const Eigen_>(Eigen_{es.eigenvalues(), es.eigenvectors()});
}

double Generator::hermitian_defect() const { return (D_ - D_.adjoint()).cwiseAbs().maxCoeff(); }

double Generator::principal_symbol(const Point& x) const { return c_(x).real(); }

Eigen::MatrixXcd Generator::propagator(double t) const {
    const auto& V = eig_->vectors;
    Eigen::VectorXcd ph(eig_->values.size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, t * eig_->values(i));
    return V * ph.asDiagonal() * V.adjoint();
}

double unitarity_defect(const Generator& g, double t) {
    const auto U = g.propagator(t);
    const auto n = U.rows();
    return (U.adjoint() * U - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

double group_law_defect(const Generator& g, double s, double t) {
    return (g.propagator(s) * g.propagator(t) - g.propagator(s + t)).cwiseAbs().maxCoeff();
}

SpectralDistribution propagate(const SpectralDistribution& u, const Generator& g, double t) {
    require_same_lattice(u.lattice(), g.lattice(), "propagate");
    if (t == 0.0) return u;
    const auto& V = g.eigenvectors();
    const Eigen::Map<const Eigen::VectorXcd> a(u.values().data(), Eigen::Index(u.size()));
    Eigen::VectorXcd b = V.adjoint() * a;
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) *= std::polar(1.0, t * g.eigenvalues()(i));
    const Eigen::VectorXcd out = V * b;
    return SpectralDistribution(u.lattice(), std::vector<cplx>(out.data(), out.data() + out.size()));
}

Eigen::MatrixXcd conjugate_operator(const Eigen::MatrixXcd& P, const Generator& g, double t) {
    const auto U = g.propagator(t);
    return U * P * U.adjoint();
}

Eigen::MatrixXcd conjugate_operator(const SymbolOperator& P, const Generator& g, double t) {
    require_same_lattice(P.lattice(), g.lattice(), "conjugate_operator");
    return conjugate_operator(P.to_matrix(), g, t);
}

PhasePoint hamiltonian_flow(const Generator& g, const PhasePoint& start, double t, double dt) {
    if (t == 0.0) return start;
    require(dt > 0 && std::abs(dt) <= std::abs(t) / 10.0, ErrorKind::StepSize, "flow step dt must satisfy 0 < dt <= |t|/10");
    const int d = g.lattice().dim();
    const TrigPoly& c = g.profile();
    const TrigPoly cx = c.derivative(0);
    const TrigPoly cy = d == 2 ? c.derivative(1) : TrigPoly::constant(d, 0.0);
    // state (x1, x2, w1, w2) with |w| = 1; on the cosphere xidot = -grad c + (grad c . w) w
    using State = std::array<double, 4>;
    auto rhs = [&](const State& s) {
        const Point x{s[0], s[1]};
        const double cv = c(x).real();
        State r{cv * s[2], d == 2 ? cv * s[3] : 0.0, 0.0, 0.0};
        if (d == 2) {
            const double gx = cx(x).real(), gy = cy(x).real();
            const double proj = gx * s[2] + gy * s[3];
            r[2] = -gx + proj * s[2];
            r[3] = -gy + proj * s[3];
        }
        return r;
    };
    const int steps = int(std::ceil(std::abs(t) / dt - 1e-9));
    const double h = t / steps;
    State s{start.x[0], start.x[1], start.omega[0], start.omega[1]};
    if (d == 1) s = {start.x[0], 0.0, start.omega[0] >= 0 ? 1.0 : -1.0, 0.0};
    auto axpy = [](const State& a, double k, const State& b) {
        return State{a[0] + k * b[0], a[1] + k * b[1], a[2] + k * b[2], a[3] + k * b[3]};
    };
    for (int i = 0; i < steps; ++i) {
        const State k1 = rhs(s);
        const State k2 = rhs(axpy(s, h / 2, k1));
        const State k3 = rhs(axpy(s, h / 2, k2));
        const State k4 = rhs(axpy(s, h, k3));
        for (int q = 0; q < 4; ++q) s[q] += h / 6.0 * (k1[q] + 2 * k2[q] + 2 * k3[q] + k4[q]);
        const double n = std::hypot(s[2], s[3]);
        s[2] /= n;
        s[3] /= n;
    }
    return {{s[0], s[1]}, {s[2], s[3]}};
}

int calibrate_flow_direction(const FrequencyLattice& lat, const DictionaryConfig& dcfg, const DetectorConfig& cfg,
                             double t) {
    require(lat.dim() == 1, ErrorKind::Unsupported, "flow calibration runs on T^1");
    const Generator free(lat, TrigPoly::constant(1, 1.0));
    const CutoffDictionary dict(lat, dcfg);
    // positive-frequency half of delta_0
    const auto u = SpectralDistribution::from_function(
        lat, [](Mode k) { return k.k1 > 0 ? cplx(1.0 / std::sqrt(kTwoPi)) : (k.k1 == 0 ? cplx(0.5 / std::sqrt(kTwoPi)) : cplx(0.0)); });
    const auto ss = singular_support(propagate(u, free, t), dict, cfg);
    const auto pts = cluster_centroids(ss);
    require(pts.size() == 1, ErrorKind::InvalidConfig, "flow calibration did not isolate a single singularity");
    const double x = pts[0][0];
    const double dplus = std::abs(std::remainder(x - t, kTwoPi));
    const double dminus = std::abs(std::remainder(x + t, kTwoPi));
    return dplus <= dminus ? +1 : -1;
}

PhasePoint mu(const Generator& g, const PhasePoint& p, double t, int sign, double dt) {
    return hamiltonian_flow(g, p, sign * t, std::min(dt, std::abs(t) / 10.0));
}

PropagationResult check_propagation(const SpectralDistribution& u, const Generator& g, double t,
                                    const CutoffDictionary& dict, const DetectorConfig& cfg, int flow_sign, double dt,
                                    double tolerance) {
    require_same_lattice(u.lattice(), dict.lattice(), "check_propagation");
    PropagationResult r;
    r.tolerance = tolerance;
    r.flow_sign = flow_sign != 0 ? flow_sign : calibrate_flow_direction(u.lattice());
    const auto wf0 = wavefront(u, dict, cfg);
    r.before = wf0.detected();
    if (r.before.empty()) return r;  // inconclusive
    const auto wf1 = wavefront(propagate(u, g, t), dict, cfg);
    r.after = wf1.detected();
    const int G = dict.grid();
    const auto& dirs = dict.directions();
    for (const auto& [i, j] : r.before) {
        const PhasePoint p = t == 0.0 ? PhasePoint{wf0.xs[i], dirs[j]} : mu(g, {wf0.xs[i], dirs[j]}, t, r.flow_sign, dt);
        std::size_t cell, dir = 0;
        if (dict.dim() == 1) {
            cell = nearest_cell(p.x[0], G);
            dir = p.omega[0] > 0 ? 0 : 1;
        } else {
            cell = nearest_cell(p.x[0], G) * std::size_t(G) + nearest_cell(p.x[1], G);
            double best = -2.0;
            for (std::size_t q = 0; q < dirs.size(); ++q) {
                const double dot = dirs[q][0] * p.omega[0] + dirs[q][1] * p.omega[1];
                if (dot > best) best = dot, dir = q;
            }
        }
        r.predicted.emplace_back(cell, dir);
    }
    std::sort(r.predicted.begin(), r.predicted.end());
    r.predicted.erase(std::unique(r.predicted.begin(), r.predicted.end()), r.predicted.end());
    r.distance = hausdorff_cells(r.after, r.predicted, dict.dim(), G, dirs.size());
    r.status = r.distance <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    return r;
}

double check_compatibility(const SmoothingKernel& T, const SymbolOperator& P, const Generator& g, double t) {
    require_same_lattice(T.lattice(), g.lattice(), "check_compatibility");
    const Eigen::MatrixXcd Um = g.propagator(-t), Up = g.propagator(t);
    const Eigen::MatrixXcd A = P.to_matrix();
    const Eigen::MatrixXcd xt = T.matrix() * Um;         // x.t
    const Eigen::MatrixXcd ta = Um * A * Up;             // t.a
    const Eigen::MatrixXcd lhs = xt * A;                 // (x.t) a
    const Eigen::MatrixXcd rhs = (T.matrix() * ta) * Um;  // (x (t.a)).t
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

double compatibility_as_printed(const SmoothingKernel& T, const SymbolOperator& P, const Generator& g, double t) {
    const Eigen::MatrixXcd Um = g.propagator(-t), Up = g.propagator(t);
    const Eigen::MatrixXcd A = P.to_matrix();
    const Eigen::MatrixXcd lhs = T.matrix() * Um * A;
    const Eigen::MatrixXcd rhs = T.matrix() * (Up * A * Um) * Um;
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

SpectralDistribution wave_packet(const FrequencyLattice& lat, double x0, double omega, double h) {
    require(lat.dim() == 1, ErrorKind::Unsupported, "wave packets are implemented on T^1");
    require(h > 0, ErrorKind::InvalidConfig, "wave-packet scale must be positive");
    const double k0 = omega / h, spread = 1.0 / std::sqrt(h);
    require(std::abs(k0) + 5.0 * spread <= lat.bandlimit(), ErrorKind::InvalidConfig,
            "wave-packet scale h is below the grid resolution");
    auto u = SpectralDistribution::from_function(lat, [&](Mode k) {
        const double d = k.k1 - k0;
        return std::polar(std::exp(-0.5 * h * d * d), -k.k1 * x0);
    });
    return u * cplx(1.0 / sobolev_norm(u, 0.0));
}

std::vector<TransportRow> symbol_transport_check(const SymbolOperator& P, const Generator& g, double t,
                                                 const std::vector<double>& hs, int flow_sign,
                                                 const std::vector<double>& centers, double dt) {
    require(P.is_classical() && P.order() == 0.0, ErrorKind::Unsupported, "transport check needs a classical order-0 P");
    require_same_lattice(P.lattice(), g.lattice(), "symbol_transport_check");
    const Eigen::MatrixXcd Pt = conjugate_operator(P, g, t);
    std::vector<TransportRow> rows;
    for (double h : hs) {
        double worst = 0.0;
        for (double x0 : centers)
            for (double om : {1.0, -1.0}) {
                const auto wp = wave_packet(P.lattice(), x0, om, h);
                const Eigen::Map<const Eigen::VectorXcd> a(wp.values().data(), Eigen::Index(wp.size()));
                const cplx q = a.dot(Pt * a);  // conjugate-linear in the first slot
                const PhasePoint p = t == 0.0 ? PhasePoint{{x0, 0.0}, {om, 0.0}}
                                              : mu(g, {{x0, 0.0}, {om, 0.0}}, -t, flow_sign, dt);
                worst = std::max(worst, std::abs(q - evaluate_principal_symbol(P, p.x, p.omega)));
            }
        rows.push_back({h, worst});
    }
    return rows;
}

}  // namespace microsing
