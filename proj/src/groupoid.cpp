#include "microsing/groupoid.hpp"

#include <cmath>
#include <numbers>

#include "microsing/error.hpp"

namespace microsing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_model(const GroupoidModel& a, const GroupoidModel& b, const char* what) {
    require(a.base == b.base && a.N_g == b.N_g, ErrorKind::LatticeMismatch,
            std::string(what) + ": groupoid models differ");
}

std::size_t block_slot(const GroupoidModel& m, int eta) {
    require(std::abs(eta) <= m.N_g, ErrorKind::InvalidInput, "group frequency outside [-N_g, N_g]");
    return std::size_t(eta + m.N_g);
}

}  // namespace

GroupoidModel::GroupoidModel(int N, int N_g_) : base(1, N), total(2, N), N_g(N_g_) {
    require(N_g_ >= 0 && N_g_ <= N, ErrorKind::InvalidConfig, "group-factor bound must satisfy 0 <= N_g <= N");
}

LongitudinalOperator::LongitudinalOperator(GroupoidModel model, double order, std::vector<SymbolOperator> blocks,
                                           std::optional<AlgebroidSymbol> symbol)
    : model_(std::move(model)), order_(order), blocks_(std::move(blocks)), symbol_(std::move(symbol)) {
    require(int(blocks_.size()) == model_.block_count(), ErrorKind::InvalidInput, "expected one block per group frequency");
    for (const auto& b : blocks_) {
        require_same_lattice(b.lattice(), model_.base, "longitudinal block");
        require(b.order() == order_, ErrorKind::InvalidInput, "block orders must agree with the declared order");
    }
}

LongitudinalOperator LongitudinalOperator::from_blocks(const GroupoidModel& m, double order,
                                                       const std::function<SymbolOperator(int)>& block,
                                                       std::optional<AlgebroidSymbol> symbol) {
    std::vector<SymbolOperator> bs;
    bs.reserve(std::size_t(m.block_count()));
    for (int eta = -m.N_g; eta <= m.N_g; ++eta) bs.push_back(block(eta));
    return LongitudinalOperator(m, order, std::move(bs), std::move(symbol));
}

LongitudinalOperator LongitudinalOperator::identity(const GroupoidModel& m) {
    return from_blocks(
        m, 0.0, [&](int) { return SymbolOperator::identity(m.base); }, [](double, const Direction&) { return cplx(1.0); });
}

LongitudinalOperator LongitudinalOperator::zero(const GroupoidModel& m) {
    return from_blocks(
        m, 0.0, [&](int) { return SymbolOperator::zero(m.base); }, [](double, const Direction&) { return cplx(0.0); });
}

LongitudinalOperator LongitudinalOperator::laplacian(const GroupoidModel& m) {
    return from_blocks(
        m, 2.0,
        [&](int eta) {
            return SymbolOperator::multiplier(
                m.base, 2.0, [eta](Mode k) { return cplx(double(k.k1) * k.k1 + double(eta) * eta); },
                [](const Direction&) { return cplx(1.0); });
        },
        [](double, const Direction&) { return cplx(1.0); });
}

LongitudinalOperator LongitudinalOperator::from_section(const GroupoidModel& m, const TrigPoly& v, const TrigPoly& c) {
    require(v.dim() == 1 && c.dim() == 1, ErrorKind::InvalidInput, "section coefficients live on T^1");
    auto block = [&](int eta) {
        std::map<Mode, cplx> nus;
        for (const auto& [nu, a] : v.coeffs()) nus[nu] += 0.0;
        for (const auto& [nu, a] : c.coeffs()) nus[nu] += 0.0;
        SymbolOperator::ModeTable modes;
        ClassicalData cd;
        for (const auto& [nu, unused] : nus) {
            const cplx vn = v.coeff(nu), cn = c.coeff(nu);
            std::vector<cplx> tab(m.base.size());
            for (std::size_t i = 0; i < tab.size(); ++i) tab[i] = vn * double(m.base.mode(i).k1) + cn * double(eta);
            modes.emplace(nu, std::move(tab));
            cd.profiles.emplace(nu, [vn](const Direction& w) { return vn * w[0]; });
        }
        return SymbolOperator(m.base, 1.0, std::move(modes), std::move(cd));
    };
    AlgebroidSymbol sym = [v, c](double w, const Direction& xe) {
        const Point p{w, 0.0};
        return v(p) * xe[0] + c(p) * xe[1];
    };
    return from_blocks(m, 1.0, block, std::move(sym));
}

const SymbolOperator& LongitudinalOperator::block(int eta) const { return blocks_[block_slot(model_, eta)]; }

const AlgebroidSymbol& LongitudinalOperator::symbol() const {
    require(symbol_.has_value(), ErrorKind::InvalidInput, "operator carries no principal symbol");
    return *symbol_;
}

int LongitudinalOperator::x_mode_bound() const noexcept {
    int b = 0;
    for (const auto& bl : blocks_) b = std::max(b, bl.x_mode_bound());
    return b;
}

LongitudinalOperator compose(const LongitudinalOperator& P, const LongitudinalOperator& Q) {
    require_same_model(P.model(), Q.model(), "compose");
    std::optional<AlgebroidSymbol> sym;
    if (P.has_symbol() && Q.has_symbol()) {
        sym = [p = P.symbol(), q = Q.symbol()](double w, const Direction& xe) { return p(w, xe) * q(w, xe); };
    }
    return LongitudinalOperator::from_blocks(
        P.model(), P.order() + Q.order(), [&](int eta) { return op_compose(P.block(eta), Q.block(eta)); },
        std::move(sym));
}

SymbolOperator vector_representation(const LongitudinalOperator& P) { return P.block(0); }

SpectralDistribution longitudinal_apply(const LongitudinalOperator& P, const SpectralDistribution& F) {
    const auto& m = P.model();
    require_same_lattice(F.lattice(), m.total, "longitudinal_apply");
    const int N = m.base.bandlimit();
    const std::size_t side = std::size_t(m.base.side());
    std::vector<cplx> out(F.size(), cplx(0.0));
    std::vector<cplx> col(side);
    for (int eta = -m.N_g; eta <= m.N_g; ++eta) {
        const std::size_t e = std::size_t(eta + N);
        for (std::size_t k = 0; k < side; ++k) col[k] = F.values()[k * side + e];
        const auto r = op_apply(P.block(eta), SpectralDistribution(m.base, col));
        for (std::size_t k = 0; k < side; ++k) out[k * side + e] = r.values()[k];
    }
    return SpectralDistribution(m.total, std::move(out));
}

SpectralDistribution range_pullback(const SpectralDistribution& u, const GroupoidModel& m) {
    require_same_lattice(u.lattice(), m.base, "range_pullback");
    const std::size_t side = std::size_t(m.base.side());
    std::vector<cplx> out(m.total.size(), cplx(0.0));
    for (std::size_t k = 0; k < side; ++k) out[k * side + std::size_t(m.base.bandlimit())] = u.values()[k];
    return SpectralDistribution(m.total, std::move(out));
}

double groupoid_l1_norm(const LongitudinalOperator& P, int quadrature) {
    const auto& m = P.model();
    const int N = m.base.bandlimit();
    const int Q = quadrature > 0 ? quadrature : std::max(64, 4 * N);
    const Eigen::Index n = Eigen::Index(m.base.size());
    const int B = m.block_count();

    // F(w, j) = phi_j(w)
    Eigen::MatrixXcd F(Q, n);
    const double norm = 1.0 / std::sqrt(kTwoPi);
    for (int a = 0; a < Q; ++a) {
        const double w = kTwoPi * a / Q;
        for (Eigen::Index j = 0; j < n; ++j) F(a, j) = std::polar(norm, double(m.base.mode(std::size_t(j)).k1) * w);
    }
    // K_eta on the (w, w') grid
    std::vector<Eigen::MatrixXcd> Keta(static_cast<std::size_t>(B));
    for (int eta = -m.N_g; eta <= m.N_g; ++eta)
        Keta[std::size_t(eta + m.N_g)] = F * P.block(eta).to_matrix() * F.adjoint();
    // e^{i eta h} / (2 pi) on the h grid
    Eigen::MatrixXcd E(Q, B);
    for (int c = 0; c < Q; ++c)
        for (int b = 0; b < B; ++b) E(c, b) = std::polar(1.0 / kTwoPi, double(b - m.N_g) * kTwoPi * c / Q);

    std::vector<double> row(std::size_t(Q), 0.0), col(std::size_t(Q), 0.0);
    Eigen::VectorXcd ks(B);
    for (int a = 0; a < Q; ++a) {
        for (int b = 0; b < Q; ++b) {
            for (int e = 0; e < B; ++e) ks(e) = Keta[std::size_t(e)](a, b);
            const double s = (E * ks).cwiseAbs().sum();
            row[std::size_t(a)] += s;
            col[std::size_t(b)] += s;
        }
    }
    const double cell = (kTwoPi / Q) * (kTwoPi / Q);
    double best = 0.0;
    for (int a = 0; a < Q; ++a) best = std::max({best, row[std::size_t(a)] * cell, col[std::size_t(a)] * cell});
    return best;
}

double operator_norm(const SymbolOperator& P) {
    const Eigen::MatrixXcd M = P.to_matrix();
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
}

AnchorSymbol sample_anchor_symbol(const LongitudinalOperator& P, int grid, int directions) {
    require(directions >= 4 && directions % 2 == 0, ErrorKind::InvalidConfig, "anchor symbol needs an even direction count >= 4");
    AnchorSymbol s;
    s.xs = x_grid(1, grid);
    s.dirs = direction_grid(2, directions);
    s.degree = P.order();
    const auto& sym = P.symbol();
    s.values.reserve(s.xs.size() * s.dirs.size());
    for (const auto& x : s.xs)
        for (const auto& d : s.dirs) s.values.push_back(sym(x[0], d));
    return s;
}

SampledSymbol anchor_restrict(const AnchorSymbol& sigma) {
    auto find = [&](double sx) {
        for (std::size_t j = 0; j < sigma.dirs.size(); ++j)
            if (std::abs(sigma.dirs[j][0] - sx) < 1e-12 && std::abs(sigma.dirs[j][1]) < 1e-12) return j;
        fail(ErrorKind::InvalidInput, "direction circle does not contain (+-1, 0)");
    };
    const std::size_t jp = find(1.0), jm = find(-1.0);
    SampledSymbol out;
    out.xs = sigma.xs;
    out.dirs = direction_grid(1, 2);
    out.degree = sigma.degree;
    for (std::size_t i = 0; i < sigma.xs.size(); ++i) {
        out.values.push_back(sigma.at(i, jp));
        out.values.push_back(sigma.at(i, jm));
    }
    return out;
}

LongitudinalGenerator::LongitudinalGenerator(GroupoidModel model, std::vector<Eigen::MatrixXcd> blocks)
    : model_(std::move(model)), blocks_(std::move(blocks)) {
    require(int(blocks_.size()) == model_.block_count(), ErrorKind::InvalidInput, "expected one block per group frequency");
    const Eigen::Index n = Eigen::Index(model_.base.size());
    eig_.resize(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const auto& D = blocks_[b];
        require(D.rows() == n && D.cols() == n, ErrorKind::InvalidInput, "generator block size does not match lattice");
        const double scale = std::max(1.0, D.cwiseAbs().maxCoeff());
        require((D - D.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale, ErrorKind::InvalidInput,
                "generator block is not Hermitian");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D);
        require(es.info() == Eigen::Success, ErrorKind::InvalidInput, "eigendecomposition failed");
        eig_[b] = std::make_shared<const Eig>(Eig{es.eigenvalues(), es.eigenvectors()});
    }
}

const Eigen::MatrixXcd& LongitudinalGenerator::block(int eta) const { return blocks_[block_slot(model_, eta)]; }

Eigen::MatrixXcd LongitudinalGenerator::propagator(int eta, double t) const {
    const auto& e = *eig_[block_slot(model_, eta)];
    Eigen::VectorXcd ph(e.values.size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::polar(1.0, t * e.values(i));
    return e.vectors * ph.asDiagonal() * e.vectors.adjoint();
}

double LongitudinalGenerator::max_hermitian_defect() const {
    double d = 0.0;
    for (const auto& D : blocks_) d = std::max(d, (D - D.adjoint()).cwiseAbs().maxCoeff());
    return d;
}

LongitudinalGenerator build_longitudinal_generator(const GroupoidModel& m, const TrigPoly& c, double c_min) {
    // the base generator performs the reality and ellipticity validation
    const Generator base(m.base, c, c_min);
    std::vector<Eigen::MatrixXcd> blocks;
    for (int eta = -m.N_g; eta <= m.N_g; ++eta) {
        SymbolOperator::ModeTable modes;
        for (const auto& [nu, cv] : c.coeffs()) {
            std::vector<cplx> tab(m.base.size());
            for (std::size_t i = 0; i < tab.size(); ++i)
                {
                const double k = m.base.mode(i).k1;
                tab[i] = cv * std::pow(1.0 + k * k + double(eta) * eta, 0.5);
            }
            modes.emplace(nu, std::move(tab));
        }
        const Eigen::MatrixXcd M = SymbolOperator(m.base, 1.0, std::move(modes)).to_matrix();
        blocks.push_back(0.5 * (M + M.adjoint()));
    }
    return LongitudinalGenerator(m, std::move(blocks));
}

Eigen::MatrixXcd vector_representation(const LongitudinalGenerator& D) { return D.block(0); }

double check_equivariance(const LongitudinalOperator& P, const LongitudinalGenerator& D, const Generator& base, double t) {
    require_same_model(P.model(), D.model(), "check_equivariance");
    require_same_lattice(base.lattice(), P.model().base, "check_equivariance");
    // left: conjugate every block, then extract eta = 0
    std::vector<Eigen::MatrixXcd> conj;
    for (int eta = -P.model().N_g; eta <= P.model().N_g; ++eta) {
        const auto U = D.propagator(eta, t);
        conj.push_back(U * P.block(eta).to_matrix() * U.adjoint());
    }
    const Eigen::MatrixXcd& lhs = conj[std::size_t(P.model().N_g)];
    // right: conjugate pi(P) with the base propagator
    const Eigen::MatrixXcd rhs = conjugate_operator(vector_representation(P), base, t);
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

SpectralDistribution longitudinal_propagate(const SpectralDistribution& F, const LongitudinalGenerator& D, double t) {
    const auto& m = D.model();
    require_same_lattice(F.lattice(), m.total, "longitudinal_propagate");
    const int N = m.base.bandlimit();
    const Eigen::Index side = m.base.side();
    std::vector<cplx> out(F.size(), cplx(0.0));
    Eigen::VectorXcd col(side);
    for (int eta = -m.N_g; eta <= m.N_g; ++eta) {
        const std::size_t e = std::size_t(eta + N);
        for (Eigen::Index k = 0; k < side; ++k) col(k) = F.values()[std::size_t(k) * std::size_t(side) + e];
        const Eigen::VectorXcd r = D.propagator(eta, t) * col;
        for (Eigen::Index k = 0; k < side; ++k) out[std::size_t(k) * std::size_t(side) + e] = r(k);
    }
    return SpectralDistribution(m.total, std::move(out));
}

PullbackResult check_anchor_wf(const SpectralDistribution& u, const GroupoidModel& m, const DictionaryConfig& dcfg1,
                               const DictionaryConfig& dcfg2, const DetectorConfig& cfg) {
    return compare_line_lift(u, range_pullback(u, m), dcfg1, dcfg2, cfg);
}

}  // namespace microsing
