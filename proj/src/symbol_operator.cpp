#include "microsing/symbol_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "microsing/error.hpp"
#include "microsing/simd.hpp"

namespace microsing {

namespace {

// orders live in (1/2)Z; -infinity marks a smoothing surrogate
bool is_half_integer(double m) {
    if (std::isinf(m)) return m < 0;
    return std::isfinite(m) && std::abs(2.0 * m - std::round(2.0 * m)) < 1e-12;
}

int sup(Mode m) { return std::max(std::abs(m.k1), std::abs(m.k2)); }

// Zero c_nu(k) whenever k + nu leaves the lattice, so every table is canonical.
void canonicalize(const FrequencyLattice& lat, SymbolOperator::ModeTable& modes) {
    for (auto it = modes.begin(); it != modes.end();) {
        auto& tab = it->second;
        require(tab.size() == lat.size(), ErrorKind::InvalidInput, "mode table size does not match lattice");
        bool any = false;
        for (std::size_t i = 0; i < tab.size(); ++i) {
            if (!lat.contains(lat.mode(i) + it->first)) tab[i] = 0.0;
            if (!std::isfinite(tab[i].real()) || !std::isfinite(tab[i].imag()))
                fail(ErrorKind::InvalidInput, "non-finite operator coefficient");
            any = any || tab[i] != cplx(0.0);
        }
        it = any ? std::next(it) : modes.erase(it);
    }
}

double bessel(Mode k, double m) {
    return std::pow(1.0 + double(k.k1) * k.k1 + double(k.k2) * k.k2, 0.5 * m);
}

Direction unit(Mode k) {
    const double r = std::hypot(double(k.k1), double(k.k2));
    if (r == 0.0) return {1.0, 0.0};
    return {k.k1 / r, k.k2 / r};
}

}  // namespace

SymbolOperator::SymbolOperator(FrequencyLattice lattice, double order, ModeTable modes,
                               std::optional<ClassicalData> classical)
    : lattice_(std::move(lattice)), order_(order), modes_(std::move(modes)), classical_(std::move(classical)) {
    require(is_half_integer(order_), ErrorKind::InvalidInput, "operator order must lie in (1/2)Z or be -infinity");
    for (const auto& [nu, tab] : modes_) {
        (void)tab;
        require(sup(nu) <= 2 * lattice_.bandlimit(), ErrorKind::InvalidInput, "x-mode outside representable range");
        if (lattice_.dim() == 1) require(nu.k2 == 0, ErrorKind::InvalidInput, "d = 1 operator with k2 mode");
    }
    canonicalize(lattice_, modes_);
    truncation_warning_ = x_mode_bound() > lattice_.bandlimit() / 2;
}

SymbolOperator SymbolOperator::zero(const FrequencyLattice& lat, double order) {
    return SymbolOperator(lat, order, {}, ClassicalData{});
}

SymbolOperator SymbolOperator::identity(const FrequencyLattice& lat) { return bessel_potential(lat, 0.0); }

SymbolOperator SymbolOperator::bessel_potential(const FrequencyLattice& lat, double m) {
    return multiplier(lat, m, [m](Mode k) { return cplx(bessel(k, m)); }, [](const Direction&) { return cplx(1.0); });
}

SymbolOperator SymbolOperator::multiplier(const FrequencyLattice& lat, double order, const std::function<cplx(Mode)>& a,
                                          std::optional<AngularProfile> profile) {
    std::vector<cplx> tab(lat.size());
    for (std::size_t i = 0; i < tab.size(); ++i) tab[i] = a(lat.mode(i));
    std::optional<ClassicalData> cd;
    if (profile) cd = ClassicalData{{{Mode{0, 0}, *profile}}};
    return SymbolOperator(lat, order, {{Mode{0, 0}, std::move(tab)}}, std::move(cd));
}

SymbolOperator SymbolOperator::multiplication(const FrequencyLattice& lat, const TrigPoly& f) {
    return variable_coefficient(lat, f, 0.0);
}

SymbolOperator SymbolOperator::variable_coefficient(const FrequencyLattice& lat, const TrigPoly& c, double m) {
    require(c.dim() == lat.dim(), ErrorKind::LatticeMismatch, "coefficient dimension differs from lattice");
    ModeTable modes;
    ClassicalData cd;
    for (const auto& [nu, cv] : c.coeffs()) {
        std::vector<cplx> tab(lat.size());
        for (std::size_t i = 0; i < tab.size(); ++i) tab[i] = cv * bessel(lat.mode(i), m);
        modes.emplace(nu, std::move(tab));
        const cplx h = cv;
        cd.profiles.emplace(nu, [h](const Direction&) { return h; });
    }
    return SymbolOperator(lat, m, std::move(modes), std::move(cd));
}

SymbolOperator SymbolOperator::from_matrix(const FrequencyLattice& lat, double order, const Eigen::MatrixXcd& M,
                                           double drop_tol) {
    require(M.rows() == Eigen::Index(lat.size()) && M.cols() == M.rows(), ErrorKind::InvalidInput,
            "matrix size does not match lattice");
    ModeTable modes;
    for (Eigen::Index k = 0; k < M.cols(); ++k) {
        const Mode mk = lat.mode(std::size_t(k));
        for (Eigen::Index j = 0; j < M.rows(); ++j) {
            const cplx v = M(j, k);
            if (std::abs(v) <= drop_tol) continue;
            const Mode nu = lat.mode(std::size_t(j)) - mk;
            auto [it, inserted] = modes.try_emplace(nu);
            if (inserted) it->second.assign(lat.size(), cplx(0.0));
            it->second[std::size_t(k)] = v;
        }
    }
    return SymbolOperator(lat, order, std::move(modes));
}

int SymbolOperator::x_mode_bound() const noexcept {
    int b = 0;
    for (const auto& [nu, tab] : modes_) b = std::max(b, sup(nu));
    return b;
}

const ClassicalData& SymbolOperator::classical() const {
    if (!classical_) fail(ErrorKind::Unsupported, "operator is not classical");
    return *classical_;
}

cplx SymbolOperator::coefficient(Mode nu, Mode k) const {
    auto it = modes_.find(nu);
    if (it == modes_.end() || !lattice_.contains(k)) return 0.0;
    return it->second[lattice_.index(k)];
}

Eigen::MatrixXcd SymbolOperator::to_matrix() const {
    const auto n = Eigen::Index(lattice_.size());
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [nu, tab] : modes_)
        for (std::size_t i = 0; i < tab.size(); ++i)
            if (tab[i] != cplx(0.0)) M(Eigen::Index(lattice_.index(lattice_.mode(i) + nu)), Eigen::Index(i)) = tab[i];
    return M;
}

SymbolOperator SymbolOperator::adjoint() const {
    // (P*)_{j,k} = conj(P_{k,j})  =>  c'_nu(k) = conj(c_{-nu}(k + nu))
    ModeTable out;
    for (const auto& [nu, tab] : modes_) {
        const Mode mnu = -nu;
        std::vector<cplx> t(lattice_.size(), cplx(0.0));
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Mode k = lattice_.mode(i);
            const Mode src = k + mnu;  // c'_{-nu}(k) = conj(c_nu(k - nu))
            if (lattice_.contains(src)) t[i] = std::conj(tab[lattice_.index(src)]);
        }
        out.emplace(mnu, std::move(t));
    }
    std::optional<ClassicalData> cd;
    if (classical_) {
        cd.emplace();
        for (const auto& [nu, h] : classical_->profiles)
            cd->profiles.emplace(-nu, [h](const Direction& w) { return std::conj(h(w)); });
    }
    return SymbolOperator(lattice_, order_, std::move(out), std::move(cd));
}

SymbolOperator SymbolOperator::operator+(const SymbolOperator& o) const {
    require_same_lattice(lattice_, o.lattice_, "operator sum");
    ModeTable out = modes_;
    for (const auto& [nu, tab] : o.modes_) {
        auto [it, inserted] = out.try_emplace(nu, tab);
        if (!inserted)
            for (std::size_t i = 0; i < tab.size(); ++i) it->second[i] += tab[i];
    }
    // the principal part of a sum is only the sum of profiles when orders agree
    std::optional<ClassicalData> cd;
    if (classical_ && o.classical_) {
        if (order_ == o.order_) {
            cd = *classical_;
            for (const auto& [nu, h] : o.classical_->profiles) {
                auto [it, inserted] = cd->profiles.try_emplace(nu, h);
                if (!inserted) {
                    AngularProfile a = it->second;
                    it->second = [a, h](const Direction& w) { return a(w) + h(w); };
                }
            }
        } else {
            cd = order_ > o.order_ ? classical_ : o.classical_;
        }
    }
    return SymbolOperator(lattice_, std::max(order_, o.order_), std::move(out), std::move(cd));
}

SymbolOperator SymbolOperator::operator*(cplx s) const {
    ModeTable out = modes_;
    for (auto& [nu, tab] : out)
        for (auto& z : tab) z *= s;
    std::optional<ClassicalData> cd;
    if (classical_) {
        cd.emplace();
        for (const auto& [nu, h] : classical_->profiles)
            cd->profiles.emplace(nu, [h, s](const Direction& w) { return s * h(w); });
    }
    return SymbolOperator(lattice_, order_, std::move(out), std::move(cd));
}

SymbolOperator SymbolOperator::operator-(const SymbolOperator& o) const { return *this + o * cplx(-1.0); }

double SymbolOperator::classical_deviation(int min_radius) const {
    const auto& cd = classical();
    double worst = 0.0;
    for (std::size_t i = 0; i < lattice_.size(); ++i) {
        const Mode k = lattice_.mode(i);
        if (std::hypot(double(k.k1), double(k.k2)) < min_radius) continue;
        const double g = bessel(k, order_);
        const Direction w = unit(k);
        for (const auto& [nu, h] : cd.profiles) {
            if (!lattice_.contains(k + nu)) continue;
            worst = std::max(worst, std::abs(coefficient(nu, k) - h(w) * g) / g);
        }
        for (const auto& [nu, tab] : modes_)
            if (!cd.profiles.contains(nu)) worst = std::max(worst, std::abs(tab[i]) / g);
    }
    return worst;
}

SpectralDistribution op_apply(const SymbolOperator& P, const SpectralDistribution& u) {
    const auto& lat = P.lattice();
    require_same_lattice(lat, u.lattice(), "op_apply");
    std::vector<cplx> out(lat.size(), cplx(0.0));
    const int N = lat.bandlimit();
    const int side = lat.side();
    const cplx* a = u.values().data();
    // y[k + nu] += c_nu(k) a_k over contiguous runs of k
    for (const auto& [nu, tab] : P.modes()) {
        const int lo1 = std::max(-N, -N - nu.k1), hi1 = std::min(N, N - nu.k1);
        if (lo1 > hi1) continue;
        if (lat.dim() == 1) {
            const std::size_t src = std::size_t(lo1 + N);
            simd::cmul_acc(out.data() + src + nu.k1, tab.data() + src, a + src, std::size_t(hi1 - lo1 + 1));
            continue;
        }
        const int lo2 = std::max(-N, -N - nu.k2), hi2 = std::min(N, N - nu.k2);
        if (lo2 > hi2) continue;
        const std::size_t len = std::size_t(hi2 - lo2 + 1);
        for (int k1 = lo1; k1 <= hi1; ++k1) {
            const std::size_t src = std::size_t(k1 + N) * side + std::size_t(lo2 + N);
            const std::size_t dst = std::size_t(k1 + nu.k1 + N) * side + std::size_t(lo2 + nu.k2 + N);
            simd::cmul_acc(out.data() + dst, tab.data() + src, a + src, len);
        }
    }
    return SpectralDistribution(lat, std::move(out));
}

SymbolOperator op_compose(const SymbolOperator& P, const SymbolOperator& Q) {
    const auto& lat = P.lattice();
    require_same_lattice(lat, Q.lattice(), "op_compose");
    // c_kappa(k) = sum_{nu + mu = kappa} cP_nu(k + mu) cQ_mu(k)
    SymbolOperator::ModeTable out;
    for (const auto& [mu, qt] : Q.modes()) {
        for (const auto& [nu, pt] : P.modes()) {
            const Mode kappa = nu + mu;
            auto [it, inserted] = out.try_emplace(kappa);
            if (inserted) it->second.assign(lat.size(), cplx(0.0));
            auto& dst = it->second;
            for (std::size_t i = 0; i < lat.size(); ++i) {
                if (qt[i] == cplx(0.0)) continue;
                const Mode mid = lat.mode(i) + mu;  // in lattice because qt is canonical
                dst[i] += pt[lat.index(mid)] * qt[i];
            }
        }
    }
    std::optional<ClassicalData> cd;
    if (P.is_classical() && Q.is_classical()) {
        cd.emplace();
        for (const auto& [nu, hp] : P.classical().profiles)
            for (const auto& [mu, hq] : Q.classical().profiles) {
                const Mode kappa = nu + mu;
                AngularProfile term = [hp, hq](const Direction& w) { return hp(w) * hq(w); };
                auto [it, inserted] = cd->profiles.try_emplace(kappa, term);
                if (!inserted) {
                    AngularProfile prev = it->second;
                    it->second = [prev, term](const Direction& w) { return prev(w) + term(w); };
                }
            }
    }
    SymbolOperator R(lat, P.order() + Q.order(), std::move(out), std::move(cd));
    R.truncation_warning_ = R.truncation_warning_ || P.truncation_warning() || Q.truncation_warning() ||
                            P.x_mode_bound() + Q.x_mode_bound() > lat.bandlimit() / 2;
    return R;
}

SymbolOperator commutator(const SymbolOperator& P, const SymbolOperator& Q) {
    const auto pq = op_compose(P, Q);
    const auto qp = op_compose(Q, P);
    // principal symbols cancel; the bracket is one order lower and carries no stored profile
    SymbolOperator::ModeTable out = pq.modes();
    for (const auto& [nu, tab] : qp.modes()) {
        auto [it, inserted] = out.try_emplace(nu, std::vector<cplx>(tab.size(), cplx(0.0)));
        for (std::size_t i = 0; i < tab.size(); ++i) it->second[i] -= tab[i];
    }
    return SymbolOperator(P.lattice(), P.order() + Q.order() - 1.0, std::move(out));
}

SmoothingKernel left_compose(const SymbolOperator& P, const SmoothingKernel& T) {
    require_same_lattice(P.lattice(), T.lattice(), "left_compose");
    return SmoothingKernel(T.lattice(), P.to_matrix() * T.matrix());
}

SmoothingKernel right_compose(const SmoothingKernel& T, const SymbolOperator& P) {
    require_same_lattice(P.lattice(), T.lattice(), "right_compose");
    return SmoothingKernel(T.lattice(), T.matrix() * P.to_matrix());
}

std::vector<Point> x_grid(int dim, int g) {
    require(g >= 1, ErrorKind::InvalidConfig, "x-grid needs at least one point");
    std::vector<Point> xs;
    const double h = 2.0 * std::numbers::pi / g;
    if (dim == 1) {
        for (int i = 0; i < g; ++i) xs.push_back({i * h, 0.0});
    } else {
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) xs.push_back({i * h, j * h});
    }
    return xs;
}

std::vector<Direction> direction_grid(int dim, int directions) {
    if (dim == 1) return {{1.0, 0.0}, {-1.0, 0.0}};
    require(directions >= 4, ErrorKind::InvalidConfig, "direction grid needs at least 4 samples");
    std::vector<Direction> d;
    for (int j = 0; j < directions; ++j) {
        const double th = 2.0 * std::numbers::pi * j / directions;
        d.push_back({std::cos(th), std::sin(th)});
    }
    return d;
}

double SampledSymbol::max_abs() const {
    double m = 0.0;
    for (cplx v : values) m = std::max(m, std::abs(v));
    return m;
}

cplx evaluate_principal_symbol(const SymbolOperator& P, const Point& x, const Direction& omega) {
    cplx s = 0.0;
    for (const auto& [nu, h] : P.classical().profiles) s += h(omega) * std::polar(1.0, nu.k1 * x[0] + nu.k2 * x[1]);
    return s;
}

SampledSymbol principal_symbol(const SymbolOperator& P, const std::vector<Point>& xs,
                               const std::vector<Direction>& dirs) {
    const auto& cd = P.classical();
    SampledSymbol s{xs, dirs, std::vector<cplx>(xs.size() * dirs.size()), P.order()};
    // evaluate each profile once per direction
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        std::vector<std::pair<Mode, cplx>> h;
        for (const auto& [nu, prof] : cd.profiles) h.emplace_back(nu, prof(dirs[j]));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            cplx v = 0.0;
            for (const auto& [nu, hv] : h) v += hv * std::polar(1.0, nu.k1 * xs[i][0] + nu.k2 * xs[i][1]);
            s.values[i * dirs.size() + j] = v;
        }
    }
    return s;
}

std::vector<std::pair<std::size_t, std::size_t>> char_set(const SampledSymbol& sigma, double tol) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < sigma.xs.size(); ++i)
        for (std::size_t j = 0; j < sigma.dirs.size(); ++j)
            if (std::abs(sigma.at(i, j)) < tol) out.emplace_back(i, j);
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> char_set(const SymbolOperator& P, double tol,
                                                         const std::vector<Point>& xs,
                                                         const std::vector<Direction>& dirs) {
    return char_set(principal_symbol(P, xs, dirs), tol);
}

}  // namespace microsing
