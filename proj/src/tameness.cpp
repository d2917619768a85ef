#include "microsing/tameness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "microsing/corpus.hpp"
#include "microsing/error.hpp"

namespace microsing {

const char* to_string(Space s) noexcept { return s == Space::Distributions ? "distributions" : "kernels"; }

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Tame: return "tame";
        case Verdict::Regular: return "regular";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

Space space_of(const GradedObject& x) noexcept {
    return std::holds_alternative<SpectralDistribution>(x) ? Space::Distributions : Space::Kernels;
}

double graded_norm(const GradedObject& x, double n) {
    if (const auto* u = std::get_if<SpectralDistribution>(&x)) return sobolev_norm(*u, n);
    return graded_kernel_norm(std::get<SmoothingKernel>(x), n);
}

bool is_zero(const GradedObject& x) noexcept {
    if (const auto* u = std::get_if<SpectralDistribution>(&x)) return u->is_zero();
    return std::get<SmoothingKernel>(x).is_zero();
}

namespace {

GradedObject scale(const GradedObject& x, double s) {
    if (const auto* u = std::get_if<SpectralDistribution>(&x)) return *u * cplx(s);
    return std::get<SmoothingKernel>(x) * cplx(s);
}

const SmoothingKernel& as_kernel(const GradedObject& x, const char* who) {
    const auto* T = std::get_if<SmoothingKernel>(&x);
    require(T != nullptr, ErrorKind::InvalidInput, std::string(who) + " expects a smoothing kernel");
    return *T;
}

// Graded norms of one object at many indices.
class NormCache {
public:
    NormCache(const GradedObject& x, int max_index) {
        if (const auto* u = std::get_if<SpectralDistribution>(&x))
            dist_.emplace(*u);
        else
            kern_.emplace(std::get<SmoothingKernel>(x), std::max(0, max_index));
    }
    double at(double n) const {
        if (dist_) return dist_->sobolev(n);
        if (n < 0) return 0.0;
        return kern_->graded(n);
    }

private:
    std::optional<DistributionNormTable> dist_;
    std::optional<KernelNormTable> kern_;
};

}  // namespace

MapHandle::MapHandle(std::string name, Space in, Space out, Fn f, bool linear)
    : name_(std::move(name)), in_(in), out_(out), f_(std::move(f)), linear_(linear) {}

GradedObject MapHandle::operator()(const GradedObject& x) const {
    require(space_of(x) == in_, ErrorKind::InvalidInput, "map '" + name_ + "' applied outside its domain");
    GradedObject y = f_(x);
    require(space_of(y) == out_, ErrorKind::InvalidInput, "map '" + name_ + "' produced an object outside its codomain");
    return y;
}

MapHandle theta_map(const SpectralDistribution& u) {
    return MapHandle("theta_u", Space::Kernels, Space::Distributions,
                     [u](const GradedObject& x) -> GradedObject { return apply_kernel(as_kernel(x, "theta_u"), u); });
}

MapHandle theta_right_action(const SpectralDistribution& u, const SymbolOperator& P) {
    auto m = theta_map(op_apply(P, u));
    return MapHandle("theta_u.P", Space::Kernels, Space::Distributions,
                     [m](const GradedObject& x) { return m(x); });
}

MapHandle right_multiplication_map(const SymbolOperator& P) {
    const Eigen::MatrixXcd M = P.to_matrix();
    const auto lat = P.lattice();
    return MapHandle("right_mult", Space::Kernels, Space::Kernels, [M, lat](const GradedObject& x) -> GradedObject {
        const auto& T = as_kernel(x, "right_mult");
        return SmoothingKernel(lat, T.matrix() * M);
    });
}

MapHandle left_multiplication_map(const SymbolOperator& P) {
    const Eigen::MatrixXcd M = P.to_matrix();
    const auto lat = P.lattice();
    return MapHandle("left_mult", Space::Kernels, Space::Kernels, [M, lat](const GradedObject& x) -> GradedObject {
        const auto& T = as_kernel(x, "left_mult");
        return SmoothingKernel(lat, M * T.matrix());
    });
}

MapHandle right_action(const MapHandle& phi, const SymbolOperator& a) {
    require(phi.domain() == Space::Kernels, ErrorKind::Unsupported, "right action needs a kernel-domain map");
    const auto r = right_multiplication_map(a);
    return MapHandle(phi.name() + ".a", Space::Kernels, phi.codomain(),
                     [phi, r](const GradedObject& x) { return phi(r(x)); }, phi.linear());
}

MapHandle identity_map(Space s) {
    return MapHandle("identity", s, s, [](const GradedObject& x) { return x; });
}

MapHandle zero_map(const FrequencyLattice& lat, Space in, Space out) {
    return MapHandle("zero", in, out, [lat, out](const GradedObject&) -> GradedObject {
        if (out == Space::Distributions) return SpectralDistribution(lat);
        return SmoothingKernel(lat);
    });
}

MapHandle compose(const MapHandle& outer, const MapHandle& inner) {
    require(inner.codomain() == outer.domain(), ErrorKind::InvalidInput, "composed maps do not chain");
    return MapHandle(outer.name() + "*" + inner.name(), inner.domain(), outer.codomain(),
                     [outer, inner](const GradedObject& x) { return outer(inner(x)); },
                     outer.linear() && inner.linear());
}

SmoothingKernel diagonal_probe(const FrequencyLattice& lat, const std::vector<cplx>& weights) {
    return SmoothingKernel::diagonal(lat, weights);
}

void ProbeSet::validate(int n_lo, int n_hi) const {
    require(!families.empty(), ErrorKind::InvalidConfig, "probe set is empty");
    for (const auto& f : families) {
        require(!f.probes.empty(), ErrorKind::InvalidConfig, "probe family '" + f.name + "' is empty");
        if (f.ladder) {
            require(f.levels.empty() || f.levels.size() == f.probes.size(), ErrorKind::InvalidConfig,
                    "ladder family '" + f.name + "' has a malformed level table");
            std::vector<bool> seen(std::size_t(n_hi - n_lo + 1), false);
            for (std::size_t p = 0; p < f.probes.size(); ++p) {
                const int L = f.level_of(p);
                require(L >= 0 && L <= n_hi - n_lo, ErrorKind::InvalidConfig,
                        "ladder family '" + f.name + "' does not match the window");
                seen[std::size_t(L)] = true;
            }
            for (bool b : seen)
                require(b, ErrorKind::InvalidConfig, "ladder family '" + f.name + "' leaves a window level empty");
        }
        for (const auto& p : f.probes) {
            require(space_of(p) == space, ErrorKind::InvalidInput, "probe outside the probe-set space");
            require(!is_zero(p), ErrorKind::InvalidInput, "zero probe in family '" + f.name + "'");
        }
    }
}

void TamenessConfig::validate() const {
    require(n_hi - n_lo + 1 >= 6, ErrorKind::InvalidConfig, "tameness window must hold at least 6 levels");
    require(n_lo >= 0, ErrorKind::InvalidConfig, "tameness window must start at n >= 0");
    require(r_max >= 1, ErrorKind::InvalidConfig, "r range must be nonempty");
    require(tau >= 1.0, ErrorKind::InvalidConfig, "slack factor must be >= 1");
    require(random_probes >= 0, ErrorKind::InvalidConfig, "random probe count must be >= 0");
    require(noise_rel >= 0.0 && noise_rel < 1.0, ErrorKind::InvalidConfig, "noise_rel must lie in [0, 1)");
}

int ladder_mode(const FrequencyLattice& lat, int n, int n_lo, int n_hi) {
    // geometric from 2 to N/2 - 1 across the window; above N/2 truncation dominates
    const double top = std::max(2.0, lat.bandlimit() / 2.0 - 1.0);
    const double t = n_hi > n_lo ? double(n - n_lo) / double(n_hi - n_lo) : 0.0;
    return std::clamp(int(std::lround(2.0 * std::pow(top / 2.0, t))), 1, lat.bandlimit());
}

ProbeSet default_probes(const FrequencyLattice& lat, Space space, const TamenessConfig& cfg) {
    cfg.validate();
    ProbeSet ps;
    ps.recipe = space == Space::Kernels ? "ladder-kernels/1" : "ladder-distributions/1";
    ps.seed = cfg.seed;
    ps.space = space;
    const auto& lambda = lat.eigenvalues();
    auto level_scale = [&](Mode c, int n) { return std::pow(1.0 + double(c.k1) * c.k1 + double(c.k2) * c.k2, -0.5 * n); };

    for (int sign : {+1, -1}) {
        // level n owns every single mode in the shell [c_n, c_{n+1}); a max over the shell
        // keeps one small coefficient from deciding the verdict
        ProbeFamily f{sign > 0 ? "single-mode+" : "single-mode-", true, {}, {}};
        for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
            const int lo = ladder_mode(lat, n, cfg.n_lo, cfg.n_hi);
            const int hi = n < cfg.n_hi ? std::max(lo, ladder_mode(lat, n + 1, cfg.n_lo, cfg.n_hi) - 1) : lo;
            for (int m = lo; m <= hi; ++m) {
                const Mode c{sign * m, 0};
                const double s = level_scale(c, n);
                if (space == Space::Kernels) {
                    f.probes.emplace_back(SmoothingKernel::rank_one(lat, c, c, s));
                } else {
                    std::vector<cplx> a(lat.size(), cplx(0.0));
                    a[lat.index(c)] = s;
                    f.probes.emplace_back(SpectralDistribution(lat, std::move(a)));
                }
                f.levels.push_back(n - cfg.n_lo);
            }
        }
        ps.families.push_back(std::move(f));
    }

    if (space == Space::Kernels) {
        ProbeFamily resc{"rescaled-diagonal", true, {}, {}};
        for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
            std::vector<cplx> w(lat.size());
            // trusted range only: the top half of the lattice carries truncation edges of products
            for (std::size_t i = 0; i < w.size(); ++i)
                w[i] = 2 * lat.sup_norm(i) <= lat.bandlimit() ? std::pow(1.0 + lambda[i], -0.5 * n) : 0.0;
            resc.probes.emplace_back(diagonal_probe(lat, w));
        }
        ps.families.push_back(std::move(resc));

        ProbeFamily r1{"rank-one-cross", true, {}, {}};
        for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
            const int lo = ladder_mode(lat, n, cfg.n_lo, cfg.n_hi);
            const int hi = n < cfg.n_hi ? std::max(lo, ladder_mode(lat, n + 1, cfg.n_lo, cfg.n_hi) - 1) : lo;
            for (int c = lo; c <= hi; ++c) {
                r1.probes.emplace_back(SmoothingKernel::rank_one(lat, {c, 0}, {-c, 0}, level_scale({c, 0}, n)));
                r1.levels.push_back(n - cfg.n_lo);
            }
        }
        ps.families.push_back(std::move(r1));

        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> g(0.0, 1.0);
        const auto n = Eigen::Index(lat.size());
        for (int p = 0; p < cfg.random_probes; ++p) {
            Eigen::MatrixXcd M(n, n);
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double re = g(rng), im = g(rng);
                    M(j, k) = cplx(re, im) * std::exp(-0.25 * (lat.sup_norm(std::size_t(j)) + lat.sup_norm(std::size_t(k))));
                }
            ps.families.push_back({"random-dense-" + std::to_string(p), false, {SmoothingKernel(lat, std::move(M))}, {}});
        }
    } else {
        for (double x0 : {0.0, 1.0}) {
            Point p{x0, lat.dim() == 2 ? x0 : 0.0};
            ps.families.push_back({"delta@" + std::to_string(x0).substr(0, 3), false, {corpus::delta(lat, p)}, {}});
        }
    }
    ps.validate(cfg.n_lo, cfg.n_hi);
    return ps;
}

TamenessReport estimate_tameness(const MapHandle& phi, const ProbeSet& probes, int n_lo, int n_hi, double r_min,
                                 double r_max, double tau, double b) {
    require(n_hi - n_lo + 1 >= 6, ErrorKind::InvalidConfig, "tameness window must hold at least 6 levels");
    require(r_min <= r_max, ErrorKind::InvalidConfig, "empty r range");
    require(std::abs(2 * r_min - std::round(2 * r_min)) < 1e-12 && std::abs(2 * r_max - std::round(2 * r_max)) < 1e-12,
            ErrorKind::InvalidConfig, "r range must lie in (1/2)Z");
    require(probes.space == phi.domain(), ErrorKind::InvalidInput, "probe space does not match map domain");
    if (probes.space == Space::Kernels)
        require(n_lo + r_min >= 0, ErrorKind::InvalidConfig, "kernel grading needs n_lo + r_min >= 0");
    probes.validate(n_lo, n_hi);

    const int levels = n_hi - n_lo + 1;
    const int in_max = int(std::ceil(n_hi + r_max));
    const int rc = int(std::lround(2 * (r_max - r_min))) + 1;
    auto r_at = [&](int i) { return r_min + 0.5 * i; };

    struct Member {
        double out = 0.0;        // ||phi(x)||'_n
        std::vector<double> in;  // [r] ||x||_{n+r}
    };
    // data[f][L] holds every probe of family f that is active at level L
    std::vector<std::vector<std::vector<Member>>> data(probes.families.size());
    std::vector<double> k_samples;
    const int n_mid = n_lo + levels / 2;

    for (std::size_t f = 0; f < probes.families.size(); ++f) {
        const auto& fam = probes.families[f];
        auto& d = data[f];
        d.assign(std::size_t(levels), {});
        for (std::size_t p = 0; p < fam.probes.size(); ++p) {
            const NormCache cin(fam.probes[p], in_max);
            const NormCache cout(phi(fam.probes[p]), n_hi);
            for (int L = 0; L < levels; ++L) {
                if (fam.ladder && fam.level_of(p) != L) continue;
                const int n = n_lo + L;
                Member m;
                m.out = cout.at(n);
                m.in.resize(std::size_t(rc));
                for (int i = 0; i < rc; ++i) m.in[std::size_t(i)] = cin.at(n + r_at(i));
                d[std::size_t(L)].push_back(std::move(m));
            }
        }
        // homogeneity exponent from phi(2x) against phi(x)
        std::size_t px = 0;
        if (fam.ladder)
            while (px + 1 < fam.probes.size() && fam.level_of(px) < n_mid - n_lo) ++px;
        const GradedObject& x = fam.probes[px];
        const double a = graded_norm(phi(x), n_mid);
        const double a2 = graded_norm(phi(scale(x, 2.0)), n_mid);
        if (a > 0.0 && a2 > 0.0 && std::isfinite(a) && std::isfinite(a2)) k_samples.push_back(std::log2(a2 / a));
    }

    // ratio(n) of one family: max over its probes active at level n
    auto ratio = [&](std::size_t f, int L, int i) {
        double best = 0.0;
        for (const auto& m : data[f][std::size_t(L)]) {
            const double den = m.in[std::size_t(i)];
            if (m.out == 0.0) continue;
            best = std::max(best, den > 0.0 ? m.out / den : std::numeric_limits<double>::infinity());
        }
        return best;
    };
    // worst growth factor over the upper half of the window (i < j)
    auto growth = [&](std::size_t f, int i) {
        double worst = 0.0;
        for (int a = n_mid - n_lo; a < levels; ++a)
            for (int c = a + 1; c < levels; ++c) {
                const double ra = ratio(f, a, i), rb = ratio(f, c, i);
                if (rb == 0.0) continue;
                if (!std::isfinite(rb) || ra == 0.0) return std::numeric_limits<double>::infinity();
                worst = std::max(worst, rb / ra);
            }
        return worst;
    };

    TamenessReport rep;
    rep.map_name = phi.name();
    rep.n_lo = n_lo;
    rep.n_hi = n_hi;
    rep.r_min = r_min;
    rep.r_max = r_max;
    rep.b = b;
    rep.recipe = probes.recipe;
    rep.seed = probes.seed;
    std::vector<double> worst_at(std::size_t(rc), 0.0);
    std::vector<std::string> culprit(static_cast<std::size_t>(rc));
    for (int i = 0; i < rc; ++i) {
        bool ok = true;
        for (std::size_t f = 0; f < data.size(); ++f) {
            const double g = growth(f, i);
            worst_at[std::size_t(i)] = std::max(worst_at[std::size_t(i)], g);
            if (!(g <= tau)) {
                if (ok) culprit[std::size_t(i)] = probes.families[f].name;
                ok = false;
            }
        }
        rep.passes.emplace_back(r_at(i), ok);
    }
    int first = -1;
    for (int i = 0; i < rc; ++i)
        if (rep.passes[std::size_t(i)].second) {
            first = i;
            break;
        }
    if (!k_samples.empty()) {
        double s = 0.0;
        for (double k : k_samples) s += k;
        rep.k_hat = s / double(k_samples.size());
    }
    if (first < 0) {
        rep.verdict = Verdict::Inconclusive;
        rep.failing_family = culprit.back();
        return rep;
    }
    rep.r_hat = r_at(first);
    if (first > 0) rep.failing_family = culprit[std::size_t(first - 1)];
    for (int i = first; i < rc; ++i) rep.monotone_verdicts = rep.monotone_verdicts && rep.passes[std::size_t(i)].second;
    rep.residual = worst_at[std::size_t(first)];
    for (int L = 0; L < levels; ++L) {
        double c = 0.0;
        for (std::size_t f = 0; f < data.size(); ++f) c = std::max(c, ratio(f, L, first));
        rep.constants.emplace_back(n_lo + L, c);
    }
    rep.b_satisfied = n_lo >= b + std::abs(*rep.r_hat);
    rep.verdict = (first == 0 && rep.monotone_verdicts) ? Verdict::Regular : Verdict::Tame;
    return rep;
}

TamenessReport estimate_tameness(const MapHandle& phi, const FrequencyLattice& lat, const TamenessConfig& cfg) {
    const auto ps = default_probes(lat, phi.domain(), cfg);
    return estimate_tameness(phi, ps, cfg.n_lo, cfg.n_hi, -cfg.r_max, cfg.r_max, cfg.tau, cfg.b);
}

RegularityResult is_regular_map(const MapHandle& phi, const ProbeSet& probes, int depth, const TamenessConfig& cfg) {
    require(depth >= 4, ErrorKind::InvalidConfig, "regularity depth must be >= 4");
    RegularityResult r;
    r.report = estimate_tameness(phi, probes, cfg.n_lo, cfg.n_hi, -depth, depth, cfg.tau, cfg.b);
    r.regular = r.report.verdict == Verdict::Regular;
    return r;
}

RegularityResult is_regular_map(const MapHandle& phi, const FrequencyLattice& lat, const TamenessConfig& cfg) {
    return is_regular_map(phi, default_probes(lat, phi.domain(), cfg), cfg.r_max, cfg);
}

int trusted_band_count(const FrequencyLattice& lat) {
    int b = 0;
    while ((1 << (b + 1)) <= lat.bandlimit() / 2) ++b;
    return b;
}

namespace {

std::vector<double> band_maxima(const SpectralDistribution& u) {
    const auto& lat = u.lattice();
    std::vector<double> bm(std::size_t(trusted_band_count(lat)), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const int s = lat.sup_norm(i);
        if (s < 1) continue;
        const int b = std::bit_width(unsigned(s)) - 1;  // 2^b <= s < 2^{b+1}
        if (b < int(bm.size())) bm[std::size_t(b)] = std::max(bm[std::size_t(b)], std::abs(u[i]));
    }
    return bm;
}

}  // namespace

double top_band_max(const SpectralDistribution& u) {
    const auto bm = band_maxima(u);
    return bm.empty() ? 0.0 : bm.back();
}

OracleResult coefficient_regularity_oracle(const SpectralDistribution& u, const OracleConfig& cfg) {
    require(trusted_band_count(u.lattice()) >= 3, ErrorKind::InvalidConfig,
            "regularity oracle needs at least 3 trusted dyadic bands (N >= 16)");
    require(cfg.fit_bands >= 2, ErrorKind::InvalidConfig, "slope fit needs at least 2 bands");
    OracleResult res;
    res.band_max = band_maxima(u);
    double M = 0.0;
    for (cplx z : u.values()) M = std::max(M, std::abs(z));
    if (M == 0.0) return res;  // zero is smooth by convention
    const double floor = std::max(cfg.noise_rel * M, cfg.floor_abs);
    const int B = int(res.band_max.size());
    if (res.band_max.back() <= floor) return res;
    std::vector<double> xs, ys;
    for (int b = std::max(0, B - cfg.fit_bands); b < B; ++b)
        if (res.band_max[std::size_t(b)] > floor) {
            xs.push_back(std::log1p(std::ldexp(1.0, b)));
            ys.push_back(std::log(res.band_max[std::size_t(b)]));
        }
    res.bands_used = int(xs.size());
    if (xs.size() < 2) return res;
    const double n = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    res.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    res.smooth = res.slope <= -cfg.s_max;
    return res;
}

TheoremMoResult theorem_mo_check(const SpectralDistribution& u, const TamenessConfig& cfg, const OracleConfig& ocfg) {
    TheoremMoResult r;
    auto reg = is_regular_map(theta_map(u), u.lattice(), cfg);
    r.classifier = reg.regular;
    r.report = std::move(reg.report);
    r.oracle = coefficient_regularity_oracle(u, ocfg).smooth;
    r.agree = r.classifier == r.oracle;
    return r;
}

double left_module_defect(const MapHandle& phi, const std::vector<SymbolOperator>& ops, const ProbeSet& probes) {
    require(phi.domain() == Space::Kernels && phi.codomain() == Space::Distributions, ErrorKind::Unsupported,
            "left-module check expects a map from kernels to distributions");
    double worst = 0.0;
    for (const auto& fam : probes.families)
        for (const auto& x : fam.probes) {
            const auto& T = as_kernel(x, "left_module_defect");
            const auto fx = std::get<SpectralDistribution>(phi(x));
            for (const auto& P : ops) {
                const auto lhs = std::get<SpectralDistribution>(phi(GradedObject(left_compose(P, T))));
                const auto rhs = op_apply(P, fx);
                worst = std::max(worst, sobolev_norm(lhs - rhs, 0.0));
            }
        }
    return worst;
}

bool check_left_module_map(const MapHandle& phi, const std::vector<SymbolOperator>& ops, const ProbeSet& probes,
                           double tol) {
    return left_module_defect(phi, ops, probes) <= tol;
}

RightIdealResult right_ideal_check(const SpectralDistribution& u, const SymbolOperator& P, const SymbolOperator& Q,
                                   const TamenessConfig& cfg) {
    RightIdealResult r;
    const auto& lat = u.lattice();
    // Pu is computed, so cancellations such as f(x0) delta_{x0} = 0 leave a flat roundoff floor
    // that would read as a delta; drop it the way the oracle does
    auto cleaned = [&](const SymbolOperator& A) {
        std::vector<cplx> a = op_apply(A, u).values();
        double top = 0.0;
        for (const auto& z : a) top = std::max(top, std::abs(z));
        for (auto& z : a)
            if (std::abs(z) <= cfg.noise_rel * top) z = 0.0;
        return theta_map(SpectralDistribution(lat, std::move(a)));
    };
    r.precondition = is_regular_map(cleaned(P), lat, cfg).regular;
    r.holds = is_regular_map(cleaned(op_compose(P, Q)), lat, cfg).regular;
    return r;
}

}  // namespace microsing
