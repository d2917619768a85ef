#include "microsing/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "microsing/corpus.hpp"
#include "microsing/egorov.hpp"
#include "microsing/error.hpp"
#include "microsing/groupoid.hpp"
#include "microsing/microlocal.hpp"
#include "microsing/nctorus.hpp"
#include "microsing/tameness.hpp"

namespace microsing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using Clock = std::chrono::steady_clock;

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t salt) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(salt), 0x5eedu};
    return std::mt19937_64(seq);
}

cplx gaussian(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const double re = g(rng);
    const double im = g(rng);
    return {re, im};
}

TrigPoly random_poly(std::mt19937_64& rng, int degree, double scale = 1.0) {
    std::map<Mode, cplx> c;
    for (int nu = -degree; nu <= degree; ++nu) c[Mode{nu, 0}] = scale * gaussian(rng);
    return TrigPoly(1, std::move(c));
}

// order-0 classical multiplier taking alpha on k > 0, beta on k < 0, gamma at k = 0
SymbolOperator sign_multiplier(const FrequencyLattice& lat, cplx alpha, cplx beta, cplx gamma) {
    return SymbolOperator::multiplier(
        lat, 0.0, [=](Mode k) { return k.k1 > 0 ? alpha : (k.k1 < 0 ? beta : gamma); },
        [=](const Direction& w) { return w[0] > 0 ? alpha : beta; });
}

struct NamedDistribution {
    std::string name;
    SpectralDistribution u;
    bool smooth;
};

std::vector<NamedDistribution> classifier_corpus(const FrequencyLattice& lat, std::uint64_t seed) {
    using namespace corpus;
    return {
        {"exp:1", exp_decay(lat, 1.0), true},
        {"exp:0.5", exp_decay(lat, 0.5), true},
        {"exp:0.7", exp_decay(lat, 0.7), true},
        {"gaussian:3", gaussian_decay(lat, 3.0), true},
        {"gaussian:6", gaussian_decay(lat, 6.0), true},
        {"random-smooth:a", random_smooth(lat, seed), true},
        {"random-smooth:b", random_smooth(lat, seed + 1), true},
        {"random-smooth:c", random_smooth(lat, seed + 2), true},
        {"band-limited:8", band_limited_random(lat, seed + 3, 8), true},
        {"band-limited:5", band_limited_random(lat, seed + 4, 5), true},
        {"delta:0", delta(lat, {0.0, 0.0}), false},
        {"delta:1.5", delta(lat, {1.5, 0.0}), false},
        {"delta-prime:0", delta_prime(lat, 0.0), false},
        {"hardy", hardy(lat), false},
        {"sawtooth", sawtooth(lat), false},
        {"power:0.6", power_law(lat, 0.6), false},
        {"power:1.6", power_law(lat, 1.6), false},
        {"power:2.6", power_law(lat, 2.6), false},
        {"power:4", power_law(lat, 4.0), false},
        {"random-phase", random_phase(lat, seed + 5), false},
    };
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

// circular distance between grid cell a and b on a G-periodic axis
int circ(long a, long b, long G) {
    const long d = std::labs(a - b) % G;
    return int(std::min(d, G - d));
}

bool within_cell_of(const std::vector<std::size_t>& cells, double x0, int grid, double tol = 1.0) {
    if (cells.empty()) return false;
    for (auto i : cells)
        if (cell_distance(i, {x0, 0.0}, 1, grid) > tol + 1e-9) return false;
    return true;
}

// ---------------------------------------------------------------------------

CriterionOutcome c1_norms(const AcceptanceOptions& o) {
    CriterionOutcome r{1, "norm exactness against brute-force sums", false, {}, json::object(), 0.0};
    const int count = o.quick ? 6 : 20;
    const FrequencyLattice lat(1, 32);
    auto rng = rng_for(o.config.seed, 1);
    std::uniform_real_distribution<double> U(0.0, 3.0);
    double worst = 0.0;
    auto rel = [](double a, long double b) { return double(std::abs((long double)a - b) / std::max(b, 1e-300L)); };
    for (int i = 0; i < count; ++i) {
        const double g1 = U(rng), g2 = U(rng), g3 = U(rng);
        const auto u = SpectralDistribution::from_function(
            lat, [&](Mode k) { return gaussian(rng) * std::pow(1.0 + std::abs(k.k1), -g1); });
        for (double s : {-3.0, -1.5, 0.0, 1.0, 2.5, 4.0}) {
            long double acc = 0.0L;
            for (int k = -32; k <= 32; ++k)
                acc += std::norm(u.at({k, 0})) * std::pow(1.0L + (long double)k * k, (long double)s);
            worst = std::max(worst, rel(sobolev_norm(u, s), std::sqrt(acc)));
        }
        Eigen::MatrixXcd M(65, 65);
        for (int j = 0; j < 65; ++j)
            for (int k = 0; k < 65; ++k)
                M(j, k) = gaussian(rng) * std::pow(1.0 + std::abs(j - 32), -g2) * std::pow(1.0 + std::abs(k - 32), -g3);
        const SmoothingKernel T(lat, M);
        auto brute_hs = [&](int p, int q) {
            long double acc = 0.0L;
            for (int j = -32; j <= 32; ++j)
                for (int k = -32; k <= 32; ++k)
                    acc += std::norm(M(j + 32, k + 32)) * std::pow(1.0L + (long double)j * j, (long double)p) *
                           std::pow(1.0L + (long double)k * k, (long double)q);
            return std::sqrt(acc);
        };
        for (auto [p, q] : {std::pair{-2, 1}, {0, 0}, {1, -1}, {2, 2}, {-3, -3}})
            worst = std::max(worst, rel(hs_norm(T, p, q), brute_hs(p, q)));
        for (int n = 0; n <= 3; ++n) {
            long double acc = 0.0L;
            for (int p = -n; p <= 2 * n; ++p)
                for (int q = -n; q <= 2 * n; ++q)
                    if (p + q <= n) acc += brute_hs(p, q);
            worst = std::max(worst, rel(graded_kernel_norm(T, n), acc));
        }
    }
    r.pass = worst <= 1e-12;
    r.detail = std::to_string(count) + " objects, worst relative error " + fmt(worst);
    r.data = {{"objects", count}, {"worst_relative_error", worst}};
    return r;
}

CriterionOutcome c2_tameness(const AcceptanceOptions& o) {
    CriterionOutcome r{2, "tameness degrees of evaluation maps and of T -> T(1+Delta)^{m/2}", false, {}, json::object(), 0.0};
    const FrequencyLattice lat(1, 128);
    const auto& tc = o.config.tameness;
    bool ok = true;
    json rows = json::array();
    std::ostringstream det;
    for (int s = 0; s <= 2; ++s) {
        const auto rep = estimate_tameness(theta_map(corpus::power_law(lat, s + 0.6)), lat, tc);
        const bool good = rep.r_hat && *rep.r_hat >= -s - 1 && *rep.r_hat <= -s + 1;
        ok = ok && good;
        rows.push_back({{"map", "theta_u, decay " + std::to_string(s)}, {"r_hat", rep.r_hat ? json(*rep.r_hat) : json()},
                        {"ok", good}});
        det << "s=" << s << ":" << (rep.r_hat ? fmt(*rep.r_hat) : "none") << " ";
    }
    for (int m = 1; m <= 2; ++m) {
        const auto rep = estimate_tameness(right_multiplication_map(SymbolOperator::bessel_potential(lat, m)), lat, tc);
        const bool good = rep.r_hat && std::abs(*rep.r_hat - m) <= 0.5;
        ok = ok && good;
        rows.push_back({{"map", "T(1+Delta)^{m/2}, m=" + std::to_string(m)},
                        {"r_hat", rep.r_hat ? json(*rep.r_hat) : json()}, {"ok", good}});
        det << "m=" << m << ":" << (rep.r_hat ? fmt(*rep.r_hat) : "none") << " ";
    }
    r.pass = ok;
    r.detail = det.str();
    r.data = {{"rows", rows}};
    return r;
}

CriterionOutcome c3_theorem_mo(const AcceptanceOptions& o) {
    CriterionOutcome r{3, "classifier/oracle agreement on the 20-element corpus", false, {}, json::object(), 0.0};
    const FrequencyLattice lat(1, 128);
    int agree = 0, expected = 0;
    json rows = json::array();
    const auto items = classifier_corpus(lat, o.config.seed);
    for (const auto& it : items) {
        const auto res = theorem_mo_check(it.u, o.config.tameness, o.config.oracle);
        agree += res.agree;
        expected += res.oracle == it.smooth;
        rows.push_back({{"input", it.name}, {"classifier", res.classifier}, {"oracle", res.oracle}, {"agree", res.agree}});
    }
    json families = json::array();
    for (const auto& f : default_probes(lat, Space::Kernels, o.config.tameness).families) families.push_back(f.name);
    r.pass = agree == int(items.size()) && expected == int(items.size());
    r.detail = std::to_string(agree) + "/" + std::to_string(items.size()) + " agree, oracle matches the intended class on " +
               std::to_string(expected);
    r.data = {{"rows", rows}, {"probe_families", families}};
    return r;
}

CriterionOutcome c4_singular_support(const AcceptanceOptions& o) {
    CriterionOutcome r{4, "singular support localization and the vanishing-multiplier counterexample", false, {}, json::object(), 0.0};
    const FrequencyLattice lat(1, 128);
    const CutoffDictionary dict(lat, o.config.dictionary);
    const auto& det = o.config.detector;
    const int G = dict.grid();
    bool ok = true;
    json rows = json::array();
    auto record = [&](const std::string& name, const std::vector<std::size_t>& cells, bool good) {
        ok = ok && good;
        rows.push_back({{"input", name}, {"cells", cells}, {"ok", good}});
    };
    for (double x0 : {0.0, 1.5, 4.0}) {
        const auto ss = singular_support(corpus::delta(lat, {x0, 0.0}), dict, det).detected();
        record("delta:" + fmt(x0), ss, within_cell_of(ss, x0, G));
    }
    const auto saw = corpus::sawtooth(lat);
    const auto ss_saw = singular_support(saw, dict, det).detected();
    record("sawtooth", ss_saw, within_cell_of(ss_saw, 0.0, G));
    for (const auto& [name, u] : {std::pair{std::string("exp:1"), corpus::exp_decay(lat, 1.0)},
                                  {std::string("random-smooth"), corpus::random_smooth(lat, o.config.seed)}}) {
        const auto ss = singular_support(u, dict, det).detected();
        record(name, ss, ss.empty());
    }
    const auto sinx = TrigPoly(1, {{Mode{1, 0}, cplx(0.0, -0.5)}, {Mode{-1, 0}, cplx(0.0, 0.5)}});
    const auto rem = remark_counterexample_check(saw, sinx, dict, det);
    ok = ok && rem.holds;
    r.pass = ok;
    r.detail = "delta/sawtooth/smooth located; sin*sawtooth non-regular with sin vanishing on its support: " +
               std::string(rem.holds ? "yes" : "no");
    r.data = {{"rows", rows}, {"remark", {{"vanishes", rem.vanishes}, {"product_singular", rem.product_singular}}}};
    return r;
}

CriterionOutcome c5_wavefront(const AcceptanceOptions& o) {
    CriterionOutcome r{5, "wavefront directions, line delta in 2D, projection onto the singular support", false, {}, json::object(), 0.0};
    const FrequencyLattice lat(1, 128);
    const CutoffDictionary dict(lat, o.config.dictionary);
    const auto& det = o.config.detector;
    const int G = dict.grid();
    auto dir_set = [](const CellSet& cells) {
        std::set<std::size_t> d;
        for (const auto& c : cells) d.insert(c.second);
        return d;
    };
    auto points = [](const CellSet& cells) {
        std::vector<std::size_t> p;
        for (const auto& c : cells) p.push_back(c.first);
        return p;
    };
    const auto wf_delta = wavefront(corpus::delta(lat), dict, det).detected();
    const bool delta_ok = dir_set(wf_delta) == std::set<std::size_t>{0, 1} && within_cell_of(points(wf_delta), 0.0, G);
    const auto wf_hardy = wavefront(corpus::hardy(lat), dict, det).detected();
    const bool hardy_ok = dir_set(wf_hardy) == std::set<std::size_t>{0} && within_cell_of(points(wf_hardy), 0.0, G);

    // 2D line delta on {x = 0}
    const FrequencyLattice lat2(2, 64);
    const CutoffDictionary dict2(lat2, o.config.dictionary);
    const auto wf_line = wavefront(corpus::line_delta(lat2), dict2, det);
    const auto cells2 = wf_line.detected();
    const long G2 = dict2.grid();
    const double step = kTwoPi / double(dict2.directions().size());
    bool line_ok = !cells2.empty();
    std::set<long> rows_hit;
    bool plus = false, minus = false;
    for (const auto& [i, j] : cells2) {
        const long ix = long(i) / G2, iy = long(i) % G2;
        const auto& d = dict2.directions()[j];
        line_ok = line_ok && circ(ix, 0, G2) <= 1 && std::abs(d[0]) >= std::cos(step) - 1e-9;
        rows_hit.insert(iy);
        plus = plus || d[0] > 0;
        minus = minus || d[0] < 0;
    }
    line_ok = line_ok && long(rows_hit.size()) == G2 && plus && minus;

    // projection WF -> singsupp on the classifier corpus
    int proj_ok = 0;
    const auto items = classifier_corpus(lat, o.config.seed);
    json proj = json::array();
    for (const auto& it : items) {
        const auto wf = wavefront(it.u, dict, det);
        const auto ss = singular_support(it.u, dict, det).detected();
        const double d = hausdorff_cells(wf.projection(), ss, 1, G);
        const bool good = d <= 1.0;
        proj_ok += good;
        proj.push_back({{"input", it.name}, {"distance", std::isfinite(d) ? json(d) : json("inf")}, {"ok", good}});
    }
    r.pass = delta_ok && hardy_ok && line_ok && proj_ok == int(items.size());
    r.detail = std::string("delta both directions: ") + (delta_ok ? "yes" : "no") + ", hardy one direction: " +
               (hardy_ok ? "yes" : "no") + ", line delta: " + (line_ok ? "yes" : "no") + ", projection " +
               std::to_string(proj_ok) + "/" + std::to_string(items.size());
    r.data = {{"delta", cells_to_json(wf_delta)}, {"hardy", cells_to_json(wf_hardy)}, {"line_delta_cells", cells2.size()},
              {"line_ok", line_ok}, {"projection", proj}};
    return r;
}

CriterionOutcome c6_right_ideal(const AcceptanceOptions& o) {
    CriterionOutcome r{6, "witness times order-0 operator stays a witness", false, {}, json::object(), 0.0};
    const FrequencyLattice lat(1, 128);
    const int count = o.quick ? 10 : 50;
    auto rng = rng_for(o.config.seed, 6);
    int pre = 0, held = 0;
    json rows = json::array();
    const double xs[] = {0.0, 1.5, 4.0};
    for (int i = 0; i < count; ++i) {
        const int kind = i % 4;
        SpectralDistribution u = kind < 3 ? corpus::delta(lat, {xs[kind], 0.0}) : corpus::hardy(lat);
        SymbolOperator P = SymbolOperator::zero(lat);
        if (kind < 3) {
            // f vanishes at the singular point; composed with a random sign multiplier
            TrigPoly f = random_poly(rng, 2);
            f = f + TrigPoly(1, {{Mode{0, 0}, -f(Point{xs[kind], 0.0})}});
            P = op_compose(SymbolOperator::multiplication(lat, f),
                           sign_multiplier(lat, gaussian(rng), gaussian(rng), gaussian(rng)));
        } else {
            // kills the only direction of the Hardy singularity
            P = op_compose(SymbolOperator::multiplication(lat, random_poly(rng, 2)),
                           sign_multiplier(lat, 0.0, gaussian(rng), 0.0));
        }
        const SymbolOperator Q =
            op_compose(SymbolOperator::multiplication(lat, random_poly(rng, 2)),
                       sign_multiplier(lat, gaussian(rng), gaussian(rng), gaussian(rng))) +
            SymbolOperator::identity(lat) * gaussian(rng);
        const auto res = right_ideal_check(u, P, Q, o.config.tameness);
        pre += res.precondition;
        held += res.precondition && res.holds;
        rows.push_back({{"input", kind < 3 ? "delta:" + fmt(xs[kind]) : std::string("hardy")},
                        {"witness", res.precondition}, {"composite_witness", res.holds}});
    }
    r.pass = pre == count && held == count;
    r.detail = std::to_string(pre) + "/" + std::to_string(count) + " witnesses, " + std::to_string(held) +
               " composites regular";
    r.data = {{"pairs", count}, {"witnesses", pre}, {"composites", held}, {"rows", rows}};
    return r;
}

CriterionOutcome c7_propagation(const AcceptanceOptions& o) {
    CriterionOutcome r{7, "propagation of singularities, compatibility, unitary group", false, {}, json::object(), 0.0};
    const FrequencyLattice lat(1, 128);
    const CutoffDictionary dict(lat, o.config.dictionary);
    const auto& det = o.config.detector;
    const auto& eg = o.config.egorov;
    const int sign = calibrate_flow_direction(lat, o.config.dictionary, det);
    const Generator free(lat, TrigPoly::constant(1, 1.0), eg.c_min);
    const auto u = corpus::delta(lat);
    bool ok = true;
    json rows = json::array();
    for (double t : eg.times) {
        const auto p = check_propagation(u, free, t, dict, det, sign, eg.dt, 1.0);
        ok = ok && p.status == CheckStatus::Pass;
        rows.push_back({{"c", "1"}, {"t", t}, {"status", to_string(p.status)}, {"distance", p.distance}});
    }
    const Generator var(lat, eg.c.to_trigpoly(), eg.c_min);
    const auto pv = check_propagation(u, var, 0.8, dict, det, sign, eg.dt, eg.tolerance);
    ok = ok && pv.status == CheckStatus::Pass;
    rows.push_back({{"c", "profile"}, {"t", 0.8}, {"status", to_string(pv.status)}, {"distance", pv.distance}});

    auto rng = rng_for(o.config.seed, 7);
    std::uniform_real_distribution<double> T(-1.5, 1.5);
    double compat = 0.0;
    for (int i = 0; i < 10; ++i) {
        Eigen::MatrixXcd M(lat.size(), lat.size());
        for (Eigen::Index a = 0; a < M.rows(); ++a)
            for (Eigen::Index b = 0; b < M.cols(); ++b)
                M(a, b) = gaussian(rng) * std::exp(-0.1 * (std::abs(double(a) - 128) + std::abs(double(b) - 128)));
        const SymbolOperator P = op_compose(SymbolOperator::multiplication(lat, random_poly(rng, 3, 0.5)),
                                            sign_multiplier(lat, gaussian(rng), gaussian(rng), gaussian(rng)));
        compat = std::max(compat, check_compatibility(SmoothingKernel(lat, M), P, var, T(rng)));
    }
    double unit = 0.0, group = 0.0;
    for (double t : {0.4, 0.7, 0.8, 1.3, -2.1}) {
        unit = std::max(unit, unitarity_defect(var, t));
        group = std::max(group, group_law_defect(var, 0.3, t));
    }
    ok = ok && compat <= 1e-10 && unit <= 1e-9 && group <= 1e-9;
    r.pass = ok;
    r.detail = "flow checks " + std::string(ok ? "within tolerance" : "see data") + ", compatibility " + fmt(compat) +
               ", unitarity " + fmt(unit) + ", group law " + fmt(group);
    r.data = {{"flow_sign", sign}, {"rows", rows}, {"compatibility", compat}, {"unitarity", unit}, {"group_law", group}};
    return r;
}

CriterionOutcome c8_groupoid(const AcceptanceOptions& o) {
    CriterionOutcome r{8, "groupoid vector representation, equivariance and anchor", false, {}, json::object(), 0.0};
    const auto& gc = o.config.groupoid;
    const GroupoidModel m(gc.N, gc.N_g);
    const TrigPoly c = o.config.egorov.c.to_trigpoly();
    const auto D = build_longitudinal_generator(m, c, o.config.egorov.c_min);
    const Generator base(m.base, c, o.config.egorov.c_min);
    auto rng = rng_for(o.config.seed, 8);

    const auto L = LongitudinalOperator::laplacian(m);
    const TrigPoly f1 = random_poly(rng, 2, 0.5), f2 = random_poly(rng, 2, 0.5);
    const auto X = LongitudinalOperator::from_blocks(m, 0.0, [&](int eta) {
        return SymbolOperator::multiplication(m.base, f1) + SymbolOperator::multiplication(m.base, f2) * cplx(eta);
    });
    const double eq = std::max(check_equivariance(L, D, base, 0.4), check_equivariance(X, D, base, 0.8));
    const double gen_dev = (vector_representation(D) - base.matrix()).cwiseAbs().maxCoeff();

    const GroupoidModel ma(gc.anchor_N, std::min(gc.N_g, gc.anchor_N));
    const bool anchor_delta = check_anchor_wf(corpus::delta(ma.base), ma, o.config.dictionary, o.config.dictionary,
                                              o.config.detector).pass;
    const bool anchor_hardy =
        check_anchor_wf(corpus::hardy(ma.base), ma, o.config.dictionary, o.config.dictionary, o.config.detector).pass;

    double worst_gap = -std::numeric_limits<double>::infinity();
    const int n = int(m.base.size());
    for (int fam = 0; fam < 10; ++fam) {
        const double decay = 0.3 + 0.1 * fam;
        const auto T = LongitudinalOperator::from_blocks(m, -std::numeric_limits<double>::infinity(), [&](int eta) {
            Eigen::MatrixXcd M(n, n);
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    M(j, k) = gaussian(rng) *
                              std::exp(-decay * (std::abs(j - gc.N) + std::abs(k - gc.N) + std::abs(eta)));
            return SymbolOperator::from_matrix(m.base, -std::numeric_limits<double>::infinity(), M);
        });
        worst_gap = std::max(worst_gap, operator_norm(vector_representation(T)) - groupoid_l1_norm(T));
    }

    const auto S = LongitudinalOperator::from_section(m, random_poly(rng, 2, 0.3) + TrigPoly::constant(1, 1.0),
                                                      random_poly(rng, 2, 0.3));
    double mult = 0.0;
    for (const auto& [P, Q] : {std::pair{&L, &X}, {&X, &S}, {&S, &L}}) {
        const Eigen::MatrixXcd lhs = vector_representation(compose(*P, *Q)).to_matrix();
        const Eigen::MatrixXcd rhs = vector_representation(*P).to_matrix() * vector_representation(*Q).to_matrix();
        mult = std::max(mult, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    r.pass = eq <= 1e-10 && gen_dev <= 1e-12 && anchor_delta && anchor_hardy && worst_gap <= 1e-8 && mult <= 1e-12;
    r.detail = "equivariance " + fmt(eq) + ", anchor delta/hardy " + (anchor_delta ? "ok" : "fail") + "/" +
               (anchor_hardy ? "ok" : "fail") + ", max(||pi(T)|| - ||T||_1) " + fmt(worst_gap) + ", multiplicativity " +
               fmt(mult);
    r.data = {{"equivariance", eq},       {"generator_deviation", gen_dev}, {"anchor_delta", anchor_delta},
              {"anchor_hardy", anchor_hardy}, {"norm_gap", worst_gap},       {"multiplicativity", mult}};
    return r;
}

// random element with prescribed membership of delta_0's wavefront ideal, built through
// the left coefficients a = sum_n V1^n f_n
NCElement random_nc(std::mt19937_64& rng, const Theta& th, const std::vector<int>& ns, const std::vector<int>& modes,
                    const std::vector<bool>& force_zero) {
    NCElement a = NCElement::zero(th);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        std::map<int, cplx> c;
        std::vector<int> ms;
        std::uniform_int_distribution<int> pick(-4, 4);
        while (int(ms.size()) < modes[i]) {
            const int mm = pick(rng);
            if (std::find(ms.begin(), ms.end(), mm) == ms.end()) ms.push_back(mm);
        }
        for (int mm : ms) c[mm] = gaussian(rng);
        ThetaFunction f(th, c);
        if (force_zero[i]) {
            // adjust the first mode so that f(n) = 0
            const int m0 = ms.front();
            const cplx e0 = std::polar(1.0, -kTwoPi * m0 * ns[i] / th.value);
            c[m0] -= f(double(ns[i])) / e0;
            f = ThetaFunction(th, c);
        }
        a = a + nc_multiply(NCElement::v1(th, ns[i]), NCElement::monomial(f, 0));
    }
    return a;
}

CriterionOutcome c9_nctorus(const AcceptanceOptions& o) {
    CriterionOutcome r{9, "noncommutative torus: membership formula, relation, right ideal", false, {}, json::object(), 0.0};
    const Theta th = Theta::parse(o.config.nctorus.theta);
    auto rng = rng_for(o.config.seed, 9);
    int cases = 0, agree = 0, formula_agree = 0;
    struct Option {
        int modes;
        bool zero;
    };
    const std::vector<Option> options{{1, false}, {2, false}, {2, true}, {3, false}, {3, true}};
    auto run_case = [&](const std::vector<int>& ns, const std::vector<Option>& opts) {
        std::vector<int> modes;
        std::vector<bool> zero;
        bool expected = true;
        for (const auto& op : opts) {
            modes.push_back(op.modes);
            zero.push_back(op.zero);
            expected = expected && op.zero;
        }
        const NCElement a = random_nc(rng, th, ns, modes, zero);
        ++cases;
        agree += nc_wf_membership(a) == expected;
        formula_agree += nc_wf_formula(a) == expected;
    };
    // exhaustive: supports of size 1 and 2 in [-3, 3], every per-coefficient option
    for (int n1 = -3; n1 <= 3; ++n1) {
        for (const auto& a : options) run_case({n1}, {a});
        for (int n2 = n1 + 1; n2 <= 3; ++n2)
            for (const auto& a : options)
                for (const auto& b : options) run_case({n1, n2}, {a, b});
    }
    const int exhaustive = cases;
    // larger random cases
    std::uniform_int_distribution<int> nsize(1, 5), nmodes(1, 5), coin(0, 1);
    for (int i = 0; i < 50; ++i) {
        std::set<int> s;
        const int k = nsize(rng);
        std::uniform_int_distribution<int> pick(-6, 6);
        while (int(s.size()) < k) s.insert(pick(rng));
        std::vector<int> ns(s.begin(), s.end());
        const bool member = coin(rng);
        std::uniform_int_distribution<int> which(0, k - 1);
        const int spoil = which(rng);
        std::vector<Option> opts;
        for (int j = 0; j < k; ++j) {
            const int mm = std::max(2, nmodes(rng));
            opts.push_back({mm, member || j != spoil});
        }
        run_case(ns, opts);
    }
    const NCElement V1 = NCElement::v1(th), V2 = NCElement::v2(th);
    const double relation =
        nc_multiply(V2, V1).distance(nc_multiply(V1, V2) * std::polar(1.0, kTwoPi / th.value));
    // right ideal on random products
    int ideal_ok = 0;
    for (int i = 0; i < 50; ++i) {
        const NCElement a = random_nc(rng, th, {-1, 0, 2}, {2, 3, 2}, {true, true, true});
        const NCElement b = random_nc(rng, th, {-2, 0, 1}, {2, 2, 3}, {false, false, false});
        ideal_ok += nc_wf_membership(a) && nc_wf_membership(nc_multiply(a, b));
    }
    r.pass = agree == cases && formula_agree == cases && relation <= 1e-12 && ideal_ok == 50;
    r.detail = std::to_string(agree) + "/" + std::to_string(cases) + " membership verdicts (" + std::to_string(exhaustive) +
               " exhaustive), relation defect " + fmt(relation) + ", right ideal " + std::to_string(ideal_ok) + "/50";
    r.data = {{"theta", th.describe()}, {"cases", cases},     {"exhaustive", exhaustive}, {"membership_agree", agree},
              {"formula_agree", formula_agree}, {"relation_defect", relation}, {"right_ideal", ideal_ok}};
    return r;
}

CriterionOutcome c10_functoriality(const AcceptanceOptions& o) {
    CriterionOutcome r{10, "wavefront pullback along the projection T^2 -> T^1", false, {}, json::object(), 0.0};
    const FrequencyLattice lat(1, 64);
    bool ok = true;
    json rows = json::array();
    for (const auto& [name, u] : {std::pair{std::string("exp:1"), corpus::exp_decay(lat, 1.0)},
                                  {std::string("delta:0"), corpus::delta(lat)},
                                  {std::string("hardy"), corpus::hardy(lat)}}) {
        const auto p = projection_pullback_wf_check(u, o.config.dictionary, o.config.dictionary, o.config.detector);
        ok = ok && p.pass;
        rows.push_back({{"input", name}, {"pass", p.pass}, {"detected", p.detected.size()}, {"predicted", p.predicted.size()}});
    }
    r.pass = ok;
    r.detail = ok ? "smooth, delta and hardy inputs agree" : "mismatch, see data";
    r.data = {{"rows", rows}};
    return r;
}

template <class F>
CriterionOutcome timed(F&& f, const AcceptanceOptions& o, int id) {
    const auto t0 = Clock::now();
    CriterionOutcome c;
    try {
        c = f(o);
    } catch (const std::exception& e) {
        c.id = id;
        c.title = "criterion " + std::to_string(id);
        c.pass = false;
        c.detail = std::string("error: ") + e.what();
        c.data = {{"error", e.what()}};
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return c;
}

}  // namespace

std::vector<CriterionOutcome> run_acceptance(const AcceptanceOptions& opt, const AcceptanceProgress& progress) {
    const auto t0 = Clock::now();
    using Fn = CriterionOutcome (*)(const AcceptanceOptions&);
    const Fn fns[] = {c1_norms,        c2_tameness,    c3_theorem_mo, c4_singular_support, c5_wavefront,
                      c6_right_ideal, c7_propagation, c8_groupoid,   c9_nctorus,          c10_functoriality};
    std::vector<CriterionOutcome> out;
    for (int i = 0; i < 10; ++i) {
        out.push_back(timed(fns[i], opt, i + 1));
        if (progress) progress(out.back());
    }
    if (opt.determinism) {
        CriterionOutcome c{11, "determinism of the hashed report and total runtime", false, {}, json::object(), 0.0};
        const auto s0 = Clock::now();
        AcceptanceOptions q = opt;
        q.quick = true;
        q.determinism = false;
        const auto h1 = acceptance_report(run_acceptance(q), q).hash();
        const auto h2 = acceptance_report(run_acceptance(q), q).hash();
        const double total = std::chrono::duration<double>(Clock::now() - t0).count();
        c.pass = h1 == h2 && total <= opt.time_budget;
        c.detail = "hashes " + h1 + (h1 == h2 ? " == " : " != ") + h2 + ", total " + fmt(total) + " s (budget " +
                   fmt(opt.time_budget) + " s)";
        c.data = {{"identical", h1 == h2}, {"hash", h1}, {"within_budget", total <= opt.time_budget}};
        c.seconds = std::chrono::duration<double>(Clock::now() - s0).count();
        out.push_back(c);
        if (progress) progress(out.back());
    }
    return out;
}

std::string format_line(const CriterionOutcome& c) {
    std::ostringstream os;
    os << (c.pass ? "PASS" : "FAIL") << "  criterion " << c.id << "  " << c.title << "  (" << c.detail << ")";
    return os.str();
}

RunReport acceptance_report(const std::vector<CriterionOutcome>& outcomes, const AcceptanceOptions& opt,
                            const std::string& command) {
    json cfg = opt.config.to_json();
    cfg["quick"] = opt.quick;
    RunReport rep(command, cfg, opt.config.seed);
    for (const auto& c : outcomes) {
        json d = c.data;
        d["id"] = c.id;
        d["title"] = c.title;
        rep.add({"criterion " + std::to_string(c.id), c.pass ? Status::Pass : Status::Fail, d});
        rep.set_timing("criterion " + std::to_string(c.id), c.seconds);
    }
    return rep;
}

}  // namespace microsing
