// microsing: command-line front end for the spectral singularity toolkit.
//
//   microsing [--config PATH] [--seed N] [--out DIR] [--format json|csv] [--quick] <command> ...
//
// Exit codes: 0 ok, 1 check failure, 2 usage or configuration error, 3 I/O failure.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <cmath>

#include "microsing/acceptance.hpp"
#include "microsing/config.hpp"
#include "microsing/corpus.hpp"
#include "microsing/egorov.hpp"
#include "microsing/error.hpp"
#include "microsing/groupoid.hpp"
#include "microsing/microlocal.hpp"
#include "microsing/nctorus.hpp"
#include "microsing/report.hpp"
#include "microsing/tameness.hpp"

namespace fs = std::filesystem;
using namespace microsing;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2, kIo = 3;

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format;
    bool quick = false;
};

RunConfig resolve_config(const Globals& g) {
    RunConfig c = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
    if (g.seed) c.seed = *g.seed;
    if (!g.format.empty()) c.output.format = g.format;
    if (!g.out_dir.empty()) c.output.directory = g.out_dir;
    c.tameness.seed = c.seed;
    c.validate();
    return c;
}

void write_file(const RunConfig& c, const std::string& name, const std::string& content) {
    const fs::path dir(c.output.directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
    write_text_atomic((dir / name).string(), content);
}

int emit(const RunConfig& c, RunReport& rep) {
    const std::string body = c.output.format == "csv" ? rep.to_csv() : rep.to_json().dump(2) + "\n";
    if (c.output.directory.empty()) {
        std::cout << body;
    } else {
        const std::string name = rep.command() + (c.output.format == "csv" ? ".csv" : ".json");
        write_file(c, name, body);
        std::cerr << "report written to " << (fs::path(c.output.directory) / name).string() << " (hash " << rep.hash()
                  << ")\n";
    }
    return rep.ok() ? kOk : kCheckFailed;
}

json points_json(const std::vector<Point>& xs, const std::vector<std::size_t>& idx, int dim) {
    json a = json::array();
    for (auto i : idx) a.push_back(dim == 1 ? json(xs[i][0]) : json({xs[i][0], xs[i][1]}));
    return a;
}

json wf_json(const WavefrontSet& wf, const CellSet& cells) {
    json a = json::array();
    for (const auto& [i, j] : cells) {
        json p = wf.dim == 1 ? json(wf.xs[i][0]) : json({wf.xs[i][0], wf.xs[i][1]});
        a.push_back({{"cell", i}, {"x", p}, {"direction", {wf.dirs[j][0], wf.dirs[j][1]}},
                     {"score", wf.score(i, j)}});
    }
    return a;
}

SpectralDistribution parse_input(const std::string& spec, const FrequencyLattice& lat) {
    if (spec.empty()) fail(ErrorKind::Usage, "empty distribution spec");
    return corpus::parse_spec(spec, lat);
}

// ---------------------------------------------------------------------------

int cmd_analyze(const RunConfig& c, const std::string& spec) {
    const auto lat = c.lattice();
    const auto u = parse_input(spec, lat);
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = theorem_mo_check(u, c.tameness, c.oracle);
    const auto orc = coefficient_regularity_oracle(u, c.oracle);
    RunReport rep("analyze", c.to_json(), c.seed);
    const auto& tr = res.report;
    json passes = json::array();
    for (const auto& [r, ok] : tr.passes) passes.push_back({r, ok});
    json constants = json::array();
    for (const auto& [n, C] : tr.constants) constants.push_back({n, C});
    rep.add({"tameness",
             Status::Info,
             {{"input", spec},
              {"r_hat", tr.r_hat ? json(*tr.r_hat) : json()},
              {"k_hat", tr.k_hat},
              {"window", {tr.n_lo, tr.n_hi}},
              {"verdict", to_string(tr.verdict)},
              {"passes", passes},
              {"constants", constants},
              {"residual", tr.residual},
              {"b_satisfied", tr.b_satisfied},
              {"failing_family", tr.failing_family},
              {"recipe", tr.recipe}}});
    rep.add({"regularity", Status::Info, {{"regular", res.classifier}}});
    rep.add({"oracle", Status::Info, {{"smooth", orc.smooth}, {"slope", orc.slope}, {"bands_used", orc.bands_used}}});
    rep.add({"agreement", res.agree ? Status::Pass : Status::Fail,
             {{"classifier", res.classifier ? "regular" : "non-regular"}, {"oracle", res.oracle ? "smooth" : "singular"},
              {"agree", res.agree}}});
    rep.set_timing("analyze", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return emit(c, rep);
}

int cmd_wavefront(const RunConfig& c, const std::string& spec) {
    const auto lat = c.lattice();
    const auto u = parse_input(spec, lat);
    const auto t0 = std::chrono::steady_clock::now();
    const CutoffDictionary dict(lat, c.dictionary);
    const auto ss = singular_support(u, dict, c.detector);
    const auto wf = wavefront(u, dict, c.detector);
    const auto ss_cells = ss.detected();
    const auto cells = wf.detected();
    RunReport rep("wavefront", c.to_json(), c.seed);
    rep.add({"singular_support", Status::Info,
             {{"input", spec}, {"grid", ss.grid}, {"cells", ss_cells}, {"points", points_json(ss.xs, ss_cells, lat.dim())}}});
    json witnesses = json::array();
    for (std::size_t i = 0; i < wf.witnesses.size() && i < 64; ++i) {
        const auto& w = wf.witnesses[i];
        witnesses.push_back({w.width, w.center, w.direction});
    }
    rep.add({"wavefront", Status::Info,
             {{"points", wf_json(wf, cells)}, {"witness_count", wf.witnesses.size()}, {"witnesses_head", witnesses},
              {"dictionary_size", dict.size()}, {"covering", dict.covering()}}});
    const double d = hausdorff_cells(wf.projection(), ss_cells, lat.dim(), ss.grid);
    rep.add({"projection", d <= 1.0 ? Status::Pass : Status::Fail,
             {{"distance", std::isfinite(d) ? json(d) : json("inf")}}});
    rep.set_timing("wavefront", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (!c.output.directory.empty()) write_file(c, "wavefront_heatmap.csv", wf.heatmap_csv());
    return emit(c, rep);
}

int cmd_propagate(const RunConfig& c, const std::string& spec, double t) {
    const auto lat = c.lattice();
    const auto u = parse_input(spec, lat);
    const auto t0 = std::chrono::steady_clock::now();
    const CutoffDictionary dict(lat, c.dictionary);
    const Generator g(lat, c.egorov.c.to_trigpoly(), c.egorov.c_min);
    const int sign = calibrate_flow_direction(lat, c.dictionary, c.detector);
    const auto p = check_propagation(u, g, t, dict, c.detector, sign, c.egorov.dt, c.egorov.tolerance);
    RunReport rep("propagate", c.to_json(), c.seed);
    const Status st = p.status == CheckStatus::Pass ? Status::Pass
                      : p.status == CheckStatus::Fail ? Status::Fail
                                                      : Status::Inconclusive;
    rep.add({"propagation", st,
             {{"input", spec},
              {"t", t},
              {"flow_sign", sign},
              {"distance_cells", std::isfinite(p.distance) ? json(p.distance) : json("inf")},
              {"tolerance", p.tolerance},
              {"before", cells_to_json(p.before)},
              {"predicted", cells_to_json(p.predicted)},
              {"after", cells_to_json(p.after)}}});
    const double ud = unitarity_defect(g, t);
    rep.add({"unitarity", ud <= 1e-9 ? Status::Pass : Status::Fail, {{"defect", ud}}});
    rep.set_timing("propagate", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return emit(c, rep);
}

int cmd_groupoid(const RunConfig& c, const std::string& demo, double t) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep("groupoid", c.to_json(), c.seed);
    const TrigPoly cp = c.egorov.c.to_trigpoly();
    if (demo == "equivariance") {
        const GroupoidModel m(c.groupoid.N, c.groupoid.N_g);
        const auto D = build_longitudinal_generator(m, cp, c.egorov.c_min);
        const Generator base(m.base, cp, c.egorov.c_min);
        std::mt19937_64 rng(c.seed);
        std::normal_distribution<double> nd;
        std::map<Mode, cplx> f1, f2;
        for (int nu = -2; nu <= 2; ++nu) {
            f1[{nu, 0}] = cplx(nd(rng), nd(rng)) * 0.5;
            f2[{nu, 0}] = cplx(nd(rng), nd(rng)) * 0.5;
        }
        const TrigPoly a(1, f1), b(1, f2);
        const auto X = LongitudinalOperator::from_blocks(m, 0.0, [&](int eta) {
            return SymbolOperator::multiplication(m.base, a) + SymbolOperator::multiplication(m.base, b) * cplx(eta);
        });
        const double dl = check_equivariance(LongitudinalOperator::laplacian(m), D, base, t);
        const double dx = check_equivariance(X, D, base, t);
        const double gd = (vector_representation(D) - base.matrix()).cwiseAbs().maxCoeff();
        rep.add({"equivariance_laplacian", dl <= 1e-10 ? Status::Pass : Status::Fail, {{"t", t}, {"deviation", dl}}});
        rep.add({"equivariance_x_dependent", dx <= 1e-10 ? Status::Pass : Status::Fail, {{"t", t}, {"deviation", dx}}});
        rep.add({"generator_representation", gd <= 1e-12 ? Status::Pass : Status::Fail,
                 {{"deviation", gd}, {"hermitian_defect", D.max_hermitian_defect()}}});
    } else if (demo == "anchor") {
        const GroupoidModel m(c.groupoid.anchor_N, std::min(c.groupoid.N_g, c.groupoid.anchor_N));
        for (const auto& [name, u] : {std::pair{std::string("delta"), corpus::delta(m.base)},
                                      {std::string("hardy"), corpus::hardy(m.base)}}) {
            const auto r = check_anchor_wf(u, m, c.dictionary, c.dictionary, c.detector);
            rep.add({"anchor_" + name, r.pass ? Status::Pass : Status::Fail,
                     {{"distance", std::isfinite(r.distance) ? json(r.distance) : json("inf")},
                      {"detected", cells_to_json(r.detected)},
                      {"predicted", cells_to_json(r.predicted)}}});
            if (!c.output.directory.empty()) {
                // one heatmap per g-slice: rows are w-grid points, columns the direction circle
                const CutoffDictionary d2(m.total, c.dictionary);
                const auto wf = wavefront(range_pullback(u, m), d2, c.detector);
                const std::size_t G = std::size_t(wf.grid);
                for (std::size_t iy = 0; iy < G; ++iy) {
                    std::ostringstream os;
                    os << "w";
                    for (const auto& d : wf.dirs) os << ",dir(" << d[0] << ";" << d[1] << ")";
                    os << "\n";
                    for (std::size_t ix = 0; ix < G; ++ix) {
                        const std::size_t i = ix * G + iy;
                        os << wf.xs[i][0];
                        for (std::size_t j = 0; j < wf.dirs.size(); ++j) os << "," << wf.score(i, j);
                        os << "\n";
                    }
                    write_file(c, "groupoid_" + name + "_g" + std::to_string(iy) + ".csv", os.str());
                }
            }
        }
    } else {
        fail(ErrorKind::Usage, "unknown groupoid demo '" + demo + "' (expected equivariance or anchor)");
    }
    rep.set_timing("groupoid", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return emit(c, rep);
}

int cmd_nctorus(const RunConfig& c, const std::string& check_file, const std::string& theta_text) {
    const Theta th = Theta::parse(theta_text.empty() ? c.nctorus.theta : theta_text);
    RunReport rep("nctorus", c.to_json(), c.seed);
    if (!check_file.empty()) {
        const NCElement a = nc_from_json(read_json_file(check_file), th);
        require(theta_text.empty() || a.theta() == th, ErrorKind::ThetaMismatch,
                "element theta " + a.theta().describe() + " differs from --theta " + th.describe());
        const bool member = nc_wf_membership(a);
        const bool formula = nc_wf_formula(a);
        rep.add({"wavefront_membership", member == formula ? Status::Pass : Status::Fail,
                 {{"element", nc_to_json(a)}, {"member", member}, {"formula_member", formula}, {"agree", member == formula}}});
        return emit(c, rep);
    }
    const NCElement V1 = NCElement::v1(th), V2 = NCElement::v2(th);
    const double rel =
        nc_multiply(V2, V1).distance(nc_multiply(V1, V2) * std::polar(1.0, 2.0 * std::numbers::pi / th.value));
    rep.add({"relation", rel <= 1e-12 ? Status::Pass : Status::Fail, {{"theta", th.describe()}, {"defect", rel}}});
    // V1 f with f(1) = 0 lies in the wavefront ideal of delta_0
    const ThetaFunction f(th, {{1, 1.0}, {0, -std::polar(1.0, -2.0 * std::numbers::pi / th.value)}});
    const NCElement a = nc_multiply(V1, NCElement::monomial(f, 0));
    rep.add({"example_member", nc_wf_membership(a) && nc_wf_formula(a) ? Status::Pass : Status::Fail,
             {{"element", nc_to_json(a)}, {"member", nc_wf_membership(a)}, {"formula_member", nc_wf_formula(a)}}});
    NCDifferentialOperator lap{th, 2, {{{2, 0}, NCElement::one(th)}, {{0, 2}, NCElement::one(th)}}};
    NCDifferentialOperator mixed{th, 2, {{{1, 1}, NCElement::one(th)}}};
    const auto e1 = nc_is_elliptic(lap), e2 = nc_is_elliptic(mixed);
    rep.add({"ellipticity", e1.elliptic && !e2.elliptic ? Status::Pass : Status::Fail,
             {{"laplacian", {{"elliptic", e1.elliptic}, {"score", e1.score}}},
              {"mixed", {{"elliptic", e2.elliptic}, {"score", e2.score}}}}});
    return emit(c, rep);
}

int cmd_selftest(const RunConfig& c, bool quick) {
    AcceptanceOptions opt;
    opt.config = c;
    opt.quick = quick;
    const auto outcomes = run_acceptance(opt, [](const CriterionOutcome& o) { std::cerr << format_line(o) << std::endl; });
    RunReport rep = acceptance_report(outcomes, opt);
    return emit(c, rep);
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Io: return kIo;
        case ErrorKind::Usage:
        case ErrorKind::InvalidConfig:
        case ErrorKind::InvalidInput:
        case ErrorKind::LatticeMismatch:
        case ErrorKind::Unsupported:
        case ErrorKind::ThetaMismatch: return kUsage;
        case ErrorKind::Ellipticity:
        case ErrorKind::StepSize: return kUsage;
    }
    return kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral singularity structures on the flat torus"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--config", g.config_path, "JSON configuration file");
    auto* seed_opt = app.add_option("--seed", seed, "seed for every randomized component");
    app.add_option("--out", g.out_dir, "directory for reports and CSV output");
    app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--quick", g.quick, "reduced sample sizes");

    std::string spec_analyze, spec_wf, spec_prop = "delta:0", demo = "equivariance", check_file, theta;
    double t_prop = 0.7, t_grp = 0.8;
    auto* analyze = app.add_subcommand("analyze", "tameness degree, regularity and oracle verdict");
    analyze->add_option("spec", spec_analyze, "distribution spec")->required();
    auto* wavefront_cmd = app.add_subcommand("wavefront", "singular support and wavefront set");
    wavefront_cmd->add_option("spec", spec_wf, "distribution spec")->required();
    auto* propagate_cmd = app.add_subcommand("propagate", "propagation of the wavefront under e^{itD}");
    propagate_cmd->add_option("spec", spec_prop, "distribution spec (default delta:0)");
    propagate_cmd->add_option("--t", t_prop, "time");
    auto* groupoid_cmd = app.add_subcommand("groupoid", "groupoid model demos");
    groupoid_cmd->add_option("--demo", demo, "equivariance or anchor")->check(CLI::IsMember({"equivariance", "anchor"}));
    groupoid_cmd->add_option("--t", t_grp, "time");
    auto* nctorus_cmd = app.add_subcommand("nctorus", "noncommutative torus checks");
    nctorus_cmd->add_option("--check-wf", check_file, "element JSON to test against the wavefront ideal of delta_0");
    nctorus_cmd->add_option("--theta", theta, "theta as p/q or a decimal");
    auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    if (*seed_opt) g.seed = seed;

    try {
        const RunConfig c = resolve_config(g);
        if (*analyze) return cmd_analyze(c, spec_analyze);
        if (*wavefront_cmd) return cmd_wavefront(c, spec_wf);
        if (*propagate_cmd) return cmd_propagate(c, spec_prop, t_prop);
        if (*groupoid_cmd) return cmd_groupoid(c, demo, t_grp);
        if (*nctorus_cmd) return cmd_nctorus(c, check_file, theta);
        if (*selftest_cmd) return cmd_selftest(c, g.quick);
    } catch (const Error& e) {
        std::cerr << "microsing: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "microsing: " << e.what() << "\n";
        return kCheckFailed;
    }
    return kUsage;
}
