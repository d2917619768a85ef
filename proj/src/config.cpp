#include "microsing/config.hpp"

#include <set>

#include "microsing/error.hpp"
#include "microsing/nctorus.hpp"

namespace microsing {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    require(j.is_object(), ErrorKind::InvalidConfig, where + " must be a JSON object");
    for (const auto& [k, v] : j.items())
        require(allowed.count(k) > 0, ErrorKind::InvalidConfig, "unknown config key '" + where + "." + k + "'");
}

template <class T>
void read(const json& j, const char* key, T& dst, const std::string& where) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::InvalidConfig, "config key '" + where + "." + key + "' has the wrong type");
    }
}

std::vector<std::pair<int, double>> read_terms(const json& j, const std::string& where) {
    require(j.is_array(), ErrorKind::InvalidConfig, where + " must be a list of [nu, coefficient] pairs");
    std::vector<std::pair<int, double>> out;
    for (const auto& e : j) {
        require(e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[1].is_number(), ErrorKind::InvalidConfig,
                where + " entries must be [nu, coefficient]");
        out.emplace_back(e[0].get<int>(), e[1].get<double>());
    }
    return out;
}

}  // namespace

TrigPoly WaveSpeedProfile::to_trigpoly() const {
    std::map<Mode, cplx> c;
    c[Mode{0, 0}] += constant;
    for (const auto& [nu, a] : cos_terms) {
        c[Mode{nu, 0}] += 0.5 * a;
        c[Mode{-nu, 0}] += 0.5 * a;
    }
    for (const auto& [nu, b] : sin_terms) {
        c[Mode{nu, 0}] += cplx(0.0, -0.5 * b);
        c[Mode{-nu, 0}] += cplx(0.0, 0.5 * b);
    }
    std::erase_if(c, [](const auto& kv) { return kv.second == cplx(0.0); });
    return TrigPoly(1, std::move(c));
}

void RunConfig::validate() const {
    require(dim == 1 || dim == 2, ErrorKind::InvalidConfig, "lattice.d must be 1 or 2");
    require(N >= 16, ErrorKind::InvalidConfig, "lattice.N must be at least 16");
    require(dim == 1 ? N <= 512 : N <= 128, ErrorKind::InvalidConfig, "lattice.N is capped at 512 (d = 1) and 128 (d = 2)");
    tameness.validate();
    require(oracle.s_max > 0 && oracle.fit_bands >= 2 && oracle.noise_rel >= 0 && oracle.floor_abs >= 0,
            ErrorKind::InvalidConfig, "oracle settings out of range");
    require(detector.threshold > 0 && detector.threshold < 1 && detector.floor_rel >= 0, ErrorKind::InvalidConfig,
            "detector threshold must lie in (0, 1) and floor_rel must be nonnegative");
    require(dictionary.beta > 0 && dictionary.directions >= 4 && dictionary.grid_points >= 0 && dictionary.alpha >= 0,
            ErrorKind::InvalidConfig, "dictionary settings out of range");
    for (double w : dictionary.widths) require(w > 0, ErrorKind::InvalidConfig, "dictionary widths must be positive");
    require(egorov.dt > 0 && egorov.c_min > 0 && egorov.tolerance >= 0, ErrorKind::InvalidConfig,
            "egorov dt, c_min and tolerance must be positive");
    require(egorov.c.to_trigpoly().min_real_on_grid(256) >= egorov.c_min, ErrorKind::InvalidConfig,
            "egorov.c must stay above c_min");
    require(groupoid.N >= 4 && groupoid.N_g >= 0 && groupoid.N_g <= groupoid.N && groupoid.anchor_N >= 16,
            ErrorKind::InvalidConfig, "groupoid sizes out of range");
    try {
        (void)Theta::parse(nctorus.theta);
    } catch (const Error& e) {
        fail(ErrorKind::InvalidConfig, std::string("nctorus.theta: ") + e.what());
    }
    require(output.format == "json" || output.format == "csv", ErrorKind::InvalidConfig, "output.format must be json or csv");
}

json RunConfig::to_json() const {
    auto terms = [](const std::vector<std::pair<int, double>>& t) {
        json a = json::array();
        for (const auto& [nu, v] : t) a.push_back({nu, v});
        return a;
    };
    return json{
        {"lattice", {{"d", dim}, {"N", N}}},
        {"seed", seed},
        {"oracle", {{"s_max", oracle.s_max}, {"noise_rel", oracle.noise_rel}, {"floor_abs", oracle.floor_abs},
                    {"fit_bands", oracle.fit_bands}}},
        {"detector", {{"floor_rel", detector.floor_rel}, {"threshold", detector.threshold}}},
        {"dictionary", {{"widths", dictionary.widths}, {"alpha", dictionary.alpha}, {"directions", dictionary.directions},
                        {"beta", dictionary.beta}, {"grid_points", dictionary.grid_points},
                        {"leakage_tol", dictionary.leakage_tol}}},
        {"tameness", {{"window", {tameness.n_lo, tameness.n_hi}}, {"r_max", tameness.r_max}, {"tau", tameness.tau},
                      {"b", tameness.b}, {"random_probes", tameness.random_probes},
                      {"noise_rel", tameness.noise_rel}}},
        {"egorov", {{"dt", egorov.dt}, {"t", egorov.times},
                    {"c", {{"constant", egorov.c.constant}, {"cos", terms(egorov.c.cos_terms)}, {"sin", terms(egorov.c.sin_terms)}}},
                    {"c_min", egorov.c_min}, {"tolerance", egorov.tolerance}}},
        {"groupoid", {{"N", groupoid.N}, {"N_g", groupoid.N_g}, {"anchor_N", groupoid.anchor_N}}},
        {"nctorus", {{"theta", nctorus.theta}}},
        {"output", {{"format", output.format}, {"directory", output.directory}}},
    };
}

RunConfig config_from_json(const json& j, RunConfig c) {
    check_keys(j, {"lattice", "seed", "oracle", "detector", "dictionary", "tameness", "egorov", "groupoid", "nctorus", "output"},
               "config");
    if (j.contains("lattice")) {
        const auto& l = j["lattice"];
        check_keys(l, {"d", "N"}, "lattice");
        read(l, "d", c.dim, "lattice");
        read(l, "N", c.N, "lattice");
    }
    read(j, "seed", c.seed, "config");
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        check_keys(o, {"s_max", "noise_rel", "floor_abs", "fit_bands"}, "oracle");
        read(o, "s_max", c.oracle.s_max, "oracle");
        read(o, "noise_rel", c.oracle.noise_rel, "oracle");
        read(o, "floor_abs", c.oracle.floor_abs, "oracle");
        read(o, "fit_bands", c.oracle.fit_bands, "oracle");
    }
    if (j.contains("detector")) {
        const auto& d = j["detector"];
        check_keys(d, {"floor_rel", "threshold"}, "detector");
        read(d, "floor_rel", c.detector.floor_rel, "detector");
        read(d, "threshold", c.detector.threshold, "detector");
    }
    if (j.contains("dictionary")) {
        const auto& d = j["dictionary"];
        check_keys(d, {"widths", "alpha", "directions", "beta", "grid_points", "leakage_tol"}, "dictionary");
        read(d, "widths", c.dictionary.widths, "dictionary");
        read(d, "alpha", c.dictionary.alpha, "dictionary");
        read(d, "directions", c.dictionary.directions, "dictionary");
        read(d, "beta", c.dictionary.beta, "dictionary");
        read(d, "grid_points", c.dictionary.grid_points, "dictionary");
        read(d, "leakage_tol", c.dictionary.leakage_tol, "dictionary");
    }
    if (j.contains("tameness")) {
        const auto& t = j["tameness"];
        check_keys(t, {"window", "r_max", "tau", "b", "random_probes", "noise_rel"}, "tameness");
        if (t.contains("window")) {
            std::vector<int> w;
            read(t, "window", w, "tameness");
            require(w.size() == 2, ErrorKind::InvalidConfig, "tameness.window must be [n_lo, n_hi]");
            c.tameness.n_lo = w[0];
            c.tameness.n_hi = w[1];
        }
        read(t, "r_max", c.tameness.r_max, "tameness");
        read(t, "tau", c.tameness.tau, "tameness");
        read(t, "b", c.tameness.b, "tameness");
        read(t, "random_probes", c.tameness.random_probes, "tameness");
        read(t, "noise_rel", c.tameness.noise_rel, "tameness");
    }
    if (j.contains("egorov")) {
        const auto& e = j["egorov"];
        check_keys(e, {"dt", "t", "c", "c_min", "tolerance"}, "egorov");
        read(e, "dt", c.egorov.dt, "egorov");
        read(e, "t", c.egorov.times, "egorov");
        read(e, "c_min", c.egorov.c_min, "egorov");
        read(e, "tolerance", c.egorov.tolerance, "egorov");
        if (e.contains("c")) {
            const auto& p = e["c"];
            check_keys(p, {"constant", "cos", "sin"}, "egorov.c");
            WaveSpeedProfile w{0.0, {}, {}};
            read(p, "constant", w.constant, "egorov.c");
            if (p.contains("cos")) w.cos_terms = read_terms(p["cos"], "egorov.c.cos");
            if (p.contains("sin")) w.sin_terms = read_terms(p["sin"], "egorov.c.sin");
            c.egorov.c = w;
        }
    }
    if (j.contains("groupoid")) {
        const auto& g = j["groupoid"];
        check_keys(g, {"N", "N_g", "anchor_N"}, "groupoid");
        read(g, "N", c.groupoid.N, "groupoid");
        read(g, "N_g", c.groupoid.N_g, "groupoid");
        read(g, "anchor_N", c.groupoid.anchor_N, "groupoid");
    }
    if (j.contains("nctorus")) {
        const auto& n = j["nctorus"];
        check_keys(n, {"theta"}, "nctorus");
        read(n, "theta", c.nctorus.theta, "nctorus");
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        check_keys(o, {"format", "directory"}, "output");
        read(o, "format", c.output.format, "output");
        read(o, "directory", c.output.directory, "output");
    }
    c.tameness.seed = c.seed;
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    const json j = read_json_file(path);
    return config_from_json(j);
}

}  // namespace microsing
