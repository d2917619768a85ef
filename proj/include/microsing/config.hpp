#pragma once
// Resolved run configuration. Every field has a documented default; JSON files override
// a subset and the result is validated before any computation starts.

#include <cstdint>
#include <string>
#include <vector>

#include "microsing/microlocal.hpp"
#include "microsing/serialization.hpp"
#include "microsing/tameness.hpp"
#include "microsing/trigpoly.hpp"

namespace microsing {

struct WaveSpeedProfile {
    double constant = 1.0;
    std::vector<std::pair<int, double>> cos_terms;  // (nu, a): a cos(nu x)
    std::vector<std::pair<int, double>> sin_terms;  // (nu, b): b sin(nu x)
    TrigPoly to_trigpoly() const;
};

struct RunConfig {
    int dim = 1;
    int N = 128;
    std::uint64_t seed = 1;

    OracleConfig oracle{};
    DetectorConfig detector{};
    DictionaryConfig dictionary{};
    TamenessConfig tameness{};

    struct Egorov {
        double dt = 1e-3;
        std::vector<double> times{0.4, 0.7, 1.3};
        WaveSpeedProfile c{1.0, {{1, 0.3}}, {}};
        double c_min = 0.05;
        double tolerance = 2.0;  // grid cells
    } egorov;

    struct Groupoid {
        int N = 16;
        int N_g = 8;
        int anchor_N = 64;  // detector scale for the anchor demo
    } groupoid;

    struct NCTorus {
        std::string theta = "5/7";
    } nctorus;

    struct Output {
        std::string format = "json";
        std::string directory;  // empty: report to stdout
    } output;

    void validate() const;
    json to_json() const;
    FrequencyLattice lattice() const { return FrequencyLattice(dim, N); }
};

// Overrides on top of `base`; unknown keys are rejected.
RunConfig config_from_json(const json& j, RunConfig base = {});
RunConfig load_config(const std::string& path);

}  // namespace microsing
