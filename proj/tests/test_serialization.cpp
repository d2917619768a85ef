#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "microsing/config.hpp"
#include "microsing/corpus.hpp"
#include "microsing/error.hpp"
#include "microsing/report.hpp"
#include "microsing/serialization.hpp"

using namespace microsing;
namespace fs = std::filesystem;

TEST_CASE("distributions, kernels and operators survive a JSON round trip exactly") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (int d = 1; d <= 2; ++d) {
        const FrequencyLattice lat(d, d == 1 ? 9 : 4);
        const auto u = SpectralDistribution::from_function(lat, [&](Mode) { return cplx(g(rng), g(rng)); });
        CHECK(distribution_from_json(json::parse(to_json(u).dump())) == u);
        Eigen::MatrixXcd M(lat.size(), lat.size());
        for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = cplx(g(rng), g(rng));
        const SmoothingKernel T(lat, M);
        CHECK(kernel_from_json(json::parse(to_json(T).dump())).matrix() == M);
        const auto P = SymbolOperator::bessel_potential(lat, 1.0);
        const auto Q = operator_from_json(json::parse(to_json(P).dump()));
        CHECK(Q.order() == 1.0);
        CHECK(Q.to_matrix() == P.to_matrix());
    }
}

TEST_CASE("malformed containers are rejected") {
    const FrequencyLattice lat(1, 4);
    auto j = to_json(corpus::delta(lat));
    j["data"].erase(0);
    CHECK_THROWS_AS(distribution_from_json(j), Error);
    CHECK_THROWS_AS(distribution_from_json(json{{"kind", "distribution"}}), Error);
    auto k = to_json(corpus::delta(lat));
    k["kind"] = "kernel";
    CHECK_THROWS_AS(distribution_from_json(k), Error);
}

TEST_CASE("file output is atomic and read back") {
    const auto dir = fs::temp_directory_path() / "microsing_ser_test";
    fs::create_directories(dir);
    const auto path = (dir / "u.json").string();
    const FrequencyLattice lat(1, 5);
    write_text_atomic(path, to_json(corpus::hardy(lat)).dump());
    CHECK(read_distribution_file(path) == corpus::hardy(lat));
    CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), Error);
    try {
        read_json_file((dir / "missing.json").string());
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
    fs::remove_all(dir);
}

TEST_CASE("configuration overrides and validation") {
    const auto c = config_from_json(json::parse(R"({"lattice": {"d": 1, "N": 64}, "seed": 9,
        "tameness": {"window": [5, 12], "noise_rel": 1e-12}, "nctorus": {"theta": "2/3"}})"));
    CHECK(c.N == 64);
    CHECK(c.seed == 9);
    CHECK(c.tameness.seed == 9);
    CHECK(c.tameness.n_lo == 5);
    CHECK(c.tameness.noise_rel == 1e-12);
    CHECK(c.nctorus.theta == "2/3");
    CHECK(config_from_json(c.to_json()).to_json() == c.to_json());
    auto kind = [](const char* text) {
        try {
            config_from_json(json::parse(text));
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Usage;
    };
    CHECK(kind(R"({"bogus": 1})") == ErrorKind::InvalidConfig);
    CHECK(kind(R"({"tameness": {"window": [6, 8]}})") == ErrorKind::InvalidConfig);
    CHECK(kind(R"({"egorov": {"c": {"constant": 0.0}}})") == ErrorKind::InvalidConfig);
    CHECK(kind(R"({"output": {"format": "xml"}})") == ErrorKind::InvalidConfig);
}

TEST_CASE("report hash covers results and ignores timings") {
    RunReport a("analyze", json{{"N", 8}}, 1), b("analyze", json{{"N", 8}}, 1);
    a.add({"x", Status::Pass, {{"v", 1.5}}});
    b.add({"x", Status::Pass, {{"v", 1.5}}});
    a.set_timing("total", 0.1);
    b.set_timing("total", 9.0);
    CHECK(a.hash() == b.hash());
    CHECK(a.to_json()["schema"] == kReportSchema);
    b.add({"y", Status::Inconclusive, {}});
    CHECK(a.hash() != b.hash());
    CHECK(a.ok());
    CHECK_FALSE(b.ok());
    CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
}
