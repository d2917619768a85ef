#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(MICROSING_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json run_json(const std::string& args, int expected_code = 0) {
    const auto r = run(args);
    INFO(args);
    REQUIRE(r.code == expected_code);
    return json::parse(r.out);
}

const json* result(const json& report, const std::string& name) {
    for (const auto& r : report["results"])
        if (r["name"] == name) return &r;
    return nullptr;
}

fs::path scratch_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("microsing_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(run("--help").code == 0);
    CHECK(run("").code == 2);
    CHECK(run("bogus").code == 2);
    CHECK(run("analyze nonsense:1").code == 2);
    CHECK(run("--format xml analyze delta:0").code == 2);
    CHECK(run("--config /nonexistent/cfg.json analyze delta:0").code == 3);

    const auto d = scratch_dir("cfg");
    std::ofstream(d / "bad.json") << R"({"tameness": {"bogus": 1}})";
    CHECK(run("--config " + (d / "bad.json").string() + " analyze delta:0").code == 2);
    std::ofstream(d / "elliptic.json") << R"({"egorov": {"c": {"constant": 0.1, "cos": [[1, 0.5]]}}})";
    CHECK(run("--config " + (d / "elliptic.json").string() + " propagate").code == 2);
}

TEST_CASE("analyze reports verdicts and agreement") {
    const auto d = run_json("analyze delta:0");
    CHECK(d["command"] == "analyze");
    CHECK(d["summary"]["ok"] == true);
    const auto* reg = result(d, "regularity");
    REQUIRE(reg != nullptr);
    CHECK(reg->at("data").at("regular") == false);
    const auto* agree = result(d, "agreement");
    REQUIRE(agree != nullptr);
    CHECK(agree->at("status") == "pass");

    const auto s = run_json("analyze random-smooth:7");
    CHECK(result(s, "regularity")->at("data").at("regular") == true);
}

TEST_CASE("seeded runs are reproducible") {
    const auto a = run_json("--seed 4 analyze random:3");
    const auto b = run_json("--seed 4 analyze random:3");
    CHECK(a["hash"] == b["hash"]);
    CHECK(a["seed"] == 4);
}

TEST_CASE("wavefront output and files") {
    const auto d = scratch_dir("wf");
    // with --out the report goes to the file only
    const auto w = run("--out " + d.string() + " wavefront hardy");
    CHECK(w.code == 0);
    CHECK(w.out.empty());
    REQUIRE(fs::exists(d / "wavefront.json"));
    const auto r = json::parse(std::ifstream(d / "wavefront.json"));
    CHECK(r["results"] == run_json("wavefront hardy")["results"]);
    const auto* wf = result(r, "wavefront");
    REQUIRE(wf != nullptr);
    for (const auto& p : wf->at("data").at("points")) CHECK(p["direction"][0].get<double>() > 0.0);
    CHECK(fs::exists(d / "wavefront_heatmap.csv"));
}

TEST_CASE("propagate at t = 0 leaves the wavefront in place") {
    const auto r = run_json("propagate --t 0");
    CHECK(result(r, "propagation")->at("data").at("distance_cells") == 0.0);
    CHECK(result(r, "propagation")->at("status") == "pass");
}

TEST_CASE("csv format") {
    const auto r = run("--format csv groupoid --demo equivariance");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("name,status", 0) == 0);
    CHECK(r.out.find("\"equivariance_laplacian\",pass") != std::string::npos);
}

TEST_CASE("groupoid and nctorus demos") {
    CHECK(run_json("groupoid --demo equivariance")["summary"]["ok"] == true);
    const auto n = run_json("nctorus");
    CHECK(n["summary"]["ok"] == true);
    CHECK(result(n, "example_member")->at("data").at("member") == true);

    const auto d = scratch_dir("nc");
    std::ofstream(d / "fv1.json") << R"({"theta": "5/7", "terms": {"1": {"0": [1, 0]}}})";
    const auto c = run_json("nctorus --check-wf " + (d / "fv1.json").string());
    CHECK(c["summary"]["ok"] == true);
    std::ofstream(d / "other.json") << R"({"theta": "3/7", "terms": {"1": {"0": [1, 0]}}})";
    CHECK(run("nctorus --theta 5/7 --check-wf " + (d / "other.json").string()).code == 2);
}
