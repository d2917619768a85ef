#include "microsing/serialization.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "microsing/error.hpp"

namespace microsing {

namespace {

json lattice_json(const FrequencyLattice& lat) { return {{"d", lat.dim()}, {"N", lat.bandlimit()}}; }

json complex_array(const cplx* z, std::size_t n) {
    json a = json::array();
    for (std::size_t i = 0; i < n; ++i) a.push_back({z[i].real(), z[i].imag()});
    return a;
}

std::vector<cplx> read_complex_array(const json& a, std::size_t expected) {
    require(a.is_array(), ErrorKind::InvalidInput, "data must be an array");
    require(a.size() == expected, ErrorKind::InvalidInput,
            "data has " + std::to_string(a.size()) + " entries, expected " + std::to_string(expected));
    std::vector<cplx> out;
    out.reserve(expected);
    for (const auto& e : a) {
        require(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number(), ErrorKind::InvalidInput,
                "complex entries must be [re, im] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

void expect_kind(const json& j, const char* kind) {
    require(j.is_object() && j.contains("kind") && j["kind"] == kind, ErrorKind::InvalidInput,
            std::string("expected container of kind '") + kind + "'");
}

}  // namespace

FrequencyLattice lattice_from_json(const json& j) {
    require(j.is_object() && j.contains("lattice"), ErrorKind::InvalidInput, "container lacks lattice");
    const auto& l = j["lattice"];
    require(l.contains("d") && l.contains("N") && l["d"].is_number_integer() && l["N"].is_number_integer(),
            ErrorKind::InvalidInput, "lattice needs integer d and N");
    return FrequencyLattice(l["d"].get<int>(), l["N"].get<int>());
}

json to_json(const SpectralDistribution& u) {
    return {{"lattice", lattice_json(u.lattice())}, {"kind", "distribution"},
            {"data", complex_array(u.values().data(), u.size())}};
}

json to_json(const SmoothingKernel& T) {
    // Eigen is column-major; emit row-major
    const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R = T.matrix();
    return {{"lattice", lattice_json(T.lattice())}, {"kind", "kernel"},
            {"data", complex_array(R.data(), std::size_t(R.size()))}};
}

json to_json(const SymbolOperator& P) {
    const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R = P.to_matrix();
    return {{"lattice", lattice_json(P.lattice())}, {"kind", "operator"}, {"order", P.order()},
            {"data", complex_array(R.data(), std::size_t(R.size()))}};
}

SpectralDistribution distribution_from_json(const json& j) {
    expect_kind(j, "distribution");
    const auto lat = lattice_from_json(j);
    return SpectralDistribution(lat, read_complex_array(j.at("data"), lat.size()));
}

SmoothingKernel kernel_from_json(const json& j) {
    expect_kind(j, "kernel");
    const auto lat = lattice_from_json(j);
    const auto n = lat.size();
    const auto v = read_complex_array(j.at("data"), n * n);
    Eigen::MatrixXcd M = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        v.data(), Eigen::Index(n), Eigen::Index(n));
    return SmoothingKernel(lat, std::move(M));
}

SymbolOperator operator_from_json(const json& j) {
    expect_kind(j, "operator");
    const auto lat = lattice_from_json(j);
    const auto n = lat.size();
    const auto v = read_complex_array(j.at("data"), n * n);
    const Eigen::MatrixXcd M = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        v.data(), Eigen::Index(n), Eigen::Index(n));
    require(j.contains("order") && j["order"].is_number(), ErrorKind::InvalidInput, "operator needs an order");
    return SymbolOperator::from_matrix(lat, j["order"].get<double>(), M);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, "malformed JSON in '" + path + "': " + e.what());
    }
}

SpectralDistribution read_distribution_file(const std::string& path) {
    return distribution_from_json(read_json_file(path));
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) fail(ErrorKind::Io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorKind::Io, "cannot rename into '" + path + "'");
    }
}

}  // namespace microsing
