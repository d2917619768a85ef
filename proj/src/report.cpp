#include "microsing/report.hpp"

#include <cstdio>
#include <sstream>

namespace microsing {

const char* to_string(Status s) noexcept {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
        case Status::Info: return "info";
    }
    return "?";
}

RunReport::RunReport(std::string command, json config, std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config)), seed_(seed) {}

bool RunReport::ok() const noexcept {
    for (const auto& c : checks_)
        if (c.status == Status::Fail || c.status == Status::Inconclusive) return false;
    return true;
}

json RunReport::summary() const {
    int pass = 0, fail = 0, inconclusive = 0, info = 0;
    for (const auto& c : checks_) {
        switch (c.status) {
            case Status::Pass: ++pass; break;
            case Status::Fail: ++fail; break;
            case Status::Inconclusive: ++inconclusive; break;
            case Status::Info: ++info; break;
        }
    }
    return {{"pass", pass}, {"fail", fail}, {"inconclusive", inconclusive}, {"info", info}, {"ok", ok()}};
}

json RunReport::hashed_section() const {
    json results = json::array();
    for (const auto& c : checks_) results.push_back({{"name", c.name}, {"status", to_string(c.status)}, {"data", c.data}});
    return {{"schema", kReportSchema}, {"command", command_}, {"config", config_}, {"seed", seed_},
            {"results", std::move(results)}, {"summary", summary()}};
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string RunReport::hash() const { return hex64(fnv1a64(hashed_section().dump())); }

json RunReport::to_json() const {
    json j = hashed_section();
    j["hash"] = hash();
    j["timings"] = timings_;
    return j;
}

std::string RunReport::to_csv() const {
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    std::ostringstream os;
    os << "name,status,data\n";
    for (const auto& c : checks_) os << quote(c.name) << ',' << to_string(c.status) << ',' << quote(c.data.dump()) << '\n';
    return os.str();
}

json cells_to_json(const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
    json a = json::array();
    for (const auto& [i, j] : cells) a.push_back({i, j});
    return a;
}

}  // namespace microsing
