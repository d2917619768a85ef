#pragma once
// Schema-versioned run reports. The hashed section holds everything that must be
// reproducible from (config, seed); wall-clock timings live outside it.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "microsing/serialization.hpp"

namespace microsing {

inline constexpr const char* kReportSchema = "microsing.report/1";

enum class Status { Pass, Fail, Inconclusive, Info };
const char* to_string(Status s) noexcept;

struct CheckResult {
    std::string name;
    Status status = Status::Info;
    json data = json::object();
};

class RunReport {
public:
    RunReport(std::string command, json config, std::uint64_t seed);

    void add(CheckResult r) { checks_.push_back(std::move(r)); }
    void set_timing(const std::string& key, double seconds) { timings_[key] = seconds; }
    const std::vector<CheckResult>& checks() const noexcept { return checks_; }
    const std::string& command() const noexcept { return command_; }

    // Inconclusive counts as not ok: no check passes silently.
    bool ok() const noexcept;
    json summary() const;
    json hashed_section() const;
    std::string hash() const;  // FNV-1a 64 over the compact dump of hashed_section()
    json to_json() const;
    // one row per check: name,status,data (data as compact JSON)
    std::string to_csv() const;

private:
    std::string command_;
    json config_;
    std::uint64_t seed_;
    std::vector<CheckResult> checks_;
    std::map<std::string, double> timings_;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

// JSON arrays of grid-cell sets with their coordinates
json cells_to_json(const std::vector<std::pair<std::size_t, std::size_t>>& cells);

}  // namespace microsing
