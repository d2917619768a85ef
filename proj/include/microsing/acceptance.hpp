#pragma once
// The acceptance suite: eleven end-to-end property checks, each reduced to a single
// pass/fail verdict with supporting numbers. Shared by `microsing selftest` and the
// standalone acceptance binary.

#include <functional>
#include <string>
#include <vector>

#include "microsing/config.hpp"
#include "microsing/report.hpp"

namespace microsing {

struct CriterionOutcome {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    json data = json::object();
    double seconds = 0.0;
};

struct AcceptanceOptions {
    RunConfig config{};
    bool quick = false;        // smaller samples for the randomized criteria
    bool determinism = true;   // criterion 11 reruns the quick suite twice
    double time_budget = 600.0;
};

using AcceptanceProgress = std::function<void(const CriterionOutcome&)>;

std::vector<CriterionOutcome> run_acceptance(const AcceptanceOptions& opt, const AcceptanceProgress& progress = {});
// "PASS  3  classifier/oracle agreement  (20/20 agree)"
std::string format_line(const CriterionOutcome& c);
RunReport acceptance_report(const std::vector<CriterionOutcome>& outcomes, const AcceptanceOptions& opt,
                            const std::string& command = "selftest");

}  // namespace microsing
