// Runs the full acceptance suite and prints one PASS/FAIL line per criterion.
// Usage: acceptance [--quick] [--budget SECONDS]

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "microsing/acceptance.hpp"

int main(int argc, char** argv) {
    microsing::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            opt.quick = true;
        } else if (std::strcmp(argv[i], "--budget") == 0 && i + 1 < argc) {
            opt.time_budget = std::atof(argv[++i]);
        } else {
            std::cerr << "usage: acceptance [--quick] [--budget SECONDS]\n";
            return 2;
        }
    }
    int failed = 0;
    const auto outcomes = microsing::run_acceptance(opt, [&](const microsing::CriterionOutcome& o) {
        std::cout << microsing::format_line(o) << std::endl;
        if (!o.pass) ++failed;
    });
    std::cout << (outcomes.size() - std::size_t(failed)) << "/" << outcomes.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
