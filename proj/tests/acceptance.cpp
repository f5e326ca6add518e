// One line per acceptance criterion; details follow for failing and informational checks.

#include "qtw/suite.hpp"

#include <cstdio>
#include <iostream>
#include <map>

using namespace qtw;

namespace {

// Wall-clock limits in seconds; criteria without an entry are untimed.
const std::map<int, double> kTimeLimit = {{1, 30.0}, {2, 60.0}, {6, 300.0}};

}  // namespace

int main() {
    std::vector<SuiteCheck> checks = run_suite({}, [](const SuiteCheck& c) {
        std::cerr << "  [" << c.criterion << "] " << (c.info ? "info" : c.report.ok ? "pass" : "FAIL") << "  "
                  << c.report.relation << "\n";
    });

    bool all_pass = true;
    for (const auto& g : suite_groups()) {
        int passed = 0, failed = 0;
        double seconds = 0;
        for (const auto& c : checks) {
            if (c.criterion != g.criterion) continue;
            seconds += c.seconds;
            if (!c.info) c.report.ok ? ++passed : ++failed;
        }
        auto limit = kTimeLimit.find(g.criterion);
        bool in_time = limit == kTimeLimit.end() || seconds <= limit->second;
        bool ok = failed == 0 && passed > 0 && in_time;
        all_pass = all_pass && ok;
        std::printf("criterion %2d: %s  %s  (%d/%d checks, %.1f s", g.criterion, ok ? "PASS" : "FAIL", g.anchor.c_str(),
                    passed, passed + failed, seconds);
        if (limit != kTimeLimit.end()) std::printf(", limit %.0f s", limit->second);
        std::printf(")\n");
        if (!in_time) std::printf("    over the time limit\n");
        for (const auto& c : checks) {
            if (c.criterion != g.criterion || (c.report.ok && !c.info)) continue;
            std::printf("    %s %s\n", c.info ? (c.report.ok ? "info:" : "info (fails):") : "failed:",
                        c.report.relation.c_str());
            if (c.report.first_failure) std::printf("      %s\n", c.report.first_failure->c_str());
        }
    }
    std::fflush(stdout);
    return all_pass ? 0 : 1;
}
