#pragma once

#include "qtw/report.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace qtw {

struct SuiteGroup {
    int criterion;
    std::string name;    // filter key for --only
    std::string anchor;  // what the group reproduces
};
const std::vector<SuiteGroup>& suite_groups();

// Informational checks are reported but never count as failures.
struct SuiteCheck {
    int criterion = 0;
    std::string group;
    std::string anchor;
    Report report;
    bool info = false;
    double seconds = 0;

    nlohmann::json to_json() const;  // without timing, so that output is byte-stable
};

// Runs the selected groups (all when `only` is empty) in group order; throws on an unknown group name.
std::vector<SuiteCheck> run_suite(const std::set<std::string>& only = {},
                                  const std::function<void(const SuiteCheck&)>& progress = {});

}  // namespace qtw
