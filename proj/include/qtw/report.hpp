#pragma once

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qtw {

struct Report {
    std::string relation;
    long vectors_checked = 0;
    bool ok = true;
    std::optional<std::string> first_failure;

    void fail(const std::string& what) {
        if (ok) first_failure = what;
        ok = false;
    }

    nlohmann::json to_json() const {
        nlohmann::json j = {{"relation", relation}, {"vectors_checked", vectors_checked}, {"status", ok ? "pass" : "fail"}};
        if (first_failure) j["first_failure"] = *first_failure;
        return j;
    }
};

inline bool all_ok(const std::vector<Report>& rs) {
    for (const auto& r : rs)
        if (!r.ok) return false;
    return true;
}

inline nlohmann::json to_json(const std::vector<Report>& rs) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rs) j.push_back(r.to_json());
    return j;
}

}  // namespace qtw
