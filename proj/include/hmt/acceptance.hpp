#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hmt {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;     ///< one human-readable line
    nlohmann::json metrics;  ///< deterministic numbers only, no timings
    double seconds = 0.0;
};

struct AcceptanceRun {
    std::vector<CriterionResult> criteria;
    std::string record;     ///< acceptance.json contents
    std::string sweep_csv;  ///< sweep.csv contents

    bool all_pass() const;
};

inline constexpr int criterion_count = 10;

/// Runs the selected criteria (all when empty).  Criterion 10 executes
/// criteria 1..9 twice and compares the serialized artifacts byte for byte.
AcceptanceRun run_acceptance(const std::vector<int>& selection = {});

/// "PASS  3  title: summary"
std::string format_line(const CriterionResult& r);

}  // namespace hmt
